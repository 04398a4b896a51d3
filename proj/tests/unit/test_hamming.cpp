#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arc/hamming.hpp"
#include "support.hpp"

using namespace arc;

namespace {

// Closed form of the bucket-collision integral.
double collision_closed_form(double dist, double width) {
    const double a = width / dist;
    const double phi2 = 1.0 - std::erfc(a / std::numbers::sqrt2);
    return phi2 - (dist / width) * (2.0 / std::sqrt(2.0 * std::numbers::pi)) * (1.0 - std::exp(-0.5 * a * a));
}

}  // namespace

TEST_CASE("collision_prob matches the closed form") {
    for (double w : {0.3, 1.1, 1.5, 1.9, 4.0}) {
        for (double d = 0.05; d < 6.0; d *= 1.3) {
            CHECK(std::abs(collision_prob(d, w) - collision_closed_form(d, w)) <= 1e-9);
        }
    }
    CHECK(collision_prob(1e-6, 1.5) > 0.9999);
    CHECK(collision_prob(1.5, 1.5) == doctest::Approx(0.3687).epsilon(1e-4));
    CHECK_THROWS_AS(collision_prob(0.0, 1.0), ContractViolation);
    CHECK_THROWS_AS(collision_prob(1.0, -1.0), ContractViolation);
}

TEST_CASE("collision_prob is decreasing in distance") {
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double p = collision_prob(0.05 * i, 1.5);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("separation of the two collision probabilities") {
    for (double eps : {0.2, 0.5}) {
        const double p1 = collision_prob(1.0, 1.0 + eps);
        const double p2 = collision_prob(1.0 + eps, 1.0 + eps);
        CHECK(p1 - p2 >= eps / 5.0);
        CHECK(p2 >= 0.25);
    }
}

TEST_CASE("dimension of the embedding") {
    CHECK(default_dprime(1024, 0.5) == 8);
    CHECK(default_dprime(1 << 20, 0.5) == 16);
    CHECK(default_dprime(2, 0.9) == 8);
    CHECK_THROWS_AS(default_dprime(1, 0.5), ContractViolation);
    const auto e = make_embedding(3, 1 << 20, 0.5, Seed{1});
    CHECK(e.dprime() == 16);
    CHECK(e.width() == 1.5);
}

TEST_CASE("near threshold sits below the far mean") {
    for (int k = 1; k <= 9; ++k) {
        const double eps = 0.1 * k;
        const HammingEmbedding e(4, 64, eps, Seed{2});
        CHECK(e.theta() < e.mu2() * (1.0 - eps / 80.0));
        CHECK(e.theta() < e.far_threshold());
        // The far threshold theta + eps d' exceeds the far mean for every eps.
        CHECK(e.far_threshold() > e.mu2());
    }
}

TEST_CASE("embed determinism and bucket consistency") {
    Rng rng(Seed{5});
    const HammingEmbedding e(6, 40, 0.5, Seed{6});
    for (int t = 0; t < 500; ++t) {
        const Point p = testing::random_point(6, rng, -3, 3);
        const Point q = testing::random_point(6, rng, -3, 3);
        const BitCode a = e.embed(p);
        CHECK(a == e.embed(p));
        CHECK(a.size() == 40);
        std::size_t bucket_diff = 0;
        for (std::size_t i = 0; i < 40; ++i) bucket_diff += e.bucket(i, p) != e.bucket(i, q) ? 1 : 0;
        const std::size_t h = hamming_distance(a, e.embed(q));
        CHECK(h <= bucket_diff);
        if (bucket_diff == 0) CHECK(a == e.embed(q));
    }
    CHECK_THROWS_AS(e.embed(Point(5, 0.0)), ContractViolation);
}

TEST_CASE("shifts lie in [0, width)") {
    const HammingEmbedding e(1, 200, 0.7, Seed{9});
    const Point zero{0.0};
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(e.bucket(i, zero) == 0);
    }
}

TEST_CASE("bit code ordering") {
    BitCode a(70), b(70);
    CHECK(a == b);
    b.set(65, true);
    CHECK(a < b);
    a.set(3, true);
    CHECK(a > b);
    CHECK(hamming_distance(a, b) == 2);
    CHECK(BitCode(8) < BitCode(9));
}

TEST_CASE("mean code distance of a unit pair") {
    const double eps = 0.5;
    const std::size_t dp = 64;
    const Point p{0, 0, 0}, q{1, 0, 0};
    double total = 0.0;
    double mu1 = 0.0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const HammingEmbedding e(3, dp, eps, Seed{s});
        mu1 = e.mu1();
        total += static_cast<double>(hamming_distance(e.embed(p), e.embed(q)));
    }
    CHECK(total / 10000.0 <= mu1 + 3.0 * std::sqrt(static_cast<double>(dp)) / 2.0);
    CHECK(total / 10000.0 == doctest::Approx(mu1).epsilon(0.02));
}
