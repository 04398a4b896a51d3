#include "arc/hamming.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace arc {

namespace {

struct SimpsonPanel {
    double a, fa, m, fm, b, fb, whole;
};

template <typename F>
double simpson(F& f, double a, double fa, double b, double fb, double& m, double& fm) {
    m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F& f, const SimpsonPanel& p, double tol, int depth) {
    double lm, flm, rm, frm;
    const double left = simpson(f, p.a, p.fa, p.m, p.fm, lm, flm);
    const double right = simpson(f, p.m, p.fm, p.b, p.fb, rm, frm);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, tol / 2.0, depth - 1) +
           adaptive_simpson(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, tol / 2.0, depth - 1);
}

}  // namespace

double collision_prob(double dist, double width) {
    if (!(dist > 0.0) || !(width > 0.0)) throw ContractViolation("collision_prob needs positive inputs");
    // Substituting t = s / dist turns the kernel into a fixed-width Gaussian
    // on [0, width / dist]; beyond t = 40 the integrand is below 1e-300.
    const double ratio = dist / width;
    const double upper = std::min(width / dist, 40.0);
    const double c = 2.0 / std::sqrt(2.0 * std::numbers::pi);
    auto f = [&](double t) { return c * std::exp(-0.5 * t * t) * (1.0 - t * ratio); };
    const double fa = f(0.0);
    const double fb = f(upper);
    double m, fm;
    const double whole = simpson(f, 0.0, fa, upper, fb, m, fm);
    const double value = adaptive_simpson(f, {0.0, fa, m, fm, upper, fb, whole}, 1e-10, 50);
    return std::clamp(value, 0.0, 1.0);
}

void BitCode::set(std::size_t i, bool bit) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (bit) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

std::strong_ordering BitCode::operator<=>(const BitCode& other) const {
    if (auto c = length_ <=> other.length_; c != 0) return c;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        const std::uint64_t diff = words_[w] ^ other.words_[w];
        if (diff == 0) continue;
        const std::uint64_t lowest = diff & (~diff + 1);
        return (words_[w] & lowest) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
}

std::size_t hamming_distance(const BitCode& a, const BitCode& b) {
    if (a.size() != b.size()) throw ContractViolation("bit codes have different lengths");
    std::size_t total = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w) {
        total += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
    }
    return total;
}

HammingEmbedding::HammingEmbedding(std::size_t ambient_dim, std::size_t dprime, double eps, Seed seed,
                                   double radius)
    : ambient_dim_(ambient_dim), dprime_(dprime), eps_(eps), radius_(radius), width_((1.0 + eps) * radius) {
    if (ambient_dim == 0 || dprime == 0) throw ContractViolation("embedding dimensions must be positive");
    static_cast<void>(EpsParams{eps, radius});
    Rng rng(seed);
    directions_.resize(dprime * ambient_dim);
    for (double& g : directions_) g = rng.normal();
    shifts_.resize(dprime);
    for (double& s : shifts_) s = rng.uniform() * width_;
    salts_.resize(dprime);
    for (auto& salt : salts_) salt = rng();

    p1_ = collision_prob(radius, width_);
    p2_ = collision_prob(width_, width_);
    theta_ = mu1() * (1.0 + eps / 80.0);
    far_threshold_ = theta_ + eps * static_cast<double>(dprime);
}

std::int64_t HammingEmbedding::bucket(std::size_t coordinate, PointView p) const {
    const double* g = directions_.data() + coordinate * ambient_dim_;
    double dot = 0.0;
    for (std::size_t j = 0; j < ambient_dim_; ++j) dot += g[j] * p[j];
    return static_cast<std::int64_t>(std::floor((dot + shifts_[coordinate]) / width_));
}

BitCode HammingEmbedding::embed(PointView p) const {
    if (p.size() != ambient_dim_) throw ContractViolation("embedding input has wrong dimension");
    BitCode code(dprime_);
    for (std::size_t i = 0; i < dprime_; ++i) {
        const auto id = static_cast<std::uint64_t>(bucket(i, p));
        code.set(i, splitmix64(salts_[i] ^ splitmix64(id)) & 1U);
    }
    return code;
}

std::size_t default_dprime(std::size_t n_hint, double eps) {
    if (n_hint < 2) throw ContractViolation("n_hint must be at least 2");
    const double raw = std::log2(static_cast<double>(n_hint)) / (1.0 + eps * eps);
    return std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(raw)));
}

HammingEmbedding make_embedding(std::size_t ambient_dim, std::size_t n_hint, double eps, Seed seed, double radius) {
    return HammingEmbedding(ambient_dim, default_dprime(n_hint, eps), eps, seed, radius);
}

}  // namespace arc
