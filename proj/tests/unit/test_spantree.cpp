#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "arc/oracle.hpp"
#include "arc/spantree.hpp"
#include "support.hpp"

using namespace arc;

namespace {

std::size_t brute_stab(const WeightedPointSet& pts, const QueryMultiset& qs, std::uint32_t a, std::uint32_t b,
                       const EpsParams& params) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) c += eps_stabs(qs.support().point(i), pts.point(a), pts.point(b), params);
    return c;
}

double weighted_brute(const WeightedPointSet& pts, const QueryMultiset& qs, std::uint32_t a, std::uint32_t b,
                      const EpsParams& params) {
    double c = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (eps_stabs(qs.support().point(i), pts.point(a), pts.point(b), params)) c += qs.sampler().weight(i);
    }
    return c;
}

void check_bookkeeping(const WeightedPointSet& pts, const QueryMultiset& qs, const std::vector<Edge>& edges,
                       const EpsParams& params) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const auto sigma = oracle::exact_sigma(qs.support().point(i), edges, pts, params);
        REQUIRE(qs.stab_exponents()[i] == sigma);
        const double actual = std::ldexp(qs.sampler().weight(i), qs.sampler().scale_exponent());
        REQUIRE(actual == std::ldexp(1.0, static_cast<int>(sigma)));
    }
}

}  // namespace

TEST_CASE("grid queries") {
    const WeightedPointSet origin(1, {0.0}, {1.0});
    const auto q1 = generate_grid_queries(origin, EpsParams(0.5), GridSpec(0.5));
    REQUIRE(q1.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(q1.support().point(i)[0] == -1.5 + 0.5 * static_cast<double>(i));
    for (std::size_t i = 0; i < 7; ++i) CHECK(q1.sampler().weight(i) == 1.0);

    const WeightedPointSet twice(1, {0.0, 0.0}, {1.0, 1.0});
    CHECK(generate_grid_queries(twice, EpsParams(0.5), GridSpec(0.5)).support() == q1.support());

    const WeightedPointSet plane(2, {0.0, 0.0}, {1.0});
    const auto q2 = generate_grid_queries(plane, EpsParams(0.5), GridSpec(0.25));
    std::size_t count = 0;
    for (int i = -10; i <= 10; ++i) {
        for (int j = -10; j <= 10; ++j) count += (i * i + j * j) * 0.0625 <= 2.25 ? 1 : 0;
    }
    CHECK(q2.size() == count);

    const auto high = testing::random_points(3, 9, 1);
    CHECK_THROWS_WITH_AS(generate_grid_queries(high, EpsParams(0.5), GridSpec(0.5)),
                         "grid enumeration infeasible; use sampled queries", InfeasibleError);
}

TEST_CASE("light edge examples") {
    const WeightedPointSet near_pair = WeightedPointSet::from_points({{0.0, 0.0}, {3.0, 0.0}, {3.0, 1e-6}, {0.0, 3.0}},
                                                                     std::vector<double>(4, 1.0));
    const EpsParams params(0.5);
    const auto qs = generate_grid_queries(near_pair, params, GridSpec(0.25));
    const Edge e = find_light_edge(near_pair, qs, params, LightEdgeParams::defaults(0.5), Seed{1});
    CHECK(e == Edge(1, 2));
    CHECK(brute_stab(near_pair, qs, e.a, e.b, params) == 0);

    const WeightedPointSet same(2, std::vector<double>(10, 0.5), std::vector<double>(5, 1.0));
    const auto qsame = generate_grid_queries(same, params, GridSpec(0.25));
    const Edge s = find_light_edge(same, qsame, params, LightEdgeParams::defaults(0.5), Seed{1});
    CHECK(brute_stab(same, qsame, s.a, s.b, params) == 0);

    const WeightedPointSet lone(2, {0.0, 0.0}, {1.0});
    CHECK_THROWS_AS(find_light_edge(lone, qsame, params, LightEdgeParams::defaults(0.5), Seed{1}), ContractViolation);
}

TEST_CASE("light edge against brute force") {
    const EpsParams params(0.5);
    const auto lp = LightEdgeParams::defaults(0.5);
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
        const auto pts = testing::random_points(20, 2, 100 + inst, 2.0);
        const auto qs = generate_grid_queries(pts, params, GridSpec(0.2));
        std::size_t global = std::numeric_limits<std::size_t>::max();
        for (std::uint32_t a = 0; a < 20; ++a) {
            for (std::uint32_t b = a + 1; b < 20; ++b) global = std::min(global, brute_stab(pts, qs, a, b, params));
        }
        std::vector<std::uint32_t> all(20);
        std::iota(all.begin(), all.end(), 0U);
        const Seed seed{inst};
        const auto cands = light_edge_candidates(pts, all, qs, params, lp, seed);
        const Edge e = find_light_edge(pts, qs, params, lp, seed);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) best = std::min(best, weighted_brute(pts, qs, c.a, c.b, params));
        CHECK(weighted_brute(pts, qs, e.a, e.b, params) == best);
        CHECK(brute_stab(pts, qs, e.a, e.b, params) <= 2 * global);
    }
}

TEST_CASE("stab table agrees with the predicate") {
    const auto pts = testing::random_points(15, 3, 7, 2.0);
    const auto qs = testing::random_points(130, 3, 8, 3.0);
    const EpsParams params(0.3);
    const StabTable t(pts, qs, params);
    for (std::uint32_t a = 0; a < 15; ++a) {
        for (std::uint32_t b = a + 1; b < 15; ++b) {
            std::vector<std::uint32_t> expect;
            for (std::uint32_t i = 0; i < qs.size(); ++i) {
                if (eps_stabs(qs.point(i), pts.point(a), pts.point(b), params)) expect.push_back(i);
            }
            CHECK(t.stabbing_queries(a, b) == expect);
            CHECK(t.stab_count(a, b) == expect.size());
        }
    }
}

TEST_CASE("forest") {
    const EpsParams params(0.5);
    const auto lp = LightEdgeParams::defaults(0.5);
    const WeightedPointSet two = WeightedPointSet::from_points({{0.0, 0.0}, {1.0, 1.0}}, {1.0, 1.0});
    auto q2 = generate_grid_queries(two, params, GridSpec(0.25));
    const auto f2 = build_low_stab_forest(two, q2, params, lp, Seed{1});
    CHECK(f2.edges.size() == 1);
    CHECK(f2.components.components() == 1);
    check_bookkeeping(two, q2, f2.edges, params);

    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        const auto pts = testing::random_points(16, 2, 200 + inst);
        auto qs = generate_grid_queries(pts, params, GridSpec(0.1));
        const auto f = build_low_stab_forest(pts, qs, params, lp, Seed{inst});
        CHECK(f.edges.size() == 8);
        check_bookkeeping(pts, qs, f.edges, params);
        std::size_t max_sigma = 0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            max_sigma = std::max(max_sigma, oracle::exact_sigma(qs.support().point(i), f.edges, pts, params));
        }
        const double log_total = std::log2(qs.sampler().total()) + qs.sampler().scale_exponent();
        CHECK(static_cast<double>(max_sigma) <= log_total);
    }
}

TEST_CASE("spanning tree") {
    const EpsParams params(0.5);
    const auto lp = LightEdgeParams::defaults(0.5);

    const WeightedPointSet two = WeightedPointSet::from_points({{0.0}, {5.0}}, {1.0, 1.0});
    auto q2 = generate_grid_queries(two, params, GridSpec(0.5));
    const auto t2 = build_low_stab_tree(two, q2, params, lp, Seed{1});
    REQUIRE(t2.edges.size() == 1);
    CHECK(t2.edges[0] == Edge(0, 1));

    const WeightedPointSet line = WeightedPointSet::from_points({{0.0}, {1.0}, {2.0}}, {1.0, 1.0, 1.0});
    auto q3 = generate_grid_queries(line, params, GridSpec(0.5));
    const auto t3 = build_low_stab_tree(line, q3, params, lp, Seed{1});
    CHECK(t3.edges.size() == 2);
    CHECK(t3.is_valid());

    for (std::uint64_t inst = 0; inst < 5; ++inst) {
        const auto pts = testing::random_points(32, 2, 300 + inst, 2.0);
        auto qs = generate_grid_queries(pts, params, GridSpec(0.1));
        auto qs_again = qs;
        const auto t = build_low_stab_tree(pts, qs, params, lp, Seed{inst});
        CHECK(t.is_valid());
        CHECK(t.rounds <= 6);
        check_bookkeeping(pts, qs, t.edges, params);
        std::size_t max_sigma = 0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            max_sigma = std::max(max_sigma, oracle::exact_sigma(qs.support().point(i), t.edges, pts, params));
        }
        MESSAGE("instance " << inst << ": max sigma over " << qs.size() << " grid queries = " << max_sigma);
        const auto again = build_low_stab_tree(pts, qs_again, params, lp, Seed{inst});
        CHECK(again.edges == t.edges);
    }
}

TEST_CASE("union find and edges") {
    UnionFind uf(5);
    CHECK(uf.unite(0, 1));
    CHECK(uf.unite(3, 4));
    CHECK_FALSE(uf.unite(1, 0));
    CHECK(uf.components() == 3);
    CHECK(Edge(4, 2) == Edge(2, 4));
    CHECK_THROWS_AS(Edge(3, 3), ContractViolation);
    Forest f(3);
    f.add(Edge(0, 1));
    f.add(Edge(1, 2));
    CHECK_THROWS_AS(f.add(Edge(0, 2)), ContractViolation);
}
