#include "arc/learned.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "arc/counter.hpp"
#include "arc/oracle.hpp"

namespace arc {

QuerySample::QuerySample(std::vector<Point> qs, std::string src) : queries(std::move(qs)), source(std::move(src)) {
    for (const auto& q : queries) {
        if (q.size() != queries.front().size() || q.empty()) throw ContractViolation("queries differ in dimension");
    }
}

WeightedPointSet QuerySample::as_points() const {
    return WeightedPointSet::from_points(queries, std::vector<double>(queries.size(), 1.0));
}

QuerySample uniform_queries(const WeightedPointSet& pts, std::size_t m, double margin, Seed seed) {
    const std::size_t d = pts.dim();
    Point lo(pts.point(0).begin(), pts.point(0).end());
    Point hi = lo;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], pts.point(i)[j]);
            hi[j] = std::max(hi[j], pts.point(i)[j]);
        }
    }
    Rng rng(seed);
    std::vector<Point> qs(m, Point(d));
    for (auto& q : qs) {
        for (std::size_t j = 0; j < d; ++j) q[j] = rng.uniform(lo[j] - margin, hi[j] + margin);
    }
    return {std::move(qs), "uniform"};
}

QuerySample near_data_queries(const WeightedPointSet& pts, std::size_t m, double spread, Seed seed) {
    const std::size_t d = pts.dim();
    const double sigma = spread / std::sqrt(static_cast<double>(d));
    Rng rng(seed);
    std::vector<Point> qs(m, Point(d));
    for (auto& q : qs) {
        auto p = pts.point(rng.below(pts.size()));
        for (std::size_t j = 0; j < d; ++j) q[j] = p[j] + sigma * rng.normal();
    }
    return {std::move(qs), "near-data"};
}

QuerySample gaussian_mixture_queries(const std::vector<Point>& centers, std::size_t m, double sigma, Seed seed) {
    if (centers.empty()) throw ContractViolation("mixture needs at least one center");
    Rng rng(seed);
    std::vector<Point> qs(m);
    for (auto& q : qs) {
        q = centers[rng.below(centers.size())];
        for (double& c : q) c += sigma * rng.normal();
    }
    return {std::move(qs), "mixture"};
}

Dataset generate_dataset(DataKind kind, std::size_t n, std::size_t d, Seed seed, double side, std::size_t clusters,
                         double spread) {
    if (n == 0 || d == 0) throw ContractViolation("dataset needs n > 0 and d > 0");
    Rng rng(seed);
    Dataset out;
    std::vector<double> coords(n * d);
    std::vector<double> weights(n, 1.0);
    switch (kind) {
        case DataKind::Uniform:
            for (double& c : coords) c = side * rng.uniform();
            for (double& w : weights) w = rng.uniform();
            break;
        case DataKind::Clusters: {
            if (clusters == 0) throw ContractViolation("need at least one cluster");
            out.centers.assign(clusters, Point(d));
            for (auto& c : out.centers) {
                for (double& x : c) x = side * rng.uniform();
            }
            for (std::size_t i = 0; i < n; ++i) {
                const auto& c = out.centers[rng.below(clusters)];
                for (std::size_t j = 0; j < d; ++j) coords[i * d + j] = c[j] + spread * rng.normal();
            }
            for (double& w : weights) w = rng.uniform();
            break;
        }
        case DataKind::Grid: {
            std::size_t per_axis = 1;
            while (std::pow(static_cast<double>(per_axis), static_cast<double>(d)) < static_cast<double>(n)) ++per_axis;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t k = i;
                for (std::size_t j = 0; j < d; ++j) {
                    coords[i * d + j] = side * static_cast<double>(k % per_axis);
                    k /= per_axis;
                }
            }
            break;
        }
    }
    out.points = WeightedPointSet(d, std::move(coords), std::move(weights));
    return out;
}

std::size_t default_sample_size(std::size_t n, std::size_t d, double delta, double multiplier) {
    if (n < 2) throw ContractViolation("sample size needs n >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");
    if (!(multiplier > 0.0)) throw ContractViolation("multiplier must be positive");
    const double nn = static_cast<double>(n);
    const double raw = multiplier * nn * (static_cast<double>(d) * std::log2(nn) + std::log2(1.0 / delta));
    return static_cast<std::size_t>(std::ceil(raw));
}

StabCountMatrix pair_stab_counts(const WeightedPointSet& pts, const QuerySample& sample, const EpsParams& params) {
    const std::size_t n = pts.size();
    StabCountMatrix m(n);
    const double outer = params.outer_radius();
    std::vector<std::uint32_t> near, far;
    for (const auto& q : sample.queries) {
        if (q.size() != pts.dim()) throw ContractViolation("query has wrong dimension");
        near.clear();
        far.clear();
        for (std::uint32_t i = 0; i < n; ++i) {
            if (within(q, pts.point(i), params.radius)) {
                near.push_back(i);
            } else if (beyond(q, pts.point(i), outer)) {
                far.push_back(i);
            }
        }
        for (auto a : near) {
            for (auto b : far) {
                ++m.counts[a * n + b];
                ++m.counts[b * n + a];
            }
        }
    }
    return m;
}

SpanningTree minimum_spanning_tree(const StabCountMatrix& counts) {
    const std::size_t n = counts.n;
    if (n < 2) throw ContractViolation("spanning tree needs at least two points");
    struct Weighted {
        std::uint64_t w;
        std::uint32_t a, b;
    };
    std::vector<Weighted> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) edges.push_back({counts.at(a, b), a, b});
    }
    std::sort(edges.begin(), edges.end(),
              [](const Weighted& x, const Weighted& y) { return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b); });
    UnionFind uf(n);
    SpanningTree t;
    t.n = n;
    for (const auto& e : edges) {
        if (uf.unite(e.a, e.b)) t.edges.emplace_back(e.a, e.b);
        if (t.edges.size() + 1 == n) break;
    }
    return t;
}

SpanningTree learned_spanning_tree(const WeightedPointSet& pts, const QuerySample& sample, const EpsParams& params) {
    return minimum_spanning_tree(pair_stab_counts(pts, sample, params));
}

std::uint64_t sampled_objective(const SpanningTree& t, const StabCountMatrix& counts) {
    std::uint64_t total = 0;
    for (const auto& e : t.edges) total += counts.at(e.a, e.b);
    return total;
}

SpanningTree random_spanning_tree(std::size_t n, Seed seed) {
    if (n < 1) throw ContractViolation("tree needs at least one vertex");
    SpanningTree t;
    t.n = n;
    if (n == 1) return t;
    Rng rng(seed);
    std::vector<std::uint32_t> seq(n - 2);
    for (auto& s : seq) s = static_cast<std::uint32_t>(rng.below(n));
    std::vector<std::size_t> degree(n, 1);
    for (auto s : seq) ++degree[s];
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> leaves;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (degree[v] == 1) leaves.push(v);
    }
    for (auto s : seq) {
        const auto leaf = leaves.top();
        leaves.pop();
        t.edges.emplace_back(leaf, s);
        if (--degree[s] == 1) leaves.push(s);
    }
    const auto u = leaves.top();
    leaves.pop();
    t.edges.emplace_back(u, leaves.top());
    return t;
}

EvalReport evaluate_visiting(const CountingIndex& idx, const QuerySample& holdout, const WeightedPointSet& pts,
                             const EpsParams& params) {
    if (holdout.size() == 0) throw ContractViolation("holdout sample is empty");
    EvalReport rep;
    const auto& train = idx.training_hashes();
    const EpsParams wparams = idx.working_params();
    std::size_t passes = 0;
    double sum_visit = 0.0;
    double sum_tq = 0.0;
    for (const auto& q : holdout.queries) {
        if (std::binary_search(train.begin(), train.end(), point_hash(q))) rep.holdout_overlaps_training = true;
        const Point wq = idx.transform_query(q);
        QueryEval e;
        e.visiting = visiting_number(idx.tree(), wq, idx.working_points(), wparams);
        e.t_q = oracle::exact_tq(idx.working_points(), wq, wparams);
        const CountAnswer ans = idx.count(q, true);
        e.visited_nodes = ans.visited_nodes;
        e.weight = ans.weight;
        e.correct = oracle::check_sandwich(pts, q, params, idx.members(ans));
        passes += e.correct ? 1 : 0;
        sum_visit += static_cast<double>(e.visiting);
        sum_tq += static_cast<double>(e.t_q);
        rep.per_query.push_back(e);
    }
    const auto m = static_cast<double>(holdout.size());
    rep.mean_visiting = sum_visit / m;
    rep.mean_t_q = sum_tq / m;
    rep.sandwich_pass_rate = static_cast<double>(passes) / m;
    return rep;
}

}  // namespace arc
