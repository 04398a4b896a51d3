#include "arc/spantree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace arc {

Edge::Edge(std::uint32_t x, std::uint32_t y) : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y) throw ContractViolation("edge endpoints must differ");
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
    --components_;
    return true;
}

QueryMultiset::QueryMultiset(WeightedPointSet support)
    : support_(std::move(support)),
      sampler_(std::vector<double>(support_.size(), 1.0)),
      exponents_(support_.size(), 0) {}

void QueryMultiset::double_multiplicity(std::size_t i) {
    sampler_.update_weight(i, 2.0 * sampler_.weight(i));
    ++exponents_[i];
}

QueryMultiset generate_grid_queries(const WeightedPointSet& pts, const EpsParams& params, const GridSpec& grid,
                                    std::size_t dim_cap) {
    const std::size_t d = pts.dim();
    if (d > dim_cap) throw InfeasibleError("grid enumeration infeasible; use sampled queries");
    const double reach = params.outer_radius();
    const double reach2 = reach * reach;
    constexpr std::size_t kMaxSupport = 20'000'000;

    std::set<std::vector<std::int64_t>> keys;
    std::vector<std::int64_t> lo(d), hi(d), key(d);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto p = pts.point(i);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = static_cast<std::int64_t>(std::ceil((p[j] - reach) / grid.side));
            hi[j] = static_cast<std::int64_t>(std::floor((p[j] + reach) / grid.side));
        }
        key = lo;
        while (true) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double t = grid.side * static_cast<double>(key[j]) - p[j];
                s += t * t;
            }
            if (s <= reach2) {
                keys.insert(key);
                if (keys.size() > kMaxSupport) throw InfeasibleError("grid enumeration infeasible; use sampled queries");
            }
            std::size_t j = 0;
            while (j < d && key[j] == hi[j]) {
                key[j] = lo[j];
                ++j;
            }
            if (j == d) break;
            ++key[j];
        }
    }

    std::vector<double> coords;
    coords.reserve(keys.size() * d);
    for (const auto& k : keys) {
        for (auto c : k) coords.push_back(grid.side * static_cast<double>(c));
    }
    return QueryMultiset(WeightedPointSet(d, std::move(coords), std::vector<double>(keys.size(), 1.0)));
}

LightEdgeParams LightEdgeParams::defaults(double eps) {
    LightEdgeParams lp;
    lp.rho = eps * eps / (4.0 * std::log(1.0 / eps) + 8.0);
    return lp;
}

StabTable::StabTable(const WeightedPointSet& pts, const WeightedPointSet& queries, const EpsParams& params)
    : words_((queries.size() + 63) / 64),
      near_(pts.size() * words_, 0),
      far_(pts.size() * words_, 0) {
    if (pts.dim() != queries.dim()) throw ContractViolation("queries and points differ in dimension");
    const double outer = params.outer_radius();
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t q = 0; q < queries.size(); ++q) {
            const std::uint64_t bit = std::uint64_t{1} << (q & 63);
            if (within(queries.point(q), pts.point(p), params.radius)) near_[p * words_ + (q >> 6)] |= bit;
            if (beyond(queries.point(q), pts.point(p), outer)) far_[p * words_ + (q >> 6)] |= bit;
        }
    }
}

std::vector<std::uint32_t> StabTable::stabbing_queries(std::uint32_t a, std::uint32_t b) const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = (near_[a * words_ + w] & far_[b * words_ + w]) |
                             (near_[b * words_ + w] & far_[a * words_ + w]);
        while (bits) {
            out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::size_t StabTable::stab_count(std::uint32_t a, std::uint32_t b) const {
    std::size_t total = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        total += std::popcount((near_[a * words_ + w] & far_[b * words_ + w]) |
                               (near_[b * words_ + w] & far_[a * words_ + w]));
    }
    return total;
}

double StabTable::weighted_stab_count(std::uint32_t a, std::uint32_t b, const WeightedSampler& weights) const {
    double total = 0.0;
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = (near_[a * words_ + w] & far_[b * words_ + w]) |
                             (near_[b * words_ + w] & far_[a * words_ + w]);
        while (bits) {
            total += weights.weight(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return total;
}

namespace {

using CellKey = std::vector<std::int64_t>;

CellKey cell_of(PointView p, double side) {
    CellKey key(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) key[j] = static_cast<std::int64_t>(std::floor(p[j] / side));
    return key;
}

// Squared distance from a center to the closest point of a grid cell.
double cell_gap2(const CellKey& key, double side, PointView center) {
    double s = 0.0;
    for (std::size_t j = 0; j < key.size(); ++j) {
        const double lo = side * static_cast<double>(key[j]);
        const double hi = lo + side;
        double t = 0.0;
        if (center[j] < lo) {
            t = lo - center[j];
        } else if (center[j] > hi) {
            t = center[j] - hi;
        }
        s += t * t;
    }
    return s;
}

}  // namespace

std::vector<Edge> light_edge_candidates(const WeightedPointSet& pts, std::span<const std::uint32_t> active,
                                        const QueryMultiset& queries, const EpsParams& params,
                                        const LightEdgeParams& lp, Seed seed) {
    const std::size_t n = active.size();
    if (n < 2) throw ContractViolation("light edge needs at least two points");
    const auto d = static_cast<double>(pts.dim());

    // Net sample drawn through the multiset sampler.
    const double delta = std::min(0.99, d / std::pow(static_cast<double>(n), lp.rho));
    const double net_raw =
        std::ceil(lp.net_constant * (d / delta) * (std::log(1.0 / delta) + std::log(static_cast<double>(n))));
    const std::size_t net_draws =
        std::min(queries.size(), std::max<std::size_t>(1, static_cast<std::size_t>(net_raw)));
    Rng rng(derive(seed, 1));
    std::set<std::size_t> net_ids;
    for (std::size_t s = 0; s < net_draws; ++s) net_ids.insert(queries.sampler().sample(rng));

    // Shared projection of the active points and the net; skipped when it would not reduce dimension.
    const double k_raw = std::ceil(lp.embed_dim_constant / (params.eps * params.eps) *
                                   std::log(static_cast<double>(std::max<std::size_t>(2, net_ids.size()))));
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(k_raw));
    const GaussianProjection proj =
        k < pts.dim() ? GaussianProjection(pts.dim(), k, derive(seed, 2)) : GaussianProjection::identity(pts.dim());
    std::vector<Point> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = proj.apply(pts.point(active[i]));
    std::vector<Point> centers;
    for (auto id : net_ids) centers.push_back(proj.apply(queries.support().point(id)));

    const double side = params.eps * params.radius / (lp.grid_divisor * std::sqrt(static_cast<double>(proj.target_dim())));
    const double reach2 = params.outer_radius() * params.outer_radius();

    std::map<CellKey, std::vector<std::uint32_t>> cells;
    std::vector<std::uint32_t> outside;
    for (std::size_t i = 0; i < n; ++i) {
        CellKey key = cell_of(img[i], side);
        const bool covered = std::any_of(centers.begin(), centers.end(),
                                         [&](const Point& c) { return cell_gap2(key, side, c) <= reach2; });
        if (!covered) outside.push_back(static_cast<std::uint32_t>(i));
        cells[std::move(key)].push_back(static_cast<std::uint32_t>(i));
    }

    std::vector<Edge> out;
    std::set<Edge> seen;
    auto push = [&](std::uint32_t i, std::uint32_t j) {
        if (out.size() >= lp.max_candidates) return;
        Edge e(active[i], active[j]);
        if (seen.insert(e).second) out.push_back(e);
    };

    for (const auto& [key, members] : cells) {
        for (std::size_t x = 0; x < members.size(); ++x) {
            for (std::size_t y = x + 1; y < members.size(); ++y) push(members[x], members[y]);
        }
    }

    // Closest projected pairs, also used to order the outside pairs.
    struct Pair {
        double d2;
        std::uint32_t i, j;
    };
    std::vector<Pair> closest;
    closest.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) closest.push_back({squared_distance(img[i], img[j]), i, j});
    }
    const std::size_t keep = std::min(lp.fallback_pairs, closest.size());
    auto by_gap = [](const Pair& x, const Pair& y) {
        return std::tie(x.d2, x.i, x.j) < std::tie(y.d2, y.i, y.j);
    };
    std::partial_sort(closest.begin(), closest.begin() + static_cast<std::ptrdiff_t>(keep), closest.end(), by_gap);
    for (std::size_t t = 0; t < keep; ++t) push(closest[t].i, closest[t].j);

    std::vector<Pair> far_pairs;
    for (std::size_t x = 0; x < outside.size(); ++x) {
        for (std::size_t y = x + 1; y < outside.size(); ++y) {
            far_pairs.push_back({squared_distance(img[outside[x]], img[outside[y]]), outside[x], outside[y]});
        }
    }
    std::sort(far_pairs.begin(), far_pairs.end(), by_gap);
    for (const auto& p : far_pairs) push(p.i, p.j);
    return out;
}

Edge find_light_edge(const WeightedPointSet& pts, std::span<const std::uint32_t> active, const QueryMultiset& queries,
                     const StabTable& table, const EpsParams& params, const LightEdgeParams& lp, Seed seed) {
    const auto candidates = light_edge_candidates(pts, active, queries, params, lp, seed);
    Edge best = candidates.front();
    double best_count = table.weighted_stab_count(best.a, best.b, queries.sampler());
    for (const auto& e : candidates) {
        const double c = table.weighted_stab_count(e.a, e.b, queries.sampler());
        if (c < best_count || (c == best_count && e < best)) {
            best = e;
            best_count = c;
        }
    }
    return best;
}

Edge find_light_edge(const WeightedPointSet& pts, const QueryMultiset& queries, const EpsParams& params,
                     const LightEdgeParams& lp, Seed seed) {
    if (pts.size() < 2) throw ContractViolation("light edge needs at least two points");
    std::vector<std::uint32_t> all(pts.size());
    std::iota(all.begin(), all.end(), 0U);
    const StabTable table(pts, queries.support(), params);
    return find_light_edge(pts, all, queries, table, params, lp, seed);
}

void Forest::add(const Edge& e) {
    if (!components.unite(e.a, e.b)) throw ContractViolation("forest edge closes a cycle");
    edges.push_back(e);
}

namespace {

void grow_forest(Forest& forest, const WeightedPointSet& pts, QueryMultiset& queries, const StabTable& table,
                 const EpsParams& params, const LightEdgeParams& lp, Seed seed, std::vector<std::uint32_t> active) {
    const std::size_t iterations = (active.size() + 1) / 2;
    for (std::size_t it = 0; it < iterations && active.size() >= 2; ++it) {
        const Edge e = find_light_edge(pts, active, queries, table, params, lp, derive(seed, it));
        forest.add(e);
        for (auto q : table.stabbing_queries(e.a, e.b)) queries.double_multiplicity(q);
        active.erase(std::find(active.begin(), active.end(), e.a));
    }
}

}  // namespace

Forest build_low_stab_forest(const WeightedPointSet& pts, QueryMultiset& queries, const EpsParams& params,
                             const LightEdgeParams& lp, Seed seed, std::span<const std::uint32_t> active) {
    if (pts.size() < 2) throw ContractViolation("forest needs at least two points");
    std::vector<std::uint32_t> act(active.begin(), active.end());
    if (act.empty()) {
        act.resize(pts.size());
        std::iota(act.begin(), act.end(), 0U);
    }
    std::sort(act.begin(), act.end());
    Forest forest(pts.size());
    const StabTable table(pts, queries.support(), params);
    grow_forest(forest, pts, queries, table, params, lp, seed, std::move(act));
    return forest;
}

bool SpanningTree::is_valid() const {
    if (n == 0 || edges.size() + 1 != n) return false;
    UnionFind uf(n);
    for (const auto& e : edges) {
        if (e.a >= n || e.b >= n || !uf.unite(e.a, e.b)) return false;
    }
    return uf.components() == 1;
}

SpanningTree build_low_stab_tree(const WeightedPointSet& pts, QueryMultiset& queries, const EpsParams& params,
                                 const LightEdgeParams& lp, Seed seed) {
    const std::size_t n = pts.size();
    if (n < 2) throw ContractViolation("spanning tree needs at least two points");
    const StabTable table(pts, queries.support(), params);
    Forest all(n);
    SpanningTree tree;
    tree.n = n;
    while (all.components.components() > 1) {
        std::vector<std::uint32_t> reps;
        std::vector<bool> seen(n, false);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::size_t root = all.components.find(i);
            if (!seen[root]) {
                seen[root] = true;
                reps.push_back(i);
            }
        }
        grow_forest(all, pts, queries, table, params, lp, derive(seed, tree.rounds), std::move(reps));
        ++tree.rounds;
    }
    tree.edges = all.edges;
    return tree;
}

}  // namespace arc
