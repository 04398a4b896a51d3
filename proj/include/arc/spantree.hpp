#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "arc/core.hpp"
#include "arc/sampler.hpp"

namespace arc {

/// Raised when the grid of candidate queries would be too large to enumerate.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected edge, stored with a < b.
struct Edge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;

    Edge() = default;
    Edge(std::uint32_t x, std::uint32_t y);

    auto operator<=>(const Edge&) const = default;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    /// False when x and y were already connected.
    bool unite(std::size_t x, std::size_t y);
    std::size_t components() const { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
    std::size_t components_;
};

/// Multiset of query points: distinct support points, multiplicities held in
/// a WeightedSampler, and the number of doublings applied to each.
class QueryMultiset {
public:
    explicit QueryMultiset(WeightedPointSet support);

    const WeightedPointSet& support() const { return support_; }
    std::size_t size() const { return support_.size(); }
    const WeightedSampler& sampler() const { return sampler_; }
    const std::vector<std::uint32_t>& stab_exponents() const { return exponents_; }

    void double_multiplicity(std::size_t i);

private:
    WeightedPointSet support_;
    WeightedSampler sampler_;
    std::vector<std::uint32_t> exponents_;
};

/// Distinct points of the grid with the given side lying within (1+eps) r of
/// some input point, each with multiplicity 1. Support is sorted by grid key.
QueryMultiset generate_grid_queries(const WeightedPointSet& pts, const EpsParams& params, const GridSpec& grid,
                                    std::size_t dim_cap = 8);

struct LightEdgeParams {
    double rho = 0.0;
    double net_constant = 1.0;
    double embed_dim_constant = 1.0;
    double grid_divisor = 4.0;
    std::size_t fallback_pairs = 3;
    std::size_t max_candidates = 4096;

    /// rho = eps^2 / (4 ln(1/eps) + 8), other fields at their defaults.
    static LightEdgeParams defaults(double eps);
};

/// Per point, which support queries see it within r (near) and at distance
/// >= (1+eps) r (far), as bitsets over the support.
class StabTable {
public:
    StabTable(const WeightedPointSet& pts, const WeightedPointSet& queries, const EpsParams& params);

    /// Support indices that eps-stab the pair.
    std::vector<std::uint32_t> stabbing_queries(std::uint32_t a, std::uint32_t b) const;
    std::size_t stab_count(std::uint32_t a, std::uint32_t b) const;
    /// Stab count with multiplicity (in the sampler's current scale).
    double weighted_stab_count(std::uint32_t a, std::uint32_t b, const WeightedSampler& weights) const;

private:
    std::size_t words_ = 0;
    std::vector<std::uint64_t> near_;
    std::vector<std::uint64_t> far_;
};

/// Candidate pairs of the light-edge search over `active`, in evaluation order.
std::vector<Edge> light_edge_candidates(const WeightedPointSet& pts, std::span<const std::uint32_t> active,
                                        const QueryMultiset& queries, const EpsParams& params,
                                        const LightEdgeParams& lp, Seed seed);

Edge find_light_edge(const WeightedPointSet& pts, std::span<const std::uint32_t> active, const QueryMultiset& queries,
                     const StabTable& table, const EpsParams& params, const LightEdgeParams& lp, Seed seed);
Edge find_light_edge(const WeightedPointSet& pts, const QueryMultiset& queries, const EpsParams& params,
                     const LightEdgeParams& lp, Seed seed);

struct Forest {
    std::vector<Edge> edges;
    UnionFind components;

    explicit Forest(std::size_t n) : components(n) {}
    /// Throws if the edge closes a cycle.
    void add(const Edge& e);
};

/// MWU forest over `active` (all points when empty): ceil(|active|/2) light
/// edges; each edge doubles the multiplicity of every query stabbing it and
/// drops its smaller endpoint from the active set.
Forest build_low_stab_forest(const WeightedPointSet& pts, QueryMultiset& queries, const EpsParams& params,
                             const LightEdgeParams& lp, Seed seed, std::span<const std::uint32_t> active = {});

struct SpanningTree {
    std::size_t n = 0;
    std::vector<Edge> edges;
    std::size_t rounds = 0;

    /// n - 1 edges, connected, acyclic.
    bool is_valid() const;
};

/// Repeated MWU forests on component representatives (lowest index per
/// component) until one component remains. The multiset keeps its weights
/// across rounds.
SpanningTree build_low_stab_tree(const WeightedPointSet& pts, QueryMultiset& queries, const EpsParams& params,
                                 const LightEdgeParams& lp, Seed seed);

}  // namespace arc
