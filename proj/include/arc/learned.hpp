#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "arc/core.hpp"
#include "arc/spantree.hpp"

namespace arc {

class CountingIndex;

/// A list of query points sharing one dimension, with a short provenance string.
struct QuerySample {
    std::vector<Point> queries;
    std::string source;

    QuerySample() = default;
    QuerySample(std::vector<Point> qs, std::string src);

    std::size_t size() const { return queries.size(); }
    std::size_t dim() const { return queries.empty() ? 0 : queries.front().size(); }
    /// Unit-weight point set holding the queries.
    WeightedPointSet as_points() const;
};

enum class QueryKind { Uniform, NearData, Mixture };

/// Uniform in the bounding box of `pts` widened by `margin` on every side.
QuerySample uniform_queries(const WeightedPointSet& pts, std::size_t m, double margin, Seed seed);
/// A uniformly chosen data point plus an isotropic Gaussian offset of expected
/// length about `spread`.
QuerySample near_data_queries(const WeightedPointSet& pts, std::size_t m, double spread, Seed seed);
/// Centers chosen uniformly, N(0, sigma^2) per coordinate.
QuerySample gaussian_mixture_queries(const std::vector<Point>& centers, std::size_t m, double sigma, Seed seed);

enum class DataKind { Uniform, Clusters, Grid };

struct Dataset {
    WeightedPointSet points;
    std::vector<Point> centers;  // filled for clustered data
};

/// Uniform: coordinates in [0, side), weights in [0, 1).
/// Clusters: `clusters` centers uniform in [0, side)^d, points N(0, spread^2)
/// per coordinate around a uniformly chosen center, weights in [0, 1).
/// Grid: the first n points of the integer lattice with spacing `side`, unit weights.
Dataset generate_dataset(DataKind kind, std::size_t n, std::size_t d, Seed seed, double side = 1.0,
                         std::size_t clusters = 8, double spread = 0.1);

/// ceil(multiplier * n * (d log2 n + log2(1/delta))).
std::size_t default_sample_size(std::size_t n, std::size_t d, double delta, double multiplier = 1.0);

/// Symmetric matrix of per-pair sampled stab counts.
struct StabCountMatrix {
    std::size_t n = 0;
    std::vector<std::uint64_t> counts;  // row-major n x n

    explicit StabCountMatrix(std::size_t size) : n(size), counts(size * size, 0) {}
    std::uint64_t at(std::size_t a, std::size_t b) const { return counts[a * n + b]; }
};

StabCountMatrix pair_stab_counts(const WeightedPointSet& pts, const QuerySample& sample, const EpsParams& params);

/// Kruskal over all pairs ordered by (count, a, b).
SpanningTree minimum_spanning_tree(const StabCountMatrix& counts);
SpanningTree learned_spanning_tree(const WeightedPointSet& pts, const QuerySample& sample, const EpsParams& params);

/// Sum of the matrix entries over the tree's edges.
std::uint64_t sampled_objective(const SpanningTree& t, const StabCountMatrix& counts);

/// Uniform labelled tree on n vertices from a random Pruefer sequence.
SpanningTree random_spanning_tree(std::size_t n, Seed seed);

struct QueryEval {
    std::size_t visiting = 0;
    std::size_t t_q = 0;
    bool correct = false;
    std::size_t visited_nodes = 0;
    double weight = 0.0;
};

struct EvalReport {
    double mean_visiting = 0.0;
    double mean_t_q = 0.0;
    double sandwich_pass_rate = 0.0;
    bool holdout_overlaps_training = false;
    std::vector<QueryEval> per_query;
};

/// Exact visiting number and t_q of each holdout query in the index's working
/// space and working error, plus the set-wise sandwich check of its answer in
/// the original space.
EvalReport evaluate_visiting(const CountingIndex& idx, const QuerySample& holdout, const WeightedPointSet& pts,
                             const EpsParams& params);

}  // namespace arc
