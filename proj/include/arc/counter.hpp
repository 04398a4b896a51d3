#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "arc/core.hpp"
#include "arc/learned.hpp"
#include "arc/ptree.hpp"
#include "arc/spantree.hpp"
#include "arc/stabber.hpp"

namespace arc {

/// Spanning tree from grid queries and the MWU construction.
struct WorstCaseSource {
    /// Defaults from the working error when unset.
    std::optional<LightEdgeParams> light;
    /// Side of the query grid; the snap grid side when unset.
    std::optional<double> query_grid_side;
    std::size_t dim_cap = 8;
};

/// Spanning tree minimizing the sampled stab count of a query sample.
struct LearnedSource {
    QueryKind kind = QueryKind::NearData;
    std::size_t sample_size = 4096;
    /// Offset scale of near-data queries and margin of uniform ones, in units of r.
    double spread = 1.0;
    /// Used instead of generated queries when nonempty (original space).
    QuerySample queries;
};

using TreeSource = std::variant<WorstCaseSource, LearnedSource>;

struct BuildConfig {
    double eps = 0.5;
    double radius = 1.0;
    /// Unset: project only when the ambient dimension exceeds 64.
    std::optional<bool> jl_enabled;
    /// Unset: min(d, max(16, ceil(2 ln n / (eps/10)^2))).
    std::optional<std::size_t> jl_target_dim;
    bool snap_queries = false;
    /// Unset: eps r / (10 sqrt(d_work)).
    std::optional<double> grid_side;
    /// 0 selects ceil(3 log2 n).
    std::size_t classifier_repetitions = 0;
    ScanOptions scan;
    TreeSource tree_source = LearnedSource{};
    Seed seed{};

    void validate() const;
};

struct CountAnswer {
    double weight = 0.0;
    std::size_t visited_nodes = 0;
    /// Indexed by Verdict.
    std::array<std::size_t, 3> verdict_counts{};
    /// Half-open intervals of path positions whose union is S (verification mode).
    std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> member_ranges;

    bool operator==(const CountAnswer&) const = default;
};

/// Partition tree over the working point set (projected, then rescaled) with
/// one stab classifier at working error eps/2 on every internal node.
class CountingIndex {
public:
    const BuildConfig& config() const { return cfg_; }
    const PartitionTree& tree() const { return tree_; }
    const SpanningPath& path() const { return tree_.path; }
    const WeightedPointSet& working_points() const { return working_; }
    const std::optional<GaussianProjection>& projection() const { return projection_; }
    double rescale_factor() const { return rescale_; }
    double working_eps() const { return 0.5 * cfg_.eps; }
    EpsParams working_params() const { return {working_eps(), cfg_.radius}; }
    std::optional<GridSpec> snap_grid() const { return snap_; }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t repetitions() const { return repetitions_; }
    const std::string& data_digest() const { return data_digest_; }
    /// Hashes of the training queries (learned source), sorted.
    const std::vector<std::uint64_t>& training_hashes() const { return training_hashes_; }

    /// Projection, rescale and optional snap of an original-space query.
    Point transform_query(PointView q) const;

    CountAnswer count(PointView q, bool verify = false) const;

    /// Point indices of S from verification-mode ranges, ascending.
    std::vector<std::uint32_t> members(const CountAnswer& a) const;

    /// Bucket entries over every classifier.
    std::size_t entry_count() const;

    friend CountingIndex assemble_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg,
                                                 const SpanningPath& order);
    friend CountingIndex build_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg);

private:
    BuildConfig cfg_;
    std::size_t ambient_dim_ = 0;
    std::optional<GaussianProjection> projection_;
    double rescale_ = 1.0;
    std::optional<GridSpec> snap_;
    std::size_t repetitions_ = 1;
    WeightedPointSet working_;
    PartitionTree tree_;
    std::string data_digest_;
    std::vector<std::uint64_t> training_hashes_;
};

/// Working point set for `cfg`: the stored projection and rescale applied to `pts`.
WeightedPointSet working_points_for(const WeightedPointSet& pts, const BuildConfig& cfg,
                                    std::optional<GaussianProjection>* projection = nullptr);

/// Spanning path in the working space per the configured tree source.
SpanningPath build_spanning_path(const WeightedPointSet& pts, const BuildConfig& cfg,
                                 std::vector<std::uint64_t>* training_hashes = nullptr);

/// Index over a given path order; classifiers are rebuilt from cfg.seed, so
/// equal inputs give identical indexes.
CountingIndex assemble_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg, const SpanningPath& order);

CountingIndex build_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg);

inline CountAnswer count(const CountingIndex& idx, PointView q, bool verify = false) { return idx.count(q, verify); }

}  // namespace arc
