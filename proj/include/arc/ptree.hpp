#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "arc/core.hpp"
#include "arc/spantree.hpp"
#include "arc/stabber.hpp"

namespace arc {

/// A permutation of the point indices.
struct SpanningPath {
    std::vector<std::uint32_t> order;

    bool operator==(const SpanningPath&) const = default;
    bool is_permutation() const;
    /// Consecutive pairs of the order.
    std::vector<Edge> edges() const;
};

/// Node of a partition tree. Members are path.order[begin, end).
struct PNode {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    double cum_weight = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::shared_ptr<const StabClassifier> classifier;

    bool is_leaf() const { return left < 0; }
    std::size_t size() const { return end - begin; }
};

/// Binary partition tree over a spanning path. Nodes are stored in preorder
/// with explicit child indices; node 0 is the root.
struct PartitionTree {
    std::vector<PNode> nodes;
    SpanningPath path;

    std::size_t n_points() const { return path.order.size(); }
    /// Number of edges on the longest root-to-leaf path.
    std::size_t depth() const;
    std::size_t internal_count() const;
    std::vector<std::uint32_t> members(std::size_t node) const;
};

/// Preorder of a DFS from vertex 0, neighbours taken in ascending order.
SpanningPath tree_to_path(const SpanningTree& t, const WeightedPointSet& pts);

/// Leaves take the path positions left to right; a range of size m gives its
/// left child ceil(m/2) points.
PartitionTree path_to_partition_tree(const SpanningPath& p, const WeightedPointSet& pts);

/// Counts the root plus both children of every internal node u whose member
/// set is eps-stabbed by q, or meets the annulus r < |x - q| <= (1+eps) r and
/// either lies inside B(q, (1+eps) r) or misses B(q, r).
std::size_t visiting_number(const PartitionTree& t, PointView q, const WeightedPointSet& pts, const EpsParams& params);

SpanningPath canonical_path_of_tree(const PartitionTree& t);

}  // namespace arc
