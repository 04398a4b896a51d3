#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "arc/core.hpp"
#include "arc/ptree.hpp"
#include "arc/spantree.hpp"

namespace arc::oracle {

struct OracleReport {
    std::string quantity;
    std::variant<double, std::uint64_t> value;
    std::string instance_digest;
};

/// Sum of weights with |p - q| <= radius.
double exact_range_weight(const WeightedPointSet& pts, PointView q, double radius);

/// Indices with |p - q| <= radius, ascending.
std::vector<std::uint32_t> exact_ball(const WeightedPointSet& pts, PointView q, double radius);

/// B(q, r) ∩ P ⊆ S ⊆ B(q, (1+eps) r) ∩ P for the index set S.
bool check_sandwich(const WeightedPointSet& pts, PointView q, const EpsParams& params,
                    const std::vector<std::uint32_t>& members);

/// Number of edges eps-stabbed by q.
std::size_t exact_sigma(PointView q, const std::vector<Edge>& edges, const WeightedPointSet& pts,
                        const EpsParams& params);

/// Points with r < |p - q| <= (1+eps) r.
std::size_t exact_tq(const WeightedPointSet& pts, PointView q, const EpsParams& params);

/// All n^(n-2) labelled trees on n vertices, in Pruefer-sequence order.
std::vector<SpanningTree> enumerate_spanning_trees(std::size_t n);

/// Visiting number by direct recursion over the tree, rescanning each node's members.
std::size_t exact_visiting_oracle(const PartitionTree& t, PointView q, const WeightedPointSet& pts,
                                  const EpsParams& params);

OracleReport report(std::string quantity, double value, const WeightedPointSet& pts);
OracleReport report(std::string quantity, std::uint64_t value, const WeightedPointSet& pts);

}  // namespace arc::oracle
