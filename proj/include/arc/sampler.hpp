#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "arc/core.hpp"

namespace arc {

class EmptyDistribution : public std::domain_error {
public:
    EmptyDistribution() : std::domain_error("empty distribution") {}
};

/// Proportional sampling over a fixed number of nonnegative weights.
///
/// Weights live at the leaves of a balanced binary tree stored flat in heap
/// order (root at 1, leaves at [capacity, 2*capacity)); every internal slot
/// holds the sum of its two children. Sampling descends from the root and
/// updates rewrite the leaf-to-root path, both in O(log n).
///
/// Repeated doubling would overflow a double, so once the total exceeds
/// 2^500 every weight is divided by 2^400 (an exact power-of-two rescale that
/// leaves all sampling ratios untouched) and the shift is recorded in
/// scale_exponent().
class WeightedSampler {
public:
    explicit WeightedSampler(std::span<const double> weights);

    std::size_t size() const { return n_; }
    double total() const { return sums_[1]; }

    /// Stored (possibly rescaled) weight of leaf i.
    double weight(std::size_t i) const;
    /// Actual weight is weight(i) * 2^scale_exponent().
    int scale_exponent() const { return scale_exponent_; }

    /// Index i with probability weight(i) / total().
    std::size_t sample(Rng& rng) const;

    void update_weight(std::size_t i, double new_weight);

    /// Largest relative gap between a stored internal sum and the sum of its children.
    double max_sum_discrepancy() const;

    /// Internal slot values; exposed for bit-level invariance checks.
    const std::vector<double>& raw_sums() const { return sums_; }

    static constexpr int kRescaleTrigger = 500;
    static constexpr int kRescaleShift = 400;

private:
    void rescale();

    std::size_t n_ = 0;
    std::size_t capacity_ = 1;
    std::vector<double> sums_;
    int scale_exponent_ = 0;
};

inline WeightedSampler build_sampler(std::span<const double> weights) { return WeightedSampler(weights); }

}  // namespace arc
