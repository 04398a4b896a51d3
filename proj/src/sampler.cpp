#include "arc/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace arc {

WeightedSampler::WeightedSampler(std::span<const double> weights) : n_(weights.size()) {
    if (weights.empty()) throw ContractViolation("sampler needs at least one weight");
    while (capacity_ < n_) capacity_ <<= 1;
    sums_.assign(2 * capacity_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
            throw ContractViolation("sampler weights must be finite and nonnegative");
        }
        sums_[capacity_ + i] = weights[i];
    }
    for (std::size_t v = capacity_ - 1; v >= 1; --v) sums_[v] = sums_[2 * v] + sums_[2 * v + 1];
    if (total() > std::ldexp(1.0, kRescaleTrigger)) rescale();
}

double WeightedSampler::weight(std::size_t i) const {
    if (i >= n_) throw ContractViolation("sampler index out of range");
    return sums_[capacity_ + i];
}

std::size_t WeightedSampler::sample(Rng& rng) const {
    if (!(total() > 0.0)) throw EmptyDistribution();
    double u = rng.uniform() * total();
    std::size_t v = 1;
    while (v < capacity_) {
        const double left = sums_[2 * v];
        const double right = sums_[2 * v + 1];
        if (u < left || right <= 0.0) {
            v = 2 * v;
        } else {
            u -= left;
            v = 2 * v + 1;
        }
    }
    return std::min(v - capacity_, n_ - 1);
}

void WeightedSampler::update_weight(std::size_t i, double new_weight) {
    if (i >= n_) throw ContractViolation("sampler index out of range");
    if (!(new_weight >= 0.0) || !std::isfinite(new_weight)) {
        throw ContractViolation("sampler weights must be finite and nonnegative");
    }
    std::size_t v = capacity_ + i;
    sums_[v] = new_weight;
    for (v >>= 1; v >= 1; v >>= 1) sums_[v] = sums_[2 * v] + sums_[2 * v + 1];
    if (total() > std::ldexp(1.0, kRescaleTrigger)) rescale();
}

void WeightedSampler::rescale() {
    for (std::size_t i = 0; i < n_; ++i) {
        double& leaf = sums_[capacity_ + i];
        leaf = std::ldexp(leaf, -kRescaleShift);
    }
    for (std::size_t v = capacity_ - 1; v >= 1; --v) sums_[v] = sums_[2 * v] + sums_[2 * v + 1];
    scale_exponent_ += kRescaleShift;
}

double WeightedSampler::max_sum_discrepancy() const {
    double worst = 0.0;
    for (std::size_t v = 1; v < capacity_; ++v) {
        const double expect = sums_[2 * v] + sums_[2 * v + 1];
        const double scale = std::max(std::abs(expect), std::abs(sums_[v]));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(expect - sums_[v]) / scale);
    }
    return worst;
}

}  // namespace arc
