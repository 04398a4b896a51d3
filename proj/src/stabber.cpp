#include "arc/stabber.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace arc {

std::size_t scan_cap_for(std::size_t n_subset, double eps, const ScanOptions& options) {
    const double e2 = eps * eps;
    const double beta = options.beta_scale * e2 / (19200.0 * (1.0 + e2));
    const double formula = std::ceil(options.cap_factor * std::pow(static_cast<double>(n_subset), 1.0 - beta));
    if (!(formula < static_cast<double>(n_subset))) return n_subset;
    return std::max<std::size_t>(1, static_cast<std::size_t>(formula));
}

StabIndex::StabIndex(std::shared_ptr<const WeightedPointSet> points, std::vector<std::uint32_t> members,
                     const EpsParams& params, Seed seed, const ScanOptions& options)
    : points_(std::move(points)),
      params_(params),
      options_(options),
      embedding_(points_->dim(), default_dprime(std::max<std::size_t>(2, members.size()), params.eps), params.eps,
                 seed, params.radius),
      member_count_(members.size()),
      scan_cap_(scan_cap_for(members.size(), params.eps, options)) {
    if (members.empty()) throw ContractViolation("stab index needs a nonempty subset");
    std::map<BitCode, std::vector<std::uint32_t>> dict;
    for (auto i : members) {
        if (i >= points_->size()) throw ContractViolation("member index out of range");
        dict[embedding_.embed(points_->point(i))].push_back(i);
    }
    buckets_.assign(std::make_move_iterator(dict.begin()), std::make_move_iterator(dict.end()));
}

WitnessSet StabIndex::witnesses(PointView q) const {
    if (q.size() != points_->dim()) throw ContractViolation("query has wrong dimension");
    const BitCode fq = embedding_.embed(q);
    const std::size_t dp = embedding_.dprime();

    // Stable counting sort by code distance keeps lexicographic order inside ties.
    std::vector<std::size_t> dist(buckets_.size());
    std::vector<std::size_t> start(dp + 2, 0);
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
        dist[b] = hamming_distance(fq, buckets_[b].first);
        ++start[dist[b] + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::size_t> by_distance(buckets_.size());
    {
        auto next = start;
        for (std::size_t b = 0; b < buckets_.size(); ++b) by_distance[next[dist[b]]++] = b;
    }

    WitnessSet out;
    const double outer = params_.outer_radius();
    const double theta = embedding_.theta();
    const double far_band = embedding_.far_threshold();

    // Near phase: nondecreasing code distance.
    std::size_t irrelevant = 0;
    for (std::size_t pos = 0; pos < by_distance.size() && !out.near && irrelevant < scan_cap_; ++pos) {
        const std::size_t b = by_distance[pos];
        if (options_.strict_bands && static_cast<double>(dist[b]) > theta) break;
        for (auto i : buckets_[b].second) {
            ++out.inspected_near;
            if (within(q, points_->point(i), outer)) {
                out.near = i;
                break;
            }
            if (++irrelevant >= scan_cap_) break;
        }
    }

    // Far phase: nonincreasing code distance, lexicographic inside ties.
    irrelevant = 0;
    for (std::size_t d = dp + 1; d-- > 0 && !out.far && irrelevant < scan_cap_;) {
        if (options_.strict_bands && static_cast<double>(d) < far_band) break;
        for (std::size_t pos = start[d]; pos < start[d + 1] && !out.far && irrelevant < scan_cap_; ++pos) {
            for (auto i : buckets_[by_distance[pos]].second) {
                ++out.inspected_far;
                if (beyond(q, points_->point(i), params_.radius)) {
                    out.far = i;
                    break;
                }
                if (++irrelevant >= scan_cap_) break;
            }
        }
    }
    return out;
}

StabIndex build_stab_index(const WeightedPointSet& subset, const EpsParams& params, Seed seed,
                           const ScanOptions& options) {
    std::vector<std::uint32_t> members(subset.size());
    std::iota(members.begin(), members.end(), 0U);
    return StabIndex(std::make_shared<const WeightedPointSet>(subset), std::move(members), params, seed, options);
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Stabbed:
            return "stabbed";
        case Verdict::Covered:
            return "covered";
        case Verdict::Disjoint:
            return "disjoint";
    }
    return "unknown";
}

StabClassifier::StabClassifier(std::shared_ptr<const WeightedPointSet> points, std::vector<std::uint32_t> members,
                               const EpsParams& params, std::size_t repetitions, Seed seed,
                               const ScanOptions& options)
    : params_(params) {
    if (repetitions == 0) throw ContractViolation("classifier needs at least one repetition");
    copies_.reserve(repetitions);
    for (std::size_t c = 0; c < repetitions; ++c) {
        copies_.emplace_back(points, members, params, derive(seed, c), options);
    }
}

Verdict StabClassifier::classify(PointView q) const {
    bool near = false;
    bool far = false;
    const double outer = params_.outer_radius();
    for (const auto& copy : copies_) {
        const auto w = copy.witnesses(q);
        // A witness of either kind may satisfy both distance conditions.
        for (const auto& i : {w.near, w.far}) {
            if (!i) continue;
            const PointView p = copy.points().point(*i);
            near = near || within(q, p, outer);
            far = far || beyond(q, p, params_.radius);
        }
        // Once both kinds are seen the verdict cannot change.
        if (near && far) return Verdict::Stabbed;
    }
    return near ? Verdict::Covered : Verdict::Disjoint;
}

std::size_t StabClassifier::entry_count() const {
    std::size_t total = 0;
    for (const auto& c : copies_) total += c.member_count();
    return total;
}

std::size_t default_repetitions(std::size_t n_subset) {
    if (n_subset < 2) return 1;
    return static_cast<std::size_t>(std::ceil(3.0 * std::log2(static_cast<double>(n_subset))));
}

StabClassifier build_classifier(const WeightedPointSet& subset, const EpsParams& params, std::size_t repetitions,
                                Seed seed, const ScanOptions& options) {
    std::vector<std::uint32_t> members(subset.size());
    std::iota(members.begin(), members.end(), 0U);
    return StabClassifier(std::make_shared<const WeightedPointSet>(subset), std::move(members), params, repetitions,
                          seed, options);
}

}  // namespace arc
