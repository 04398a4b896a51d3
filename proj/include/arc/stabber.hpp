#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "arc/core.hpp"
#include "arc/hamming.hpp"

namespace arc {

/// Knobs of the bucket scan.
///
/// The irrelevant-point cap is min(n, ceil(cap_factor * n^(1 - beta))) with
/// beta = beta_scale * eps^2 / (19200 (1 + eps^2)). At practical n the cap
/// equals n; raise beta_scale (or lower cap_factor) to make it bind.
///
/// By default the near phase visits every nonempty bucket in nondecreasing
/// code distance from f(q) and the far phase in nonincreasing distance, so the
/// near band (distance <= theta) and the far band (distance >= theta + eps d')
/// are visited first and the cap alone ends the scan. With strict_bands the
/// phases never leave their bands.
struct ScanOptions {
    double beta_scale = 1.0;
    double cap_factor = 100.0;
    bool strict_bands = false;
};

/// Result of one witness query. Indices refer to the indexed point set.
struct WitnessSet {
    std::optional<std::uint32_t> near;  // distance <= (1 + eps) r, exact
    std::optional<std::uint32_t> far;   // distance >= r, exact
    std::size_t inspected_near = 0;
    std::size_t inspected_far = 0;
};

/// One dictionary from Hamming codes to the members falling in that bucket.
class StabIndex {
public:
    StabIndex(std::shared_ptr<const WeightedPointSet> points, std::vector<std::uint32_t> members,
              const EpsParams& params, Seed seed, const ScanOptions& options = {});

    WitnessSet witnesses(PointView q) const;

    const HammingEmbedding& embedding() const { return embedding_; }
    const EpsParams& params() const { return params_; }
    const WeightedPointSet& points() const { return *points_; }
    std::size_t scan_cap() const { return scan_cap_; }
    std::size_t member_count() const { return member_count_; }
    std::size_t bucket_count() const { return buckets_.size(); }
    /// Buckets in ascending lexicographic code order.
    const std::vector<std::pair<BitCode, std::vector<std::uint32_t>>>& buckets() const { return buckets_; }

private:
    std::shared_ptr<const WeightedPointSet> points_;
    EpsParams params_;
    ScanOptions options_;
    HammingEmbedding embedding_;
    std::vector<std::pair<BitCode, std::vector<std::uint32_t>>> buckets_;
    std::size_t member_count_ = 0;
    std::size_t scan_cap_ = 0;
};

std::size_t scan_cap_for(std::size_t n_subset, double eps, const ScanOptions& options);

/// Index over the whole of `subset`; witness indices are positions in it.
StabIndex build_stab_index(const WeightedPointSet& subset, const EpsParams& params, Seed seed,
                           const ScanOptions& options = {});

inline WitnessSet stab_witnesses(const StabIndex& idx, PointView q) { return idx.witnesses(q); }

enum class Verdict : std::uint8_t { Stabbed = 0, Covered = 1, Disjoint = 2 };

std::string_view to_string(Verdict v);

/// L independent witness indexes over the same subset.
///
/// Verdict rule over the witnesses of all copies: some witness within
/// (1+eps) r and some witness at distance >= r (possibly the same point) give
/// Stabbed; only the first kind gives Covered; anything else, including no
/// witness at all, gives Disjoint.
class StabClassifier {
public:
    StabClassifier(std::shared_ptr<const WeightedPointSet> points, std::vector<std::uint32_t> members,
                   const EpsParams& params, std::size_t repetitions, Seed seed, const ScanOptions& options = {});

    Verdict classify(PointView q) const;

    std::size_t repetitions() const { return copies_.size(); }
    const std::vector<StabIndex>& copies() const { return copies_; }
    const EpsParams& params() const { return params_; }
    /// Total bucket entries over all copies.
    std::size_t entry_count() const;

private:
    std::vector<StabIndex> copies_;
    EpsParams params_;
};

/// ceil(3 log2 n) for n >= 2, and 1 for a singleton.
std::size_t default_repetitions(std::size_t n_subset);

StabClassifier build_classifier(const WeightedPointSet& subset, const EpsParams& params, std::size_t repetitions,
                                Seed seed, const ScanOptions& options = {});

inline Verdict classify(const StabClassifier& c, PointView q) { return c.classify(q); }

}  // namespace arc
