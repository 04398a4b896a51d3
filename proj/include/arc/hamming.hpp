#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "arc/core.hpp"

namespace arc {

/// Probability that two points at distance `dist` fall into the same bucket
/// of the shifted one-dimensional Gaussian-projection hash of width `width`:
///   integral_0^width 2/(sqrt(2 pi) dist) exp(-s^2 / (2 dist^2)) (1 - s/width) ds
/// evaluated by adaptive Simpson quadrature (absolute tolerance 1e-9).
double collision_prob(double dist, double width);

/// Packed bit string; bit i lives in word i / 64 at position i % 64.
class BitCode {
public:
    BitCode() = default;
    explicit BitCode(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

    std::size_t size() const { return length_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool bit);

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitCode&) const = default;
    /// Lexicographic in bit-index order: the first differing bit decides.
    std::strong_ordering operator<=>(const BitCode& other) const;

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BitCode& a, const BitCode& b);

/// Randomized map R^d -> {0,1}^d' built from d' shifted Gaussian-projection
/// buckets, each bucket id hashed to one salted bit. Also carries the
/// near threshold theta = mu1 (1 + eps/80) and the far threshold theta + eps d'.
class HammingEmbedding {
public:
    /// Bucket width is (1 + eps) * radius, so thresholds refer to distances
    /// radius and (1 + eps) * radius.
    HammingEmbedding(std::size_t ambient_dim, std::size_t dprime, double eps, Seed seed, double radius = 1.0);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dprime() const { return dprime_; }
    double eps() const { return eps_; }
    double width() const { return width_; }
    double radius() const { return radius_; }
    double theta() const { return theta_; }
    double far_threshold() const { return far_threshold_; }
    /// Collision probability at distance 1 (p1) and 1 + eps (p2).
    double p1() const { return p1_; }
    double p2() const { return p2_; }
    double mu1() const { return 0.5 * static_cast<double>(dprime_) * (1.0 - p1_); }
    double mu2() const { return 0.5 * static_cast<double>(dprime_) * (1.0 - p2_); }

    std::int64_t bucket(std::size_t coordinate, PointView p) const;
    BitCode embed(PointView p) const;

private:
    std::size_t ambient_dim_;
    std::size_t dprime_;
    double eps_;
    double radius_;
    double width_;
    std::vector<double> directions_;  // dprime x ambient, row-major
    std::vector<double> shifts_;
    std::vector<std::uint64_t> salts_;
    double p1_;
    double p2_;
    double theta_;
    double far_threshold_;
};

/// d' = max(8, round(log2(n_hint) / (1 + eps^2))).
std::size_t default_dprime(std::size_t n_hint, double eps);

HammingEmbedding make_embedding(std::size_t ambient_dim, std::size_t n_hint, double eps, Seed seed,
                                double radius = 1.0);

inline BitCode embed(const HammingEmbedding& e, PointView p) { return e.embed(p); }

}  // namespace arc
