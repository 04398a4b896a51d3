#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace arc {

/// Raised when a caller breaks an operation's preconditions.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// n points in R^d stored row-major, with one real weight per point.
class WeightedPointSet {
public:
    WeightedPointSet() = default;
    WeightedPointSet(std::size_t dim, std::vector<double> coords, std::vector<double> weights);

    static WeightedPointSet from_points(const std::vector<Point>& points, std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return weights_.empty(); }

    PointView point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double weight(std::size_t i) const { return weights_[i]; }

    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& weights() const { return weights_; }
    double total_weight() const;

    /// Subset in the given index order.
    WeightedPointSet select(std::span<const std::uint32_t> indices) const;

    bool operator==(const WeightedPointSet&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

struct EpsParams {
    double eps = 0.5;
    double radius = 1.0;

    EpsParams() = default;
    EpsParams(double eps_, double radius_ = 1.0);

    double outer_radius() const { return (1.0 + eps) * radius; }
};

struct GridSpec {
    double side = 1.0;

    GridSpec() = default;
    explicit GridSpec(double side_);
};

struct Seed {
    std::uint64_t value = 0;

    bool operator==(const Seed&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent child stream of `parent` labelled by `tag`.
Seed derive(Seed parent, std::uint64_t tag);
Seed derive(Seed parent, std::uint64_t tag_a, std::uint64_t tag_b);

/// mt19937_64 with portable uniform/normal conversions, so every stream is
/// bit-reproducible across standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed) : engine_(splitmix64(seed.value)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

double squared_distance(PointView a, PointView b);
double distance(PointView a, PointView b);

/// ||x - q|| <= radius, evaluated on squared distances.
bool within(PointView q, PointView x, double radius);
/// ||x - q|| >= radius, evaluated on squared distances.
bool beyond(PointView q, PointView x, double radius);

/// True iff one of x, y lies in the closed ball B(q, r) and the other at
/// distance >= (1+eps) r from q.
bool eps_stabs(PointView q, PointView x, PointView y, const EpsParams& params);

/// Dense k x d Gaussian map with N(0, 1/k) entries.
class GaussianProjection {
public:
    GaussianProjection() = default;
    GaussianProjection(std::size_t source_dim, std::size_t target_dim, Seed seed);
    /// Explicit row-major matrix (target_dim x source_dim).
    GaussianProjection(std::size_t source_dim, std::size_t target_dim, std::vector<double> matrix);

    static GaussianProjection identity(std::size_t dim);

    std::size_t source_dim() const { return source_dim_; }
    std::size_t target_dim() const { return target_dim_; }
    const std::vector<double>& matrix() const { return matrix_; }

    Point apply(PointView p) const;
    WeightedPointSet apply(const WeightedPointSet& pts) const;

private:
    std::size_t source_dim_ = 0;
    std::size_t target_dim_ = 0;
    std::vector<double> matrix_;
};

WeightedPointSet gaussian_project(const WeightedPointSet& pts, std::size_t target_dim, Seed seed);

/// Round-half-up snap of every coordinate to the grid of the given side.
Point snap_to_grid(PointView p, const GridSpec& grid);

WeightedPointSet scale_coordinates(const WeightedPointSet& pts, double factor);

/// 64-bit FNV-1a digest of dimension, coordinates and weights, as 16 hex digits.
std::string digest(const WeightedPointSet& pts);

/// 64-bit FNV-1a over the coordinate bytes of one point.
std::uint64_t point_hash(PointView p);

}  // namespace arc
