#include "arc/core.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

namespace arc {

WeightedPointSet::WeightedPointSet(std::size_t dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim_ == 0) {
        throw ContractViolation("point set dimension must be positive");
    }
    if (weights_.empty()) {
        throw ContractViolation("point set must be nonempty");
    }
    if (coords_.size() != weights_.size() * dim_) {
        throw ContractViolation("coordinate count does not match n * d");
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) throw ContractViolation("non-finite coordinate");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) throw ContractViolation("non-finite weight");
    }
}

WeightedPointSet WeightedPointSet::from_points(const std::vector<Point>& points, std::vector<double> weights) {
    if (points.empty()) throw ContractViolation("point set must be nonempty");
    if (points.size() != weights.size()) throw ContractViolation("|points| != |weights|");
    const std::size_t d = points.front().size();
    std::vector<double> coords;
    coords.reserve(points.size() * d);
    for (const auto& p : points) {
        if (p.size() != d) throw ContractViolation("points have mixed dimensions");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return WeightedPointSet(d, std::move(coords), std::move(weights));
}

double WeightedPointSet::total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

WeightedPointSet WeightedPointSet::select(std::span<const std::uint32_t> indices) const {
    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(indices.size() * dim_);
    weights.reserve(indices.size());
    for (auto i : indices) {
        if (i >= size()) throw ContractViolation("subset index out of range");
        auto p = point(i);
        coords.insert(coords.end(), p.begin(), p.end());
        weights.push_back(weights_[i]);
    }
    return WeightedPointSet(dim_, std::move(coords), std::move(weights));
}

EpsParams::EpsParams(double eps_, double radius_) : eps(eps_), radius(radius_) {
    if (!(eps > 0.0 && eps < 1.0)) throw ContractViolation("eps must lie in (0, 1)");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractViolation("radius must be positive");
}

GridSpec::GridSpec(double side_) : side(side_) {
    if (!(side > 0.0) || !std::isfinite(side)) throw ContractViolation("grid side must be positive");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Seed derive(Seed parent, std::uint64_t tag) {
    return Seed{splitmix64(splitmix64(parent.value) ^ splitmix64(tag + 0x632be59bd9b4e019ULL))};
}

Seed derive(Seed parent, std::uint64_t tag_a, std::uint64_t tag_b) {
    return derive(derive(parent, tag_a), tag_b);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(angle);
    has_spare_ = true;
    return mag * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ContractViolation("Rng::below(0)");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = max() - (max() % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % n;
}

double squared_distance(PointView a, PointView b) {
    if (a.size() != b.size()) throw ContractViolation("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

bool within(PointView q, PointView x, double radius) {
    return squared_distance(q, x) <= radius * radius;
}

bool beyond(PointView q, PointView x, double radius) {
    return squared_distance(q, x) >= radius * radius;
}

bool eps_stabs(PointView q, PointView x, PointView y, const EpsParams& params) {
    if (q.size() != x.size() || q.size() != y.size()) throw ContractViolation("dimension mismatch");
    const double r2 = params.radius * params.radius;
    const double outer = params.outer_radius();
    const double o2 = outer * outer;
    const double dx = squared_distance(q, x);
    const double dy = squared_distance(q, y);
    return (dx <= r2 && dy >= o2) || (dy <= r2 && dx >= o2);
}

GaussianProjection::GaussianProjection(std::size_t source_dim, std::size_t target_dim, Seed seed)
    : source_dim_(source_dim), target_dim_(target_dim), matrix_(source_dim * target_dim) {
    if (target_dim == 0 || source_dim == 0) throw ContractViolation("projection dimensions must be positive");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
    for (double& m : matrix_) m = rng.normal() * scale;
}

GaussianProjection::GaussianProjection(std::size_t source_dim, std::size_t target_dim, std::vector<double> matrix)
    : source_dim_(source_dim), target_dim_(target_dim), matrix_(std::move(matrix)) {
    if (matrix_.size() != source_dim * target_dim) throw ContractViolation("projection matrix has wrong shape");
}

GaussianProjection GaussianProjection::identity(std::size_t dim) {
    std::vector<double> m(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
    return GaussianProjection(dim, dim, std::move(m));
}

Point GaussianProjection::apply(PointView p) const {
    if (p.size() != source_dim_) throw ContractViolation("projection input has wrong dimension");
    Point out(target_dim_, 0.0);
    for (std::size_t r = 0; r < target_dim_; ++r) {
        const double* row = matrix_.data() + r * source_dim_;
        double s = 0.0;
        for (std::size_t c = 0; c < source_dim_; ++c) s += row[c] * p[c];
        out[r] = s;
    }
    return out;
}

WeightedPointSet GaussianProjection::apply(const WeightedPointSet& pts) const {
    std::vector<double> coords;
    coords.reserve(pts.size() * target_dim_);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto img = apply(pts.point(i));
        coords.insert(coords.end(), img.begin(), img.end());
    }
    return WeightedPointSet(target_dim_, std::move(coords), pts.weights());
}

WeightedPointSet gaussian_project(const WeightedPointSet& pts, std::size_t target_dim, Seed seed) {
    return GaussianProjection(pts.dim(), target_dim, seed).apply(pts);
}

Point snap_to_grid(PointView p, const GridSpec& grid) {
    if (!(grid.side > 0.0)) throw ContractViolation("grid side must be positive");
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = grid.side * std::floor(p[i] / grid.side + 0.5);
    }
    return out;
}

WeightedPointSet scale_coordinates(const WeightedPointSet& pts, double factor) {
    std::vector<double> coords = pts.coords();
    for (double& c : coords) c *= factor;
    return WeightedPointSet(pts.dim(), std::move(coords), pts.weights());
}

namespace {

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
}

}  // namespace

std::string digest(const WeightedPointSet& pts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const std::uint64_t n = pts.size();
    const std::uint64_t d = pts.dim();
    fnv_mix(h, &n, sizeof n);
    fnv_mix(h, &d, sizeof d);
    fnv_mix(h, pts.coords().data(), pts.coords().size() * sizeof(double));
    fnv_mix(h, pts.weights().data(), pts.weights().size() * sizeof(double));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t point_hash(PointView p) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv_mix(h, p.data(), p.size() * sizeof(double));
    return h;
}

}  // namespace arc
