#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "arc/core.hpp"

namespace arc::testing {

inline WeightedPointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed, double side = 1.0,
                                      bool random_weights = true) {
    Rng rng(Seed{seed});
    std::vector<double> coords(n * d);
    for (double& c : coords) c = side * rng.uniform();
    std::vector<double> w(n, 1.0);
    if (random_weights) {
        for (double& x : w) x = rng.uniform();
    }
    return WeightedPointSet(d, std::move(coords), std::move(w));
}

inline Point random_point(std::size_t d, Rng& rng, double lo, double hi) {
    Point p(d);
    for (double& c : p) c = rng.uniform(lo, hi);
    return p;
}

/// Point at exactly `dist` from `center` along a random direction.
inline Point at_distance(const Point& center, double dist, Rng& rng) {
    Point dir(center.size());
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& c : dir) {
            c = rng.normal();
            norm += c * c;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    Point out(center);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += dist * dir[j] / norm;
    return out;
}

}  // namespace arc::testing
