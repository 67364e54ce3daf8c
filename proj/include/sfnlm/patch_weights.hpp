#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sfnlm {

// Gaussian profile of standard deviation `a` evaluated at the integer
// offsets of a (2r+1)x(2r+1) patch and normalized to sum 1, so that the
// weighted squared patch distance of two pure-noise patches has expectation
// 2*sigma^2 regardless of the patch size. Shared by the spatial and the
// frequency filter.
struct PatchWeights {
    int radius = 3;
    double a = 1.0;
    std::vector<double> w;  // (2r+1)^2 entries, row-major (ty, tx)

    explicit PatchWeights(double a_, int radius_ = 3) : radius(radius_), a(a_) {
        if (!(a > 0.0))
            throw std::invalid_argument("PatchWeights: a must be positive");
        if (radius < 0)
            throw std::invalid_argument("PatchWeights: radius must be >= 0");
        const int side = 2 * radius + 1;
        w.resize(static_cast<std::size_t>(side) * side);
        double sum = 0.0;
        std::size_t j = 0;
        for (int ty = -radius; ty <= radius; ++ty)
            for (int tx = -radius; tx <= radius; ++tx, ++j) {
                w[j] = std::exp(-(tx * tx + ty * ty) / (2.0 * a * a));
                sum += w[j];
            }
        for (double& x : w) x /= sum;
    }

    int side() const { return 2 * radius + 1; }
    std::size_t count() const { return w.size(); }
};

namespace detail {

// Canonical weighted squared distance between two patch buffers: a single
// accumulator over row-major offsets. Every code path that compares patches
// funnels through this kernel so results are bit-identical.
inline double weighted_sq_distance(const double* pa, const double* pb,
                                   const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = pa[j] - pb[j];
        acc += w[j] * d * d;
    }
    return acc;
}

}  // namespace detail

}  // namespace sfnlm
