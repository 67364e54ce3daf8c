#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sfnlm/image.hpp"
#include "sfnlm/parallel.hpp"
#include "sfnlm/patch_weights.hpp"

namespace sfnlm {

// Parameters of the spatial filter: filtering strength h (gray levels),
// search radius d (pixels, Euclidean disc), patch radius (3 gives the 7x7
// patch) and the std a of the Gaussian patch weighting.
struct SpatialParams {
    double h = 0.0;
    double d = 4.0;
    int patch_radius = 3;
    double a = 1.0;
};

inline void require_valid(const SpatialParams& p) {
    if (!(p.h > 0.0)) throw std::invalid_argument("SpatialParams: h must be positive");
    if (!(p.d >= 1.0)) throw std::invalid_argument("SpatialParams: d must be >= 1");
    if (p.patch_radius < 0) throw std::invalid_argument("SpatialParams: patch_radius must be >= 0");
    if (!(p.a > 0.0)) throw std::invalid_argument("SpatialParams: a must be positive");
}

namespace detail {

// Offsets of the Euclidean disc ||t||_2 <= d in canonical row-major order.
// Summation over the search zone always follows this order, so results do
// not depend on the degree of parallelism.
inline std::vector<std::pair<int, int>> disc_offsets(double d) {
    const int D = static_cast<int>(std::floor(d));
    std::vector<std::pair<int, int>> offsets;
    offsets.reserve(static_cast<std::size_t>(2 * D + 1) * (2 * D + 1));
    for (int dy = -D; dy <= D; ++dy)
        for (int dx = -D; dx <= D; ++dx)
            if (dx * dx + dy * dy <= d * d) offsets.emplace_back(dy, dx);
    return offsets;
}

}  // namespace detail

// Gaussian-weighted squared distance between the patches centered at
// (ax, ay) and (bx, by); patches crossing the border are extended by
// mirror (symmetric) padding.
inline double patch_distance(const Image& v, int ax, int ay, int bx, int by,
                             const PatchWeights& w) {
    require_valid(v, "patch_distance");
    if (ax < 0 || ax >= v.width || ay < 0 || ay >= v.height ||
        bx < 0 || bx >= v.width || by < 0 || by >= v.height)
        throw std::invalid_argument("patch_distance: patch centers must lie inside the image");
    const int R = w.radius;
    std::vector<double> pa(w.count()), pb(w.count());
    std::size_t j = 0;
    for (int ty = -R; ty <= R; ++ty)
        for (int tx = -R; tx <= R; ++tx, ++j) {
            pa[j] = v.at(mirror_index(ax + tx, v.width), mirror_index(ay + ty, v.height));
            pb[j] = v.at(mirror_index(bx + tx, v.width), mirror_index(by + ty, v.height));
        }
    return detail::weighted_sq_distance(pa.data(), pb.data(), w.w.data(), w.count());
}

// Classical NL-means: each output pixel is the weighted average of the
// pixels y of the disc ||x - y||_2 <= d (clipped to the image domain), with
// weights exp(-||V(x) - V(y)||^2_{2,a} / (2 h^2)). The center pixel keeps
// its natural weight 1.
inline Image nlm_filter(const Image& v, const SpatialParams& p, int threads = 0) {
    require_valid(v, "nlm_filter");
    require_valid(p);

    const int W = v.width, H = v.height;
    const int R = p.patch_radius;
    const int PW = W + 2 * R;
    const std::vector<double> pad = mirror_pad(v, R);
    const PatchWeights weights(p.a, R);
    const std::vector<std::pair<int, int>> offsets = detail::disc_offsets(p.d);
    const double inv_2h2 = 1.0 / (2.0 * p.h * p.h);

    Image out(W, H);
    parallel_for(static_cast<std::int64_t>(W) * H, threads, [&](std::int64_t i) {
        const int x = static_cast<int>(i % W);
        const int y = static_cast<int>(i / W);
        double num = 0.0;
        double Z = 0.0;
        for (const auto& [dy, dx] : offsets) {
            const int yy = y + dy;
            const int xx = x + dx;
            if (xx < 0 || xx >= W || yy < 0 || yy >= H) continue;
            // Same accumulation order as detail::weighted_sq_distance.
            double dist = 0.0;
            std::size_t j = 0;
            for (int ty = -R; ty <= R; ++ty) {
                const double* ra = &pad[static_cast<std::size_t>(y + ty + R) * PW + x];
                const double* rb = &pad[static_cast<std::size_t>(yy + ty + R) * PW + xx];
                for (int k = 0; k <= 2 * R; ++k, ++j) {
                    const double diff = ra[k] - rb[k];
                    dist += weights.w[j] * diff * diff;
                }
            }
            const double wgt = std::exp(-dist * inv_2h2);
            num += wgt * v.at(xx, yy);
            Z += wgt;
        }
        out.pixels[i] = num / Z;
    });
    return out;
}

}  // namespace sfnlm
