#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sfnlm/parallel.hpp"
#include "sfnlm/patch_weights.hpp"
#include "sfnlm/spectral.hpp"

namespace sfnlm {

// Parameters of the frequency filter: filtering strength l (same scale as
// the unitary spectrum, hence comparable to sigma), annulus half-width r in
// frequency-grid units, and the shared patch weighting.
struct FrequencyParams {
    double l = 0.0;
    double r = 2.0;
    int patch_radius = 3;
    double a = 1.0;
};

inline void require_valid(const FrequencyParams& p) {
    if (!(p.l > 0.0)) throw std::invalid_argument("FrequencyParams: l must be positive");
    if (!(p.r >= 0.0)) throw std::invalid_argument("FrequencyParams: r must be >= 0");
    if (p.patch_radius < 0) throw std::invalid_argument("FrequencyParams: patch_radius must be >= 0");
    if (!(p.a > 0.0)) throw std::invalid_argument("FrequencyParams: a must be positive");
}

namespace detail {

// Euclidean modulus of a centered frequency coordinate. Integer arguments
// make this correctly rounded, so independent evaluations agree bit for bit.
inline double freq_modulus(int kx, int ky) {
    return std::sqrt(static_cast<double>(kx) * kx + static_cast<double>(ky) * ky);
}

}  // namespace detail

// Radius-sorted view of the half plane. The half annulus
// C_w = { xi in P : | |w| - |xi| | <= r } of any representative is retrieved
// by binary search over the sorted moduli; this is the main performance
// lever, since annuli hold thousands of members on large images.
struct AnnulusIndex {
    double r = 0.0;
    std::vector<double> modulus;             // per half-plane entry
    std::vector<std::int32_t> by_modulus;    // entry ids, stable-sorted by modulus
    std::vector<double> sorted_modulus;      // modulus[by_modulus[pos]]

    // Conservative candidate window [lo, hi); callers must still apply the
    // literal test |m - sorted_modulus[pos]| <= r to each candidate.
    std::pair<std::size_t, std::size_t> window(double m) const {
        std::size_t lo = std::lower_bound(sorted_modulus.begin(), sorted_modulus.end(), m - r) -
                         sorted_modulus.begin();
        std::size_t hi = std::upper_bound(sorted_modulus.begin(), sorted_modulus.end(), m + r) -
                         sorted_modulus.begin();
        while (lo > 0 && std::abs(m - sorted_modulus[lo - 1]) <= r) --lo;
        while (hi < sorted_modulus.size() && std::abs(m - sorted_modulus[hi]) <= r) ++hi;
        return {lo, hi};
    }

    // Members of C_w for the given entry, in canonical bin order (ascending
    // modulus, ties by entry id).
    std::vector<std::int32_t> members(std::int32_t entry) const {
        const double m = modulus[entry];
        const auto [lo, hi] = window(m);
        std::vector<std::int32_t> out;
        out.reserve(hi - lo);
        for (std::size_t pos = lo; pos < hi; ++pos)
            if (std::abs(m - sorted_modulus[pos]) <= r) out.push_back(by_modulus[pos]);
        return out;
    }
};

inline AnnulusIndex build_annulus_index(const HalfPlaneIndex& idx, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("build_annulus_index: r must be >= 0");
    AnnulusIndex ann;
    ann.r = r;
    const std::size_t n = idx.entries.size();
    ann.modulus.resize(n);
    for (std::size_t e = 0; e < n; ++e)
        ann.modulus[e] = detail::freq_modulus(idx.entries[e][0], idx.entries[e][1]);
    ann.by_modulus.resize(n);
    std::iota(ann.by_modulus.begin(), ann.by_modulus.end(), 0);
    std::stable_sort(ann.by_modulus.begin(), ann.by_modulus.end(),
                     [&](std::int32_t a, std::int32_t b) { return ann.modulus[a] < ann.modulus[b]; });
    ann.sorted_modulus.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        ann.sorted_modulus[pos] = ann.modulus[ann.by_modulus[pos]];
    return ann;
}

namespace detail {

// Toroidal index tables: padded axis position -> raster position. The DFT is
// periodic, so spectral patches wrap around the plane edges.
inline std::vector<int> wrap_table(int n, int radius) {
    std::vector<int> map(static_cast<std::size_t>(n) + 2 * radius);
    for (int i = -radius; i < n + radius; ++i) {
        int v = i % n;
        if (v < 0) v += n;
        map[static_cast<std::size_t>(i + radius)] = v;
    }
    return map;
}

// Copies the 7x7 (in general (2R+1)^2) patch around a raster position into
// re/im blocks, row-major offsets, toroidal wraparound.
inline void extract_spectral_patch(const Spectrum& s, int ix, int iy, int radius,
                                   const std::vector<int>& xmap, const std::vector<int>& ymap,
                                   double* re_block, double* im_block) {
    std::size_t j = 0;
    for (int ty = -radius; ty <= radius; ++ty) {
        const int yy = ymap[static_cast<std::size_t>(iy + ty + radius)];
        const std::size_t row = static_cast<std::size_t>(yy) * s.width;
        for (int tx = -radius; tx <= radius; ++tx, ++j) {
            const int xx = xmap[static_cast<std::size_t>(ix + tx + radius)];
            const Complex c = s.coeffs[row + xx];
            re_block[j] = c.real();
            im_block[j] = c.imag();
        }
    }
}

}  // namespace detail

// Squared patch distance between the spectral neighborhoods of two centered
// frequencies: the Gaussian-weighted distance of the real parts plus that of
// the imaginary parts. Patches are read from the full Hermitian-extended
// plane with toroidal indexing.
inline double spectral_patch_distance(const Spectrum& s, int wx, int wy, int xx, int xy,
                                      const PatchWeights& w) {
    if (wx < s.kx_min() || wx > s.kx_max() || wy < s.ky_min() || wy > s.ky_max() ||
        xx < s.kx_min() || xx > s.kx_max() || xy < s.ky_min() || xy > s.ky_max())
        throw std::invalid_argument("spectral_patch_distance: frequency out of range");
    const int R = w.radius;
    const std::vector<int> xmap = detail::wrap_table(s.width, R);
    const std::vector<int> ymap = detail::wrap_table(s.height, R);
    std::vector<double> a_re(w.count()), a_im(w.count()), b_re(w.count()), b_im(w.count());
    detail::extract_spectral_patch(s, wx + s.center_x(), wy + s.center_y(), R, xmap, ymap,
                                   a_re.data(), a_im.data());
    detail::extract_spectral_patch(s, xx + s.center_x(), xy + s.center_y(), R, xmap, ymap,
                                   b_re.data(), b_im.data());
    return detail::weighted_sq_distance(a_re.data(), b_re.data(), w.w.data(), w.count()) +
           detail::weighted_sq_distance(a_im.data(), b_im.data(), w.w.data(), w.count());
}

// NL-means over the half plane of Fourier coefficients: every representative
// is replaced by the weighted average of its half annulus, weights
// exp(-patch distance / (2 l^2)) applied to real and imaginary parts alike.
// The full plane is rebuilt by Hermitian symmetry, so the inverse transform
// of the result is real.
inline Spectrum fnlm_filter(const Spectrum& s, const FrequencyParams& p,
                            const HalfPlaneIndex& idx, const AnnulusIndex& ann,
                            int threads = 0) {
    require_valid(p);
    if (s.width != idx.width || s.height != idx.height)
        throw std::invalid_argument("fnlm_filter: spectrum and half-plane dimensions differ");
    if (ann.modulus.size() != idx.entries.size() || ann.r != p.r)
        throw std::invalid_argument("fnlm_filter: annulus index does not match (plane, r)");

    const std::size_t n = idx.entries.size();
    const int R = p.patch_radius;
    const std::size_t T = static_cast<std::size_t>(2 * R + 1) * (2 * R + 1);
    const PatchWeights weights(p.a, R);
    const std::vector<int> xmap = detail::wrap_table(s.width, R);
    const std::vector<int> ymap = detail::wrap_table(s.height, R);

    // Per-entry patch blocks: T reals then T imaginaries, contiguous.
    std::vector<double> blocks(n * 2 * T);
    parallel_for(static_cast<std::int64_t>(n), threads, [&](std::int64_t e) {
        const auto [kx, ky] = idx.entries[static_cast<std::size_t>(e)];
        double* block = &blocks[static_cast<std::size_t>(e) * 2 * T];
        detail::extract_spectral_patch(s, kx + s.center_x(), ky + s.center_y(), R, xmap, ymap,
                                       block, block + T);
    });

    const std::vector<Complex> half_in = restrict_to_half(s, idx);
    std::vector<Complex> half_out(n);
    const double inv_2l2 = 1.0 / (2.0 * p.l * p.l);

    parallel_for(static_cast<std::int64_t>(n), threads, [&](std::int64_t e) {
        const double m = ann.modulus[static_cast<std::size_t>(e)];
        const auto [lo, hi] = ann.window(m);
        const double* pa = &blocks[static_cast<std::size_t>(e) * 2 * T];
        double acc_re = 0.0, acc_im = 0.0, Z = 0.0;
        for (std::size_t pos = lo; pos < hi; ++pos) {
            if (!(std::abs(m - ann.sorted_modulus[pos]) <= ann.r)) continue;
            const std::int32_t q = ann.by_modulus[pos];
            const double* pb = &blocks[static_cast<std::size_t>(q) * 2 * T];
            const double dist =
                detail::weighted_sq_distance(pa, pb, weights.w.data(), T) +
                detail::weighted_sq_distance(pa + T, pb + T, weights.w.data(), T);
            const double wgt = std::exp(-dist * inv_2l2);
            acc_re += wgt * half_in[static_cast<std::size_t>(q)].real();
            acc_im += wgt * half_in[static_cast<std::size_t>(q)].imag();
            Z += wgt;
        }
        half_out[static_cast<std::size_t>(e)] = Complex{acc_re / Z, acc_im / Z};
    });

    return reconstruct_full(half_out, idx);
}

inline Spectrum fnlm_filter(const Spectrum& s, const FrequencyParams& p,
                            const HalfPlaneIndex& idx, int threads = 0) {
    return fnlm_filter(s, p, idx, build_annulus_index(idx, p.r), threads);
}

}  // namespace sfnlm
