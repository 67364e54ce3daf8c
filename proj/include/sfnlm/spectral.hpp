#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfnlm/image.hpp"

namespace sfnlm {

using Complex = std::complex<double>;

// Complex raster over centered frequency coordinates. The coefficient at
// (kx, ky) with kx in [-floor(W/2), ceil(W/2)-1] (ky likewise) is stored at
// row-major index (ky + floor(H/2)) * W + (kx + floor(W/2)), so DC sits at
// the center of the raster. Normalization is unitary: a factor 1/sqrt(W*H)
// on the forward transform and again on the inverse, which preserves energy
// and the standard deviation of white noise.
struct Spectrum {
    static constexpr const char* normalization = "unitary";

    int width = 0;
    int height = 0;
    std::vector<Complex> coeffs;  // width*height, row-major, centered

    Spectrum() = default;

    Spectrum(int w, int h) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Spectrum: dimensions must be positive");
        coeffs.assign(static_cast<std::size_t>(w) * h, Complex{0.0, 0.0});
    }

    int center_x() const { return width / 2; }
    int center_y() const { return height / 2; }
    int kx_min() const { return -(width / 2); }
    int kx_max() const { return width - width / 2 - 1; }
    int ky_min() const { return -(height / 2); }
    int ky_max() const { return height - height / 2 - 1; }

    Complex& at(int kx, int ky) {
        return coeffs[static_cast<std::size_t>(ky + center_y()) * width + (kx + center_x())];
    }
    Complex at(int kx, int ky) const {
        return coeffs[static_cast<std::size_t>(ky + center_y()) * width + (kx + center_x())];
    }

    bool same_shape(const Spectrum& o) const {
        return width == o.width && height == o.height;
    }
};

namespace detail {

// Centered representative of -k modulo n. The Nyquist coordinate -n/2 of an
// even dimension is its own negation.
inline int negate_freq(int k, int n) {
    return (n % 2 == 0 && k == -n / 2) ? k : -k;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 FFT (unnormalized). inverse=true computes the
// conjugate-exponent transform, still without any 1/N factor.
inline void fft_pow2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // Root table exp(sign * 2*pi*i * k / n) for k < n/2.
    std::vector<Complex> roots(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        roots[k] = Complex{std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t block = 0; block < n; block += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex w = roots[k * stride];
                Complex& lo = a[block + k];
                Complex& hi = a[block + k + len / 2];
                const Complex t = w * hi;
                hi = lo - t;
                lo += t;
            }
        }
    }
}

// Bluestein chirp-z transform for arbitrary lengths, built on fft_pow2.
inline void fft_bluestein(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    const std::size_t m = next_pow2(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;

    // chirp[k] = exp(sign * i * pi * k^2 / n); k^2 reduced mod 2n keeps the
    // trig argument small.
    std::vector<Complex> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t sq = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
        chirp[k] = Complex{std::cos(ang), std::sin(ang)};
    }

    std::vector<Complex> u(m, Complex{0.0, 0.0});
    std::vector<Complex> v(m, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);

    fft_pow2(u, false);
    fft_pow2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_pow2(u, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = chirp[k] * (u[k] * scale);
}

inline void fft(std::vector<Complex>& a, bool inverse) {
    if (is_pow2(a.size()))
        fft_pow2(a, inverse);
    else
        fft_bluestein(a, inverse);
}

// 2D FFT in math layout (row-major, DC at index 0), unnormalized.
inline void fft2d(std::vector<Complex>& data, int width, int height, bool inverse) {
    std::vector<Complex> line;
    line.resize(width);
    for (int y = 0; y < height; ++y) {
        std::copy_n(data.begin() + static_cast<std::size_t>(y) * width, width, line.begin());
        fft(line, inverse);
        std::copy_n(line.begin(), width, data.begin() + static_cast<std::size_t>(y) * width);
    }
    line.resize(height);
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) line[y] = data[static_cast<std::size_t>(y) * width + x];
        fft(line, inverse);
        for (int y = 0; y < height; ++y) data[static_cast<std::size_t>(y) * width + x] = line[y];
    }
}

}  // namespace detail

// Unitary 2D DFT with centered indexing.
inline Spectrum forward_dft(const Image& v) {
    require_valid(v, "forward_dft");
    const int W = v.width, H = v.height;
    std::vector<Complex> math(v.pixels.size());
    for (std::size_t i = 0; i < v.pixels.size(); ++i) math[i] = Complex{v.pixels[i], 0.0};
    detail::fft2d(math, W, H, false);

    Spectrum s(W, H);
    const double scale = 1.0 / std::sqrt(static_cast<double>(W) * H);
    const int cx = s.center_x(), cy = s.center_y();
    for (int iy = 0; iy < H; ++iy) {
        const int my = (iy - cy + H) % H;
        for (int ix = 0; ix < W; ++ix) {
            const int mx = (ix - cx + W) % W;
            s.coeffs[static_cast<std::size_t>(iy) * W + ix] =
                math[static_cast<std::size_t>(my) * W + mx] * scale;
        }
    }
    return s;
}

// Largest deviation from Hermitian symmetry, with the offending coordinate.
struct HermitianDefect {
    double worst = 0.0;
    double max_abs = 0.0;
    int kx = 0, ky = 0;
};

inline HermitianDefect hermitian_defect(const Spectrum& s) {
    HermitianDefect d;
    for (int ky = s.ky_min(); ky <= s.ky_max(); ++ky) {
        for (int kx = s.kx_min(); kx <= s.kx_max(); ++kx) {
            const Complex a = s.at(kx, ky);
            const Complex b = s.at(detail::negate_freq(kx, s.width), detail::negate_freq(ky, s.height));
            const double dev = std::abs(a - std::conj(b));
            d.max_abs = std::max(d.max_abs, std::abs(a));
            if (dev > d.worst) {
                d.worst = dev;
                d.kx = kx;
                d.ky = ky;
            }
        }
    }
    return d;
}

// Inverse unitary DFT of a Hermitian spectrum. Residual imaginary parts
// (guaranteed tiny by the symmetry check) are discarded.
inline Image inverse_dft(const Spectrum& s) {
    if (s.width <= 0 || s.height <= 0)
        throw std::invalid_argument("inverse_dft: empty spectrum");
    const HermitianDefect defect = hermitian_defect(s);
    if (defect.worst > 1e-9 * std::max(1.0, defect.max_abs))
        throw std::invalid_argument(
            "inverse_dft: spectrum is not Hermitian-symmetric; worst offender at (kx=" +
            std::to_string(defect.kx) + ", ky=" + std::to_string(defect.ky) +
            ") deviates by " + std::to_string(defect.worst));

    const int W = s.width, H = s.height;
    const int cx = s.center_x(), cy = s.center_y();
    std::vector<Complex> math(s.coeffs.size());
    for (int iy = 0; iy < H; ++iy) {
        const int my = (iy - cy + H) % H;
        for (int ix = 0; ix < W; ++ix) {
            const int mx = (ix - cx + W) % W;
            math[static_cast<std::size_t>(my) * W + mx] =
                s.coeffs[static_cast<std::size_t>(iy) * W + ix];
        }
    }
    detail::fft2d(math, W, H, true);

    Image out(W, H);
    const double scale = 1.0 / std::sqrt(static_cast<double>(W) * H);
    for (std::size_t i = 0; i < math.size(); ++i) out.pixels[i] = math[i].real() * scale;
    return out;
}

// One representative of every conjugate pair of frequencies: the rows
// ky < 0 (minus the even-H Nyquist row), plus the half kx <= 0 of the ky = 0
// row and of the Nyquist row when H is even. Self-conjugate points (DC and
// Nyquist-line intersections) represent themselves.
struct HalfPlaneIndex {
    int width = 0;
    int height = 0;
    std::vector<std::array<int, 2>> entries;   // centered (kx, ky), scan order
    std::vector<std::uint8_t> self_conjugate;  // per entry
    std::vector<std::int32_t> mirror_rep;      // per full-plane raster index
    std::vector<std::uint8_t> mirror_conj;     // per full-plane raster index

    std::size_t plane_index(int kx, int ky) const {
        return static_cast<std::size_t>(ky + height / 2) * width + (kx + width / 2);
    }
};

namespace detail {

inline bool in_half_plane(int kx, int ky, int height) {
    const bool nyquist_row = (height % 2 == 0) && (ky == -height / 2);
    if (ky == 0 || nyquist_row) return kx <= 0;
    return ky < 0;
}

}  // namespace detail

inline HalfPlaneIndex build_half_plane(int width, int height) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("build_half_plane: dimensions must be positive");
    HalfPlaneIndex idx;
    idx.width = width;
    idx.height = height;
    const int cx = width / 2, cy = height / 2;

    std::vector<std::int32_t> entry_at(static_cast<std::size_t>(width) * height, -1);
    for (int iy = 0; iy < height; ++iy) {
        const int ky = iy - cy;
        for (int ix = 0; ix < width; ++ix) {
            const int kx = ix - cx;
            if (!detail::in_half_plane(kx, ky, height)) continue;
            entry_at[static_cast<std::size_t>(iy) * width + ix] =
                static_cast<std::int32_t>(idx.entries.size());
            idx.entries.push_back({kx, ky});
            const bool self = detail::negate_freq(kx, width) == kx &&
                              detail::negate_freq(ky, height) == ky;
            idx.self_conjugate.push_back(self ? 1 : 0);
        }
    }

    idx.mirror_rep.resize(entry_at.size());
    idx.mirror_conj.resize(entry_at.size());
    for (int iy = 0; iy < height; ++iy) {
        const int ky = iy - cy;
        for (int ix = 0; ix < width; ++ix) {
            const int kx = ix - cx;
            const std::size_t i = static_cast<std::size_t>(iy) * width + ix;
            if (entry_at[i] >= 0) {
                idx.mirror_rep[i] = entry_at[i];
                idx.mirror_conj[i] = 0;
            } else {
                const int mx = detail::negate_freq(kx, width);
                const int my = detail::negate_freq(ky, height);
                const std::int32_t rep = entry_at[idx.plane_index(mx, my)];
                idx.mirror_rep[i] = rep;
                idx.mirror_conj[i] = 1;
            }
        }
    }
    return idx;
}

inline std::vector<Complex> restrict_to_half(const Spectrum& s, const HalfPlaneIndex& idx) {
    if (s.width != idx.width || s.height != idx.height)
        throw std::invalid_argument("restrict_to_half: spectrum and index dimensions differ");
    std::vector<Complex> half(idx.entries.size());
    for (std::size_t e = 0; e < idx.entries.size(); ++e)
        half[e] = s.at(idx.entries[e][0], idx.entries[e][1]);
    return half;
}

// Hermitian extension of values given on the half plane. Imaginary parts of
// self-conjugate coefficients are forced to zero so the inverse transform of
// the result is real.
inline Spectrum reconstruct_full(const std::vector<Complex>& half, const HalfPlaneIndex& idx) {
    if (half.size() != idx.entries.size())
        throw std::invalid_argument("reconstruct_full: expected one value per half-plane entry");
    Spectrum s(idx.width, idx.height);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const std::int32_t rep = idx.mirror_rep[i];
        Complex v = half[rep];
        if (idx.self_conjugate[rep]) v = Complex{v.real(), 0.0};
        s.coeffs[i] = idx.mirror_conj[i] ? std::conj(v) : v;
    }
    return s;
}

// Debug view of coefficient magnitudes on a log scale, mapped to [0,255].
inline Image log_magnitude_image(const Spectrum& s) {
    Image out(s.width, s.height);
    double top = 0.0;
    for (const Complex& c : s.coeffs) top = std::max(top, std::abs(c));
    const double denom = std::log1p(top);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        out.pixels[i] = denom > 0.0 ? 255.0 * std::log1p(std::abs(s.coeffs[i])) / denom : 0.0;
    return out;
}

}  // namespace sfnlm
