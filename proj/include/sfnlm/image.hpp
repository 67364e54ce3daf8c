#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfnlm {

// Row-major grayscale raster. Samples live in the nominal [0,255] range but
// are kept in full floating-point range while processing; quantization and
// clamping happen only when a file is written.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // width*height samples, row-major

    Image() = default;

    Image(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
        pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
    }

    double& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t size() const { return pixels.size(); }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height;
    }
};

// Throws if the image is structurally broken or holds non-finite samples.
inline void require_valid(const Image& img, const char* context) {
    if (img.width <= 0 || img.height <= 0)
        throw std::invalid_argument(std::string(context) + ": image dimensions must be positive");
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
        throw std::invalid_argument(std::string(context) + ": pixel buffer size does not match dimensions");
    for (double v : img.pixels)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(context) + ": image contains a non-finite sample");
}

inline std::pair<double, double> minmax(const Image& img) {
    auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    return {*lo, *hi};
}

inline Image clamped(const Image& img, double lo = 0.0, double hi = 255.0) {
    Image out = img;
    for (double& v : out.pixels) v = std::clamp(v, lo, hi);
    return out;
}

// Symmetric (edge-repeating) reflection of an out-of-range index:
//   ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline int mirror_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

// Copy of the image with `radius` mirrored pixels added on every side.
inline std::vector<double> mirror_pad(const Image& img, int radius) {
    const int pw = img.width + 2 * radius;
    const int ph = img.height + 2 * radius;
    std::vector<double> pad(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = mirror_index(y - radius, img.height);
        for (int x = 0; x < pw; ++x)
            pad[static_cast<std::size_t>(y) * pw + x] = img.at(mirror_index(x - radius, img.width), sy);
    }
    return pad;
}

}  // namespace sfnlm
