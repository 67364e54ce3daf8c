#pragma once

#include <cmath>
#include <stdexcept>

#include "sfnlm/image.hpp"

namespace sfnlm {

inline double mse(const Image& u, const Image& w) {
    require_valid(u, "mse");
    require_valid(w, "mse");
    if (!u.same_shape(w))
        throw std::invalid_argument("mse: images have different dimensions");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.pixels.size(); ++i) {
        const double d = u.pixels[i] - w.pixels[i];
        acc += d * d;
    }
    return acc / static_cast<double>(u.pixels.size());
}

// Peak signal-to-noise ratio in dB with MAX fixed to 255 (8-bit convention),
// independent of the actual dynamic range of the inputs. Identical images
// have infinite PSNR and are rejected; callers that want +inf must handle
// that case themselves.
inline double psnr(const Image& u, const Image& w) {
    const double m = mse(u, w);
    if (m == 0.0)
        throw std::invalid_argument("psnr: identical images (PSNR is infinite)");
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

}  // namespace sfnlm
