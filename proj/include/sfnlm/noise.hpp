#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "sfnlm/image.hpp"

namespace sfnlm {

// Additive white Gaussian noise of standard deviation `sigma` gray levels,
// reproducible from `seed`. The generator is self-contained so that a run is
// fully determined by the seed; the exact algorithm (splitmix64-seeded
// xoshiro256++ plus Box-Muller) is documented in the README.
struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

inline void require_valid(const NoiseModel& model) {
    if (!(model.sigma >= 0.0))
        throw std::invalid_argument("NoiseModel: sigma must be >= 0");
}

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna), state seeded via splitmix64.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace detail

// Stream of i.i.d. standard normal samples driven by one 64-bit seed.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller; u1 in (0,1] so the log is finite, u2 in [0,1).
        const double u1 = static_cast<double>((rng_.next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng_.next() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    detail::Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// v = u + b with b ~ N(0, sigma^2) i.i.d., generated in row-major pixel
// order. No clipping; the same (image, sigma, seed) gives bit-identical
// output regardless of thread count (generation is sequential).
inline Image add_gaussian_noise(const Image& u, const NoiseModel& model) {
    require_valid(u, "add_gaussian_noise");
    require_valid(model);
    Image v = u;
    if (model.sigma == 0.0) return v;
    GaussianSampler gauss(model.seed);
    for (double& p : v.pixels) p += model.sigma * gauss.next();
    return v;
}

}  // namespace sfnlm
