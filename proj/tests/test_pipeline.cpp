#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "sfnlm/metrics.hpp"
#include "sfnlm/noise.hpp"
#include "sfnlm/pipeline.hpp"

using namespace sfnlm;

namespace {

Image textured_flat_composite(int w, int h) {
    // left half flat, right half fine quasi-periodic texture
    Image u(w, h, 128.0);
    for (int y = 0; y < h; ++y)
        for (int x = w / 2; x < w; ++x)
            u.at(x, y) = 128.0 + 55.0 * std::sin(2.0 * std::numbers::pi * x / 6.3) *
                                      std::cos(2.0 * std::numbers::pi * y / 8.7);
    return u;
}

}  // namespace

TEST_CASE("fnlm_denoise composes the three module calls") {
    oracle::TestRng rng(51);
    const Image v = oracle::random_image(16, 16, rng);
    SfnlmConfig cfg;
    cfg.sigma = 10.0;

    const Image got = fnlm_denoise(v, cfg);
    const Spectrum s = forward_dft(v);
    const HalfPlaneIndex idx = build_half_plane(16, 16);
    const Image want = inverse_dft(fnlm_filter(s, cfg.frequency_params(), idx, cfg.threads));
    REQUIRE(got.pixels == want.pixels);
}

TEST_CASE("fnlm_denoise limits") {
    oracle::TestRng rng(52);
    SECTION("zero image maps to the zero image") {
        const Image z(9, 7, 0.0);
        SfnlmConfig cfg;
        cfg.sigma = 10.0;
        const Image out = fnlm_denoise(z, cfg);
        for (double p : out.pixels) REQUIRE(std::abs(p) < 1e-12);
    }
    SECTION("vanishing l approaches the identity") {
        const Image v = oracle::random_image(12, 12, rng);
        SfnlmConfig cfg;
        cfg.sigma = 1e-9;  // l = 0.8e-9, far below any patch distance
        const Image out = fnlm_denoise(v, cfg);
        for (std::size_t i = 0; i < v.size(); ++i)
            REQUIRE(out.pixels[i] == Catch::Approx(v.pixels[i]).margin(1e-9));
    }
}

TEST_CASE("sfnlm_denoise") {
    oracle::TestRng rng(53);
    const Image u = textured_flat_composite(24, 20);
    const Image v = add_gaussian_noise(u, NoiseModel{10.0, 9});
    SfnlmConfig cfg;
    cfg.sigma = 10.0;

    SECTION("equals the spatial stage applied to the stored intermediate") {
        const SfnlmStages stages = sfnlm_denoise_stages(v, cfg);
        const Image direct = sfnlm_denoise(v, cfg);
        REQUIRE(stages.final.pixels == direct.pixels);
        const Image spatial = nlm_filter(stages.frequency, cfg.spatial_params(), cfg.threads);
        REQUIRE(stages.final.pixels == spatial.pixels);
    }
    SECTION("output range bounded by the frequency-stage extrema") {
        const SfnlmStages stages = sfnlm_denoise_stages(v, cfg);
        const auto [lo, hi] = minmax(stages.frequency);
        for (double p : stages.final.pixels) {
            REQUIRE(p >= lo - 1e-12);
            REQUIRE(p <= hi + 1e-12);
        }
    }
    SECTION("fully deterministic") {
        const Image a = sfnlm_denoise(v, cfg);
        const Image b = sfnlm_denoise(v, cfg);
        REQUIRE(a.pixels == b.pixels);
    }
    SECTION("invalid sigma is rejected") {
        SfnlmConfig bad;
        bad.sigma = 0.0;
        REQUIRE_THROWS_AS(sfnlm_denoise(v, bad), std::invalid_argument);
    }
}

TEST_CASE("fourier_better_map") {
    const Image u = textured_flat_composite(64, 48);
    SfnlmConfig cfg;
    cfg.sigma = 20.0;
    const NoiseModel model{20.0, 100};

    SECTION("n=1 equals a direct two-run comparison") {
        const Image map = fourier_better_map(u, model, 1, cfg);
        const Image v = add_gaussian_noise(u, model);
        SpatialParams sp = cfg.spatial_params();
        sp.h = cfg.sigma;
        const Image den_s = nlm_filter(v, sp, cfg.threads);
        const Image den_f = fnlm_denoise(v, cfg);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double es = u.pixels[i] - den_s.pixels[i];
            const double ef = u.pixels[i] - den_f.pixels[i];
            REQUIRE(map.pixels[i] == (es * es > ef * ef ? 255.0 : 0.0));
        }
    }
    SECTION("binary and reproducible under fixed seeds") {
        const Image m1 = fourier_better_map(u, model, 3, cfg);
        const Image m2 = fourier_better_map(u, model, 3, cfg);
        REQUIRE(m1.pixels == m2.pixels);
        for (double p : m1.pixels) REQUIRE((p == 0.0 || p == 255.0));
    }
    SECTION("frequency wins more often in the textured half") {
        const Image map = fourier_better_map(u, model, 3, cfg);
        double white_flat = 0.0, white_tex = 0.0;
        const int half = u.width / 2;
        for (int y = 0; y < u.height; ++y) {
            for (int x = 0; x < half; ++x) white_flat += map.at(x, y) / 255.0;
            for (int x = half; x < u.width; ++x) white_tex += map.at(x, y) / 255.0;
        }
        const double frac_flat = white_flat / (half * u.height);
        const double frac_tex = white_tex / ((u.width - half) * u.height);
        INFO("white fraction flat=" << frac_flat << " textured=" << frac_tex);
        CHECK(frac_tex > frac_flat);
    }
    SECTION("n must be at least one") {
        REQUIRE_THROWS_AS(fourier_better_map(u, model, 0, cfg), std::invalid_argument);
    }
}
