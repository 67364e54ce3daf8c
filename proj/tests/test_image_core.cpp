#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "sfnlm/image.hpp"
#include "sfnlm/io.hpp"
#include "sfnlm/metrics.hpp"
#include "sfnlm/noise.hpp"

using namespace sfnlm;

namespace {

const std::string kDataDir = TEST_DATA_DIR;

Image synthetic_image(int w, int h) {
    Image u(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            u.at(x, y) = 127.5 + 90.0 * std::sin(0.05 * x) * std::cos(0.037 * y) +
                         30.0 * std::sin(0.21 * (x + y));
    return u;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gaussian noise basics") {
    oracle::TestRng rng(11);
    const Image u = oracle::random_image(24, 17, rng);

    SECTION("sigma = 0 returns the input exactly") {
        const Image v = add_gaussian_noise(u, NoiseModel{0.0, 7});
        REQUIRE(v.pixels == u.pixels);
    }
    SECTION("same seed is bit-identical, different seeds differ") {
        const Image v1 = add_gaussian_noise(u, NoiseModel{10.0, 1});
        const Image v2 = add_gaussian_noise(u, NoiseModel{10.0, 1});
        const Image v3 = add_gaussian_noise(u, NoiseModel{10.0, 2});
        REQUIRE(v1.pixels == v2.pixels);
        REQUIRE(v1.pixels != v3.pixels);
    }
    SECTION("negative sigma is rejected") {
        REQUIRE_THROWS_AS(add_gaussian_noise(u, NoiseModel{-1.0, 0}), std::invalid_argument);
    }
}

TEST_CASE("noise statistics converge to the model") {
    const Image u(1024, 1024, 100.0);
    const Image v = add_gaussian_noise(u, NoiseModel{20.0, 123});
    double mean = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) mean += v.pixels[i] - u.pixels[i];
    mean /= static_cast<double>(u.size());
    double var = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = v.pixels[i] - u.pixels[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(u.size() - 1);
    CHECK(std::abs(mean) < 0.1);
    CHECK(std::abs(std::sqrt(var) - 20.0) < 0.2);
}

TEST_CASE("noisy 512x512 image lands at the analytic PSNR") {
    const Image u = synthetic_image(512, 512);
    const Image v = add_gaussian_noise(u, NoiseModel{10.0, 7});
    const double expected = 20.0 * std::log10(255.0 / 10.0);  // 28.1308
    CHECK(psnr(u, v) == Catch::Approx(expected).margin(0.10));
}

TEST_CASE("psnr") {
    oracle::TestRng rng(5);
    const Image u = oracle::random_image(31, 19, rng);

    SECTION("constant offset of 10 gives the analytic value") {
        Image w = u;
        for (double& p : w.pixels) p += 10.0;
        CHECK(psnr(u, w) == Catch::Approx(20.0 * std::log10(255.0 / 10.0)).margin(1e-6));
    }
    SECTION("full-scale error gives 0 dB") {
        Image w = u;
        for (double& p : w.pixels) p += 255.0;
        CHECK(psnr(u, w) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("symmetric in its arguments") {
        const Image w = add_gaussian_noise(u, NoiseModel{5.0, 3});
        CHECK(psnr(u, w) == psnr(w, u));
    }
    SECTION("identical images are an error") {
        REQUIRE_THROWS_WITH(psnr(u, u), Catch::Matchers::ContainsSubstring("identical"));
    }
    SECTION("dimension mismatch is an error") {
        const Image w(7, 7, 1.0);
        REQUIRE_THROWS_AS(psnr(u, w), std::invalid_argument);
    }
}

TEST_CASE("pgm round trip and quantization") {
    SECTION("integer-valued image round-trips byte-identically") {
        oracle::TestRng rng(17);
        Image u(33, 21);
        for (double& p : u.pixels) p = static_cast<double>(rng.uniform_int(0, 255));
        const std::string path = temp_path("sfnlm_roundtrip.pgm");
        write_image(path, u);
        const Image back = read_image(path);
        REQUIRE(back.width == u.width);
        REQUIRE(back.height == u.height);
        REQUIRE(back.pixels == u.pixels);

        // writing the read-back image reproduces the file byte for byte
        const std::string path2 = temp_path("sfnlm_roundtrip2.pgm");
        write_image(path2, back);
        std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
        const std::string b1((std::istreambuf_iterator<char>(f1)), {});
        const std::string b2((std::istreambuf_iterator<char>(f2)), {});
        REQUIRE(b1 == b2);
    }
    SECTION("write clamps and rounds half-up") {
        Image u(4, 1);
        u.pixels = {255.7, -0.4, 127.5, 126.4999};
        const std::string path = temp_path("sfnlm_clamp.pgm");
        write_image(path, u);
        const Image back = read_image(path);
        CHECK(back.pixels == std::vector<double>{255.0, 0.0, 128.0, 126.0});
    }
    SECTION("non-finite samples are rejected at write") {
        Image u(2, 1);
        u.pixels = {1.0, std::nan("")};
        REQUIRE_THROWS(write_image(temp_path("sfnlm_nan.pgm"), u));
    }
}

TEST_CASE("png codec against an independent encoder") {
    SECTION("gradient fixture matches its generating formula") {
        const Image png = read_image(kDataDir + "/gradient_37x23.png");
        REQUIRE(png.width == 37);
        REQUIRE(png.height == 23);
        for (int y = 0; y < png.height; ++y)
            for (int x = 0; x < png.width; ++x)
                REQUIRE(png.at(x, y) == static_cast<double>((7 * x + 13 * y + (x * y) % 5) % 256));
        const Image pgm = read_image(kDataDir + "/gradient_37x23_ref.pgm");
        REQUIRE(png.pixels == pgm.pixels);
    }
    SECTION("fixture with mixed row filters decodes exactly") {
        const Image png = read_image(kDataDir + "/mixed_64x48.png");
        const Image pgm = read_image(kDataDir + "/mixed_64x48_ref.pgm");
        REQUIRE(png.width == pgm.width);
        REQUIRE(png.height == pgm.height);
        REQUIRE(png.pixels == pgm.pixels);
    }
    SECTION("png write/read round trip") {
        oracle::TestRng rng(23);
        Image u(29, 31);
        for (double& p : u.pixels) p = static_cast<double>(rng.uniform_int(0, 255));
        const std::string path = temp_path("sfnlm_roundtrip.png");
        write_image(path, u);
        const Image back = read_image(path);
        REQUIRE(back.pixels == u.pixels);
    }
}

TEST_CASE("unsupported inputs produce descriptive errors") {
    using Catch::Matchers::ContainsSubstring;
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/color_16x16.png"),
                        ContainsSubstring("color type"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/gray16_8x8.png"),
                        ContainsSubstring("bit depth"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/palette_8x8.png"),
                        ContainsSubstring("color type"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/interlaced_8x8.png"),
                        ContainsSubstring("interlaced"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/ascii_8x8.pgm"), ContainsSubstring("P5"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/color_8x8.ppm"), ContainsSubstring("color"));
    REQUIRE_THROWS_WITH(read_image(kDataDir + "/truncated_16x16.pgm"),
                        ContainsSubstring("truncated"));
    REQUIRE_THROWS(read_image(kDataDir + "/does_not_exist.pgm"));
    REQUIRE_THROWS_WITH(write_image(temp_path("sfnlm_bad.bmp"), Image(2, 2, 0.0)),
                        ContainsSubstring("extension"));
}
