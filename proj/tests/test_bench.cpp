#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "sfnlm/bench.hpp"

using namespace sfnlm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Image test_scene(int w, int h, double phase) {
    Image u(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            u.at(x, y) = 120.0 + 70.0 * std::sin(0.4 * x + phase) * std::cos(0.3 * y) +
                         20.0 * ((x / 6 + y / 6) % 2);
    return u;
}

}  // namespace

TEST_CASE("report csv round trip") {
    DenoiseReport report;
    RunRecord a;
    a.image_id = "lena";
    a.method = "sfnlm";
    a.sigma = 20.0;
    a.seed = 123456789012345ULL;
    a.h = 12.000000000000001;
    a.d = 4.0;
    a.a = 2.0;
    a.patch_radius = 3;
    a.l = 16.0;
    a.r = 2.0;
    a.psnr_unclipped = 32.123456789012345;
    a.psnr_clipped = 32.25;
    a.wall_ms = 1234.5678901234567;
    a.image_crc32 = 0xDEADBEEF;
    a.note = "ok";
    RunRecord b;  // sparse record: NaNs stay NaN through the round trip
    b.image_id = "barbara";
    b.method = "nlm";
    b.sigma = 10.0;
    b.seed = 1;
    b.h = 10.0;
    report.runs = {a, b};
    report.warnings = {"skipped foo.pgm: unreadable"};

    std::stringstream ss;
    write_csv(report, ss);
    const DenoiseReport back = read_csv(ss);

    REQUIRE(back.runs.size() == 2);
    REQUIRE(back.warnings == report.warnings);
    for (std::size_t i = 0; i < 2; ++i) {
        const RunRecord& x = report.runs[i];
        const RunRecord& y = back.runs[i];
        CHECK(y.image_id == x.image_id);
        CHECK(y.method == x.method);
        CHECK(y.sigma == x.sigma);
        CHECK(y.seed == x.seed);
        CHECK(y.patch_radius == x.patch_radius);
        CHECK(y.image_crc32 == x.image_crc32);
        CHECK(y.note == x.note);
        auto same = [](double p, double q) {
            return (std::isnan(p) && std::isnan(q)) || p == q;
        };
        CHECK(same(y.h, x.h));
        CHECK(same(y.d, x.d));
        CHECK(same(y.a, x.a));
        CHECK(same(y.l, x.l));
        CHECK(same(y.r, x.r));
        CHECK(same(y.psnr_unclipped, x.psnr_unclipped));
        CHECK(same(y.psnr_clipped, x.psnr_clipped));
        CHECK(same(y.wall_ms, x.wall_ms));
    }

    SECTION("foreign files are rejected") {
        std::stringstream junk("hello\nworld\n");
        REQUIRE_THROWS(read_csv(junk));
    }
}

TEST_CASE("benchmark over a tiny corpus") {
    const fs::path corpus = fresh_dir("sfnlm_test_corpus");
    write_image((corpus / "scene_a.pgm").string(), test_scene(24, 24, 0.0));
    write_image((corpus / "scene_b.png").string(), test_scene(20, 28, 1.3));

    BenchOptions opt;
    opt.threads = 2;
    const std::vector<std::string> methods{"nlm", "fnlm", "sfnlm"};
    const DenoiseReport report =
        run_benchmark(corpus.string(), methods, {15.0}, {1, 2}, opt);

    SECTION("one record per (image, sigma, seed, method), fully parameterized") {
        REQUIRE(report.runs.size() == 2 * 1 * 2 * 3);
        for (const RunRecord& r : report.runs) {
            CHECK(std::isfinite(r.psnr_unclipped));
            CHECK(std::isfinite(r.psnr_clipped));
            CHECK(std::isfinite(r.wall_ms));
            CHECK(r.image_crc32 != 0);
            if (r.method == "nlm") {
                CHECK(r.h == 15.0);  // h = sigma baseline
                CHECK(r.d == 4.0);
            } else if (r.method == "fnlm") {
                CHECK(r.l == 0.8 * 15.0);
                CHECK(r.r == 2.0);
            } else {
                CHECK(r.h == 0.6 * 15.0);
                CHECK(r.l == 0.8 * 15.0);
            }
        }
    }
    SECTION("re-running reproduces every PSNR bit for bit") {
        const DenoiseReport again =
            run_benchmark(corpus.string(), methods, {15.0}, {1, 2}, opt);
        REQUIRE(again.runs.size() == report.runs.size());
        for (std::size_t i = 0; i < report.runs.size(); ++i) {
            CHECK(again.runs[i].psnr_unclipped == report.runs[i].psnr_unclipped);
            CHECK(again.runs[i].psnr_clipped == report.runs[i].psnr_clipped);
        }
    }
    SECTION("csv file round trip preserves the PSNRs") {
        const fs::path csv = corpus / "report.csv";
        write_csv(report, csv.string());
        const DenoiseReport back = read_csv_file(csv.string());
        REQUIRE(back.runs.size() == report.runs.size());
        for (std::size_t i = 0; i < report.runs.size(); ++i)
            CHECK(back.runs[i].psnr_unclipped == report.runs[i].psnr_unclipped);
    }
    SECTION("summary table lists images and methods") {
        const std::string table = format_table(report, methods);
        CHECK(table.find("scene_a") != std::string::npos);
        CHECK(table.find("scene_b") != std::string::npos);
        CHECK(table.find("sfnlm") != std::string::npos);
        CHECK(table.find("sigma=15") != std::string::npos);
    }
    SECTION("aggregate means average over seeds") {
        const double m = report.mean_psnr("scene_a", "nlm", 15.0);
        double expect = 0.0;
        int n = 0;
        for (const RunRecord& r : report.runs)
            if (r.image_id == "scene_a" && r.method == "nlm") {
                expect += r.psnr_unclipped;
                ++n;
            }
        REQUIRE(n == 2);
        CHECK(m == Catch::Approx(expect / 2).margin(1e-12));
    }
}

TEST_CASE("benchmark edge cases") {
    SECTION("empty corpus yields zero rows and an explicit note") {
        const fs::path corpus = fresh_dir("sfnlm_empty_corpus");
        const DenoiseReport report = run_benchmark(corpus.string(), {"nlm"}, {20.0}, {1});
        CHECK(report.runs.empty());
        REQUIRE_FALSE(report.warnings.empty());
        CHECK(report.warnings.back().find("no images found") != std::string::npos);
    }
    SECTION("missing explicit image is skipped with a warning") {
        const fs::path corpus = fresh_dir("sfnlm_missing_corpus");
        write_image((corpus / "present.pgm").string(), test_scene(16, 16, 0.2));
        BenchOptions opt;
        opt.images = {"present.pgm", "absent.pgm"};
        const DenoiseReport report = run_benchmark(corpus.string(), {"nlm"}, {10.0}, {1}, opt);
        CHECK(report.runs.size() == 1);
        REQUIRE(report.warnings.size() == 1);
        CHECK(report.warnings[0].find("absent.pgm") != std::string::npos);
    }
    SECTION("unknown method is an error") {
        REQUIRE_THROWS_AS(run_benchmark("/nonexistent", {"bm3d"}, {20.0}, {1}),
                          std::invalid_argument);
    }
}

TEST_CASE("house experiment machinery") {
    const fs::path dir = fresh_dir("sfnlm_house");
    const fs::path image = dir / "toy.pgm";
    write_image(image.string(), test_scene(40, 40, 0.7));

    BenchOptions opt;
    opt.threads = 2;
    const HouseResult res =
        run_house_experiment(image.string(), 10.0, 1, (dir / "out").string(), opt);

    CHECK(std::isfinite(res.psnr_noisy));
    CHECK(std::isfinite(res.psnr_nlm));
    CHECK(std::isfinite(res.psnr_nlm_mild));
    CHECK(std::isfinite(res.psnr_fnlm));
    CHECK(std::isfinite(res.psnr_sfnlm));
    CHECK(res.gain == Catch::Approx(res.psnr_sfnlm - res.psnr_nlm));
    REQUIRE(res.report.runs.size() == 4);
    for (const char* name : {"toy_noisy.pgm", "toy_nlm.pgm", "toy_fnlm.pgm", "toy_sfnlm.pgm"})
        CHECK(fs::exists(dir / "out" / name));
    // denoising beat the noisy input on this scene
    CHECK(res.psnr_sfnlm > res.psnr_noisy);
}
