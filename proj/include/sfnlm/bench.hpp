#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfnlm/io.hpp"
#include "sfnlm/metrics.hpp"
#include "sfnlm/pipeline.hpp"

namespace sfnlm {

// One denoising run. Every record carries the complete parameter set that
// produced it; fields that do not apply to the method are NaN and serialize
// as empty CSV cells.
struct RunRecord {
    std::string image_id;
    std::string method;  // "nlm", "fnlm" or "sfnlm"
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double h = std::nan("");
    double d = std::nan("");
    double a = std::nan("");
    int patch_radius = 3;
    double l = std::nan("");
    double r = std::nan("");
    double psnr_unclipped = std::nan("");
    double psnr_clipped = std::nan("");
    double wall_ms = std::nan("");
    std::uint32_t image_crc32 = 0;
    std::string note;
};

struct DenoiseReport {
    std::vector<RunRecord> runs;
    std::vector<std::string> warnings;

    // Mean unclipped PSNR over seeds for one (image, method, sigma) cell.
    double mean_psnr(const std::string& image_id, const std::string& method,
                     double sigma) const {
        double sum = 0.0;
        int count = 0;
        for (const RunRecord& rec : runs) {
            if (rec.image_id == image_id && rec.method == method && rec.sigma == sigma &&
                std::isfinite(rec.psnr_unclipped)) {
                sum += rec.psnr_unclipped;
                ++count;
            }
        }
        if (count == 0) return std::nan("");
        return sum / count;
    }
};

namespace detail {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    if (s.empty()) return std::nan("");
    return std::stod(s);
}

inline std::string sanitize_csv_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

constexpr const char* kCsvSchema = "# sfnlm-bench-v1";
constexpr const char* kCsvHeader =
    "image,method,sigma,seed,h,d,a,patch_radius,l,r,"
    "psnr_unclipped,psnr_clipped,wall_ms,image_crc32,note";

}  // namespace detail

// CSV serialization; the schema line and column set are versioned, and a
// written report parses back losslessly (timings included).
inline void write_csv(const DenoiseReport& report, std::ostream& out) {
    out << detail::kCsvSchema << "\n";
    for (const std::string& w : report.warnings)
        out << "# warning: " << detail::sanitize_csv_field(w) << "\n";
    out << detail::kCsvHeader << "\n";
    for (const RunRecord& r : report.runs) {
        out << detail::sanitize_csv_field(r.image_id) << ',' << r.method << ','
            << detail::format_double(r.sigma) << ',' << r.seed << ','
            << detail::format_double(r.h) << ',' << detail::format_double(r.d) << ','
            << detail::format_double(r.a) << ',' << r.patch_radius << ','
            << detail::format_double(r.l) << ',' << detail::format_double(r.r) << ','
            << detail::format_double(r.psnr_unclipped) << ','
            << detail::format_double(r.psnr_clipped) << ','
            << detail::format_double(r.wall_ms) << ',' << r.image_crc32 << ','
            << detail::sanitize_csv_field(r.note) << "\n";
    }
}

inline void write_csv(const DenoiseReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report for writing: " + path);
    write_csv(report, out);
}

inline DenoiseReport read_csv(std::istream& in) {
    DenoiseReport report;
    std::string line;
    bool seen_schema = false, seen_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == detail::kCsvSchema) seen_schema = true;
            const std::string warn_prefix = "# warning: ";
            if (line.rfind(warn_prefix, 0) == 0)
                report.warnings.push_back(line.substr(warn_prefix.size()));
            continue;
        }
        if (!seen_header) {
            if (line != detail::kCsvHeader)
                throw std::runtime_error("unsupported report header: " + line);
            seen_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 15) fields.emplace_back();
        RunRecord r;
        r.image_id = fields[0];
        r.method = fields[1];
        r.sigma = detail::parse_double(fields[2]);
        r.seed = fields[3].empty() ? 0 : std::stoull(fields[3]);
        r.h = detail::parse_double(fields[4]);
        r.d = detail::parse_double(fields[5]);
        r.a = detail::parse_double(fields[6]);
        r.patch_radius = fields[7].empty() ? 3 : std::stoi(fields[7]);
        r.l = detail::parse_double(fields[8]);
        r.r = detail::parse_double(fields[9]);
        r.psnr_unclipped = detail::parse_double(fields[10]);
        r.psnr_clipped = detail::parse_double(fields[11]);
        r.wall_ms = detail::parse_double(fields[12]);
        r.image_crc32 = fields[13].empty() ? 0 : static_cast<std::uint32_t>(std::stoul(fields[13]));
        r.note = fields[14];
        report.runs.push_back(std::move(r));
    }
    if (!seen_schema || !seen_header)
        throw std::runtime_error("not a sfnlm benchmark report (missing schema/header)");
    return report;
}

inline DenoiseReport read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    return read_csv(in);
}

// Human-readable summary: one block per sigma, images as rows and methods as
// columns, cells holding the mean unclipped PSNR over seeds.
inline std::string format_table(const DenoiseReport& report,
                                const std::vector<std::string>& methods) {
    std::vector<double> sigmas;
    std::vector<std::string> images;
    for (const RunRecord& r : report.runs) {
        if (!std::isfinite(r.psnr_unclipped)) continue;
        if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end())
            sigmas.push_back(r.sigma);
        if (std::find(images.begin(), images.end(), r.image_id) == images.end())
            images.push_back(r.image_id);
    }
    std::ostringstream out;
    if (images.empty()) {
        out << "no runs to summarize\n";
        for (const std::string& w : report.warnings) out << "warning: " << w << "\n";
        return out.str();
    }
    std::size_t name_width = 8;
    for (const std::string& id : images) name_width = std::max(name_width, id.size() + 2);
    for (double sigma : sigmas) {
        out << "Mean PSNR (dB), sigma=" << detail::format_double(sigma) << "\n";
        out << std::string(name_width, ' ');
        for (const std::string& m : methods) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%9s", m.c_str());
            out << buf;
        }
        out << "\n";
        for (const std::string& id : images) {
            out << id << std::string(name_width - id.size(), ' ');
            for (const std::string& m : methods) {
                const double v = report.mean_psnr(id, m, sigma);
                char buf[16];
                if (std::isnan(v))
                    std::snprintf(buf, sizeof(buf), "%9s", "-");
                else
                    std::snprintf(buf, sizeof(buf), "%9.2f", v);
                out << buf;
            }
            out << "\n";
        }
    }
    for (const std::string& w : report.warnings) out << "warning: " << w << "\n";
    return out.str();
}

struct BenchOptions {
    double l_factor = 0.8;
    double r = 2.0;
    double h_factor = 0.6;     // spatial stage of sfnlm
    double nlm_h_factor = 1.0; // standalone nlm baseline (h = sigma)
    double d = 4.0;
    double a = 1.0;
    int patch_radius = 3;
    int threads = 0;
    std::vector<std::string> images;  // explicit file names; empty = discover
};

namespace detail {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

inline Image run_method(const Image& noisy, const std::string& method, double sigma,
                        const BenchOptions& opt, RunRecord& rec) {
    if (method == "nlm") {
        SpatialParams p{opt.nlm_h_factor * sigma, opt.d, opt.patch_radius, opt.a};
        rec.h = p.h;
        rec.d = p.d;
        rec.a = p.a;
        return nlm_filter(noisy, p, opt.threads);
    }
    SfnlmConfig cfg;
    cfg.sigma = sigma;
    cfg.l_factor = opt.l_factor;
    cfg.r = opt.r;
    cfg.h_factor = opt.h_factor;
    cfg.d = opt.d;
    cfg.a = opt.a;
    cfg.patch_radius = opt.patch_radius;
    cfg.threads = opt.threads;
    if (method == "fnlm") {
        rec.l = cfg.l_factor * sigma;
        rec.r = cfg.r;
        rec.a = cfg.a;
        return fnlm_denoise(noisy, cfg);
    }
    if (method == "sfnlm") {
        rec.h = cfg.h_factor * sigma;
        rec.d = cfg.d;
        rec.a = cfg.a;
        rec.l = cfg.l_factor * sigma;
        rec.r = cfg.r;
        return sfnlm_denoise(noisy, cfg);
    }
    throw std::invalid_argument("unknown method: " + method);
}

}  // namespace detail

// Runs every (image, method, sigma, seed) combination over the corpus
// directory and collects PSNRs. Missing or unreadable images are skipped
// with a warning in the report rather than aborting the sweep.
inline DenoiseReport run_benchmark(const std::string& corpus_dir,
                                   const std::vector<std::string>& methods,
                                   const std::vector<double>& sigmas,
                                   const std::vector<std::uint64_t>& seeds,
                                   const BenchOptions& opt = {}) {
    namespace fs = std::filesystem;
    for (const std::string& m : methods)
        if (m != "nlm" && m != "fnlm" && m != "sfnlm")
            throw std::invalid_argument("unknown method: " + m);

    DenoiseReport report;
    std::vector<std::string> files = opt.images;
    if (files.empty()) {
        if (fs::is_directory(corpus_dir)) {
            for (const auto& e : fs::directory_iterator(corpus_dir)) {
                if (!e.is_regular_file()) continue;
                const std::string name = e.path().filename().string();
                if (detail::has_suffix(name, ".pgm") || detail::has_suffix(name, ".png"))
                    files.push_back(name);
            }
            std::sort(files.begin(), files.end());
        } else {
            report.warnings.push_back("corpus directory not found: " + corpus_dir);
        }
    }
    if (files.empty()) {
        report.warnings.push_back("no images found in corpus: " + corpus_dir);
        return report;
    }

    for (const std::string& name : files) {
        const fs::path path = fs::path(corpus_dir) / name;
        Image clean;
        try {
            clean = read_image(path.string());
        } catch (const std::exception& err) {
            report.warnings.push_back("skipped " + name + ": " + err.what());
            continue;
        }
        const std::uint32_t crc = image_crc32(clean);
        const std::string id = fs::path(name).stem().string();
        for (double sigma : sigmas) {
            for (std::uint64_t seed : seeds) {
                const Image noisy = add_gaussian_noise(clean, NoiseModel{sigma, seed});
                for (const std::string& method : methods) {
                    RunRecord rec;
                    rec.image_id = id;
                    rec.method = method;
                    rec.sigma = sigma;
                    rec.seed = seed;
                    rec.patch_radius = opt.patch_radius;
                    rec.image_crc32 = crc;
                    detail::Timer timer;
                    const Image denoised = detail::run_method(noisy, method, sigma, opt, rec);
                    rec.wall_ms = timer.elapsed_ms();
                    rec.psnr_unclipped = psnr(clean, denoised);
                    rec.psnr_clipped = psnr(clean, clamped(denoised));
                    report.runs.push_back(std::move(rec));
                }
            }
        }
    }
    return report;
}

// The House protocol: one noisy realization at the given sigma, the spatial
// baseline at h = sigma, the two-stage pipeline, and the materialized
// frequency intermediate. Emits the four images and checks the headline
// claim that the pipeline clearly beats the spatial baseline.
struct HouseResult {
    DenoiseReport report;
    double psnr_noisy = 0.0;
    double psnr_nlm = 0.0;       // h = sigma baseline
    double psnr_nlm_mild = 0.0;  // h = 0.6 sigma, reported for comparison
    double psnr_fnlm = 0.0;
    double psnr_sfnlm = 0.0;
    double gain = 0.0;           // psnr_sfnlm - psnr_nlm
    bool gain_ok = false;        // gain >= 0.7 dB
};

inline HouseResult run_house_experiment(const std::string& image_path, double sigma,
                                        std::uint64_t seed, const std::string& out_dir,
                                        const BenchOptions& opt = {}) {
    namespace fs = std::filesystem;
    const Image clean = read_image(image_path);
    const std::uint32_t crc = image_crc32(clean);
    const std::string id = fs::path(image_path).stem().string();
    fs::create_directories(out_dir);

    HouseResult result;
    const Image noisy = add_gaussian_noise(clean, NoiseModel{sigma, seed});
    result.psnr_noisy = psnr(clean, noisy);

    SfnlmConfig cfg;
    cfg.sigma = sigma;
    cfg.l_factor = opt.l_factor;
    cfg.r = opt.r;
    cfg.h_factor = opt.h_factor;
    cfg.d = opt.d;
    cfg.a = opt.a;
    cfg.patch_radius = opt.patch_radius;
    cfg.threads = opt.threads;

    auto record = [&](const std::string& method, const Image& img, double wall_ms,
                      double h, double l) {
        RunRecord rec;
        rec.image_id = id;
        rec.method = method;
        rec.sigma = sigma;
        rec.seed = seed;
        rec.patch_radius = opt.patch_radius;
        rec.a = opt.a;
        rec.d = opt.d;
        rec.h = h;
        rec.l = l;
        rec.r = std::isnan(l) ? std::nan("") : opt.r;
        rec.image_crc32 = crc;
        rec.wall_ms = wall_ms;
        rec.psnr_unclipped = psnr(clean, img);
        rec.psnr_clipped = psnr(clean, clamped(img));
        result.report.runs.push_back(rec);
        return rec.psnr_unclipped;
    };

    detail::Timer t_nlm;
    const Image den_nlm =
        nlm_filter(noisy, SpatialParams{opt.nlm_h_factor * sigma, opt.d, opt.patch_radius, opt.a},
                   opt.threads);
    result.psnr_nlm = record("nlm", den_nlm, t_nlm.elapsed_ms(), opt.nlm_h_factor * sigma,
                             std::nan(""));

    detail::Timer t_mild;
    const Image den_mild =
        nlm_filter(noisy, SpatialParams{opt.h_factor * sigma, opt.d, opt.patch_radius, opt.a},
                   opt.threads);
    result.psnr_nlm_mild =
        record("nlm", den_mild, t_mild.elapsed_ms(), opt.h_factor * sigma, std::nan(""));

    detail::Timer t_pipe;
    const SfnlmStages stages = sfnlm_denoise_stages(noisy, cfg);
    const double pipe_ms = t_pipe.elapsed_ms();
    result.psnr_fnlm = record("fnlm", stages.frequency, std::nan(""), std::nan(""),
                              cfg.l_factor * sigma);
    result.psnr_sfnlm =
        record("sfnlm", stages.final, pipe_ms, cfg.h_factor * sigma, cfg.l_factor * sigma);

    write_image((fs::path(out_dir) / (id + "_noisy.pgm")).string(), noisy);
    write_image((fs::path(out_dir) / (id + "_nlm.pgm")).string(), den_nlm);
    write_image((fs::path(out_dir) / (id + "_fnlm.pgm")).string(), stages.frequency);
    write_image((fs::path(out_dir) / (id + "_sfnlm.pgm")).string(), stages.final);

    result.gain = result.psnr_sfnlm - result.psnr_nlm;
    result.gain_ok = result.gain >= 0.7;
    return result;
}

}  // namespace sfnlm
