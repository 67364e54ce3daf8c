#pragma once

#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfnlm/image.hpp"

namespace sfnlm {

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Rounds half-up and clamps to [0,255]; the only place samples are quantized.
inline std::uint8_t quantize_sample(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("write_image: non-finite sample");
    const double q = std::floor(v + 0.5);
    if (q <= 0.0) return 0;
    if (q >= 255.0) return 255;
    return static_cast<std::uint8_t>(q);
}

// ---- PGM (P5, maxval <= 255) ----
// Byte layout, documented in the README: the ASCII header "P5", width,
// height and maxval separated by whitespace ('#' starts a comment running to
// end of line), one whitespace byte, then width*height raw sample bytes in
// row-major order.

inline std::size_t pgm_next_token(const std::vector<std::uint8_t>& b, std::size_t pos,
                                  std::string& token) {
    for (;;) {
        while (pos < b.size() && std::isspace(b[pos])) ++pos;
        if (pos < b.size() && b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    token.clear();
    while (pos < b.size() && !std::isspace(b[pos])) token.push_back(static_cast<char>(b[pos++]));
    if (token.empty()) throw std::runtime_error("malformed PGM header: unexpected end of file");
    return pos;
}

inline long pgm_parse_int(const std::string& token, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("malformed PGM header: bad ") + what);
    }
    if (used != token.size() || value <= 0)
        throw std::runtime_error(std::string("malformed PGM header: bad ") + what);
    return value;
}

inline Image decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    std::string token;
    std::size_t pos = pgm_next_token(bytes, 0, token);
    if (token != "P5")
        throw std::runtime_error("unsupported PGM variant '" + token + "' in " + path +
                                 " (only binary P5 is supported)");
    pos = pgm_next_token(bytes, pos, token);
    const long width = pgm_parse_int(token, "width");
    pos = pgm_next_token(bytes, pos, token);
    const long height = pgm_parse_int(token, "height");
    pos = pgm_next_token(bytes, pos, token);
    const long maxval = pgm_parse_int(token, "maxval");
    if (maxval > 255)
        throw std::runtime_error("unsupported PGM maxval " + std::to_string(maxval) + " in " +
                                 path + " (only 8-bit samples are supported)");
    ++pos;  // the single whitespace byte after maxval
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pos + count > bytes.size())
        throw std::runtime_error("truncated PGM raster in " + path);
    Image img(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < count; ++i)
        img.pixels[i] = static_cast<double>(bytes[pos + i]);
    return img;
}

inline std::vector<std::uint8_t> encode_pgm(const Image& img) {
    const std::string header = "P5\n" + std::to_string(img.width) + " " +
                               std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.size());
    for (double v : img.pixels) out.push_back(quantize_sample(v));
    return out;
}

// ---- PNG (8-bit grayscale, non-interlaced) ----

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

inline std::uint32_t read_u32_be(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline int paeth_predictor(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

inline Image decode_png(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
        throw std::runtime_error("not a PNG file: " + path);

    std::size_t pos = 8;
    bool seen_ihdr = false, seen_iend = false;
    std::uint32_t width = 0, height = 0;
    std::vector<std::uint8_t> idat;

    while (pos + 8 <= bytes.size() && !seen_iend) {
        const std::uint32_t length = read_u32_be(&bytes[pos]);
        if (pos + 12 + length > bytes.size())
            throw std::runtime_error("truncated PNG chunk in " + path);
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* data = &bytes[pos + 8];
        const std::uint32_t stored_crc = read_u32_be(&bytes[pos + 8 + length]);
        const std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(crc32(0L, &bytes[pos + 4], 4), data, length));
        if (crc != stored_crc)
            throw std::runtime_error("PNG chunk CRC mismatch in " + path);

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (length != 13) throw std::runtime_error("malformed PNG IHDR in " + path);
            width = read_u32_be(data);
            height = read_u32_be(data + 4);
            const int bit_depth = data[8], color_type = data[9];
            const int compression = data[10], filter = data[11], interlace = data[12];
            if (color_type != 0)
                throw std::runtime_error("unsupported PNG color type " +
                                         std::to_string(color_type) + " in " + path +
                                         " (only 8-bit grayscale is supported)");
            if (bit_depth != 8)
                throw std::runtime_error("unsupported PNG bit depth " +
                                         std::to_string(bit_depth) + " in " + path +
                                         " (only 8-bit grayscale is supported)");
            if (compression != 0 || filter != 0)
                throw std::runtime_error("malformed PNG IHDR in " + path);
            if (interlace != 0)
                throw std::runtime_error("interlaced PNG is not supported: " + path);
            if (width == 0 || height == 0)
                throw std::runtime_error("malformed PNG dimensions in " + path);
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!seen_ihdr) throw std::runtime_error("PNG IDAT before IHDR in " + path);
            idat.insert(idat.end(), data, data + length);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        // Ancillary chunks are skipped.
        pos += 12 + length;
    }
    if (!seen_ihdr || !seen_iend || idat.empty())
        throw std::runtime_error("malformed PNG stream in " + path);

    const std::size_t stride = static_cast<std::size_t>(width) + 1;
    std::vector<std::uint8_t> raw(stride * height);
    uLongf raw_size = static_cast<uLongf>(raw.size());
    const int zrc = uncompress(raw.data(), &raw_size, idat.data(),
                               static_cast<uLong>(idat.size()));
    if (zrc != Z_OK || raw_size != raw.size())
        throw std::runtime_error("PNG inflate failed in " + path);

    Image img(static_cast<int>(width), static_cast<int>(height));
    std::vector<std::uint8_t> prev(width, 0), cur(width, 0);
    for (std::uint32_t y = 0; y < height; ++y) {
        const std::uint8_t* row = &raw[static_cast<std::size_t>(y) * stride];
        const int filter_type = row[0];
        for (std::uint32_t x = 0; x < width; ++x) {
            const int rv = row[1 + x];
            const int left = x > 0 ? cur[x - 1] : 0;
            const int up = prev[x];
            const int up_left = x > 0 ? prev[x - 1] : 0;
            int value = 0;
            switch (filter_type) {
                case 0: value = rv; break;
                case 1: value = rv + left; break;
                case 2: value = rv + up; break;
                case 3: value = rv + (left + up) / 2; break;
                case 4: value = rv + paeth_predictor(left, up, up_left); break;
                default:
                    throw std::runtime_error("unsupported PNG row filter " +
                                             std::to_string(filter_type) + " in " + path);
            }
            cur[x] = static_cast<std::uint8_t>(value & 0xFF);
            img.at(static_cast<int>(x), static_cast<int>(y)) = static_cast<double>(cur[x]);
        }
        std::swap(prev, cur);
    }
    return img;
}

inline void append_png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                             const std::vector<std::uint8_t>& data) {
    append_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uLong crc = crc32(0L, &out[type_pos], 4);
    if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
    append_u32_be(out, static_cast<std::uint32_t>(crc));
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
    std::vector<std::uint8_t> out(kPngSignature, kPngSignature + 8);

    std::vector<std::uint8_t> ihdr;
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // color type: grayscale
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    append_png_chunk(out, "IHDR", ihdr);

    std::vector<std::uint8_t> raw;
    raw.reserve((static_cast<std::size_t>(img.width) + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);  // filter type: none
        for (int x = 0; x < img.width; ++x) raw.push_back(quantize_sample(img.at(x, y)));
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  Z_BEST_COMPRESSION) != Z_OK)
        throw std::runtime_error("PNG deflate failed");
    compressed.resize(bound);
    append_png_chunk(out, "IDAT", compressed);
    append_png_chunk(out, "IEND", {});
    return out;
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    for (std::size_t i = 0; i < suffix.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(s[s.size() - suffix.size() + i]);
        if (std::tolower(c) != suffix[i]) return false;
    }
    return true;
}

}  // namespace detail

// Reads an 8-bit grayscale PGM (binary P5) or PNG; the format is detected
// from the file content. Sample bytes map to reals without scaling.
inline Image read_image(const std::string& path) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), detail::kPngSignature, 8) == 0)
        return detail::decode_png(bytes, path);
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        if (bytes[1] == '5') return detail::decode_pgm(bytes, path);
        if (bytes[1] == '6' || bytes[1] == '3')
            throw std::runtime_error("color PPM input is not supported: " + path);
        if (bytes[1] == '2')
            throw std::runtime_error("ASCII PGM (P2) is not supported, use binary P5: " + path);
    }
    throw std::runtime_error("unsupported image format: " + path);
}

// Writes PGM or PNG depending on the file extension; samples are rounded
// half-up and clamped to [0,255].
inline void write_image(const std::string& path, const Image& img) {
    require_valid(img, "write_image");
    if (detail::has_suffix(path, ".pgm"))
        detail::write_file_bytes(path, detail::encode_pgm(img));
    else if (detail::has_suffix(path, ".png"))
        detail::write_file_bytes(path, detail::encode_png(img));
    else
        throw std::runtime_error("unsupported output extension (use .pgm or .png): " + path);
}

// CRC-32 of the quantized raster; recorded in benchmark reports so runs can
// be traced back to the exact input image.
inline std::uint32_t image_crc32(const Image& img) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(img.size());
    for (double v : img.pixels) bytes.push_back(detail::quantize_sample(v));
    return static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

}  // namespace sfnlm
