// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/render/image.h"

#include <png.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "drc/core/binary_io.h"
#include "drc/core/errors.h"

namespace drc {

std::vector<std::uint8_t> encode_pfm(const Image &img) {
    const std::string header =
        "PF\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t row_bytes = static_cast<std::size_t>(img.width) * 3 * sizeof(float);
    out.resize(header.size() + row_bytes * img.height);
    std::uint8_t *dst = out.data() + header.size();
    for (int y = img.height - 1; y >= 0; --y, dst += row_bytes)
        std::memcpy(dst, &img.data[static_cast<std::size_t>(y) * img.width * 3], row_bytes);
    return out;
}

Image decode_pfm(const std::vector<std::uint8_t> &bytes) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
        return std::string(bytes.begin() + start, bytes.begin() + pos);
    };
    if (token() != "PF") throw FormatError("not an RGB PFM file", 0);
    int w = 0, h = 0;
    double scale = 0;
    try {
        w = std::stoi(token());
        h = std::stoi(token());
        scale = std::stod(token());
    } catch (const std::exception &) {
        throw FormatError("malformed PFM header", pos);
    }
    if (w <= 0 || h <= 0) throw FormatError("PFM dimensions must be positive", pos);
    if (scale >= 0) throw FormatError("big-endian PFM is not supported", pos);
    ++pos;  // single whitespace after the scale
    Image img(w, h);
    const std::size_t row_bytes = static_cast<std::size_t>(w) * 3 * sizeof(float);
    if (bytes.size() < pos + row_bytes * h) throw FormatError("truncated PFM data", bytes.size());
    const std::uint8_t *src = bytes.data() + pos;
    for (int y = h - 1; y >= 0; --y, src += row_bytes)
        std::memcpy(&img.data[static_cast<std::size_t>(y) * w * 3], src, row_bytes);
    return img;
}

std::vector<std::uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path);
}

void write_pfm(const std::string &path, const Image &img) { write_file(path, encode_pfm(img)); }
Image read_pfm(const std::string &path) { return decode_pfm(read_file(path)); }

Image8 to_display(const Image &img, double exposure) {
    Image8 out{img.width, img.height, std::vector<std::uint8_t>(img.data.size())};
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::max(0.0, img.data[i] * exposure);
        const double g = std::pow(std::min(v, 1.0), 1.0 / 2.2);
        out.data[i] = static_cast<std::uint8_t>(std::lround(g * 255.0));
    }
    return out;
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t len) {
    auto *buf = static_cast<std::vector<std::uint8_t> *>(png_get_io_ptr(png));
    buf->insert(buf->end(), data, data + len);
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image8 &img) {
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_append, nullptr);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_ALL_FILTERS);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.data[static_cast<std::size_t>(y) * img.width * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void write_png(const std::string &path, const Image8 &img) { write_file(path, encode_png(img)); }

}  // namespace drc
