// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drc/core/geometry.h"

namespace drc {

// HDR RGB raster, rows top to bottom, interleaved floats.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.f) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    Rgb at(int x, int y) const {
        const float *p = &data[(static_cast<std::size_t>(y) * width + x) * 3];
        return {p[0], p[1], p[2]};
    }
    void set(int x, int y, const Rgb &c) {
        float *p = &data[(static_cast<std::size_t>(y) * width + x) * 3];
        p[0] = static_cast<float>(c.r);
        p[1] = static_cast<float>(c.g);
        p[2] = static_cast<float>(c.b);
    }
    bool operator==(const Image &) const = default;
};

// 8-bit RGB raster, rows top to bottom.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
};

// Little-endian PFM ("PF", scale -1), scanlines stored bottom-up.
std::vector<std::uint8_t> encode_pfm(const Image &img);
Image decode_pfm(const std::vector<std::uint8_t> &bytes);
void write_pfm(const std::string &path, const Image &img);
Image read_pfm(const std::string &path);

// Exposure scaling, gamma 1/2.2 and clamping to 8 bits.
Image8 to_display(const Image &img, double exposure = 1.0);

// PNG with per-row adaptive filtering and deflate level 6.
std::vector<std::uint8_t> encode_png(const Image8 &img);
void write_png(const std::string &path, const Image8 &img);

std::vector<std::uint8_t> read_file(const std::string &path);
void write_file(const std::string &path, const std::vector<std::uint8_t> &bytes);

}  // namespace drc
