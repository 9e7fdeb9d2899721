// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drc/core/frame.h"
#include "drc/core/geometry.h"

namespace drc {

inline constexpr int kMapRes = 32;
inline constexpr int kMapTexels = kMapRes * kMapRes;

// Hemispherical latitude-longitude raster. Column u spans azimuth, row v spans
// polar angle with row 0 next to the pole (the frame normal). Channel planes
// are stored one after another, each row-major.
struct HemiMap {
    int channels = 3;
    std::vector<float> data;
    Frame frame;

    HemiMap() : HemiMap(3) {}
    explicit HemiMap(int c, const Frame &f = Frame{})
        : channels(c), data(static_cast<std::size_t>(c) * kMapTexels, 0.f), frame(f) {}

    static std::size_t index(int c, int v, int u) {
        return (static_cast<std::size_t>(c) * kMapRes + v) * kMapRes + u;
    }
    float at(int c, int v, int u) const { return data[index(c, v, u)]; }
    float &at(int c, int v, int u) { return data[index(c, v, u)]; }
    Rgb rgb(int v, int u) const { return {at(0, v, u), at(1, v, u), at(2, v, u)}; }
    void set_rgb(int v, int u, const Rgb &c) {
        at(0, v, u) = static_cast<float>(c.r);
        at(1, v, u) = static_cast<float>(c.g);
        at(2, v, u) = static_cast<float>(c.b);
    }
};

// Polar and azimuth angles of a texel center.
double texel_theta(int v);
double texel_phi(int u);
// Solid angle covered by a texel in row v.
double texel_solid_angle(int v);

Vec3 texel_to_direction(int u, int v, const Frame &frame);
// (u, v) of the texel containing `dir`, or nothing below the hemisphere.
std::optional<std::pair<int, int>> direction_to_texel(const Vec3 &dir, const Frame &frame);

// Sum of value * solid angle over all texels, per channel 0..2.
Rgb map_quadrature(const HemiMap &map);

}  // namespace drc
