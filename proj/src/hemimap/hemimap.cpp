// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/hemimap/hemimap.h"

#include <algorithm>
#include <cmath>

#include "drc/core/errors.h"

namespace drc {

double texel_theta(int v) { return 0.5 * kPi * (v + 0.5) / kMapRes; }
double texel_phi(int u) { return 2.0 * kPi * (u + 0.5) / kMapRes; }

double texel_solid_angle(int v) {
    return (2.0 * kPi / kMapRes) * (kPi / (2.0 * kMapRes)) * std::sin(texel_theta(v));
}

Vec3 texel_to_direction(int u, int v, const Frame &frame) {
    if (u < 0 || u >= kMapRes || v < 0 || v >= kMapRes)
        throw ContractError("texel (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") outside the 32x32 map");
    const double theta = texel_theta(v), phi = texel_phi(u);
    const double s = std::sin(theta);
    return normalize(frame.to_world({s * std::cos(phi), s * std::sin(phi), std::cos(theta)}));
}

std::optional<std::pair<int, int>> direction_to_texel(const Vec3 &dir, const Frame &frame) {
    const Vec3 local = frame.to_local(dir);
    if (local.z < 0) return std::nullopt;
    const double theta = std::acos(std::min(1.0, local.z));
    double phi = std::atan2(local.y, local.x);
    if (phi < 0) phi += 2.0 * kPi;
    const int u = std::clamp(static_cast<int>(std::floor(phi / (2.0 * kPi) * kMapRes)), 0, kMapRes - 1);
    const int v = std::clamp(static_cast<int>(std::floor(theta / (0.5 * kPi) * kMapRes)), 0, kMapRes - 1);
    return std::pair{u, v};
}

Rgb map_quadrature(const HemiMap &map) {
    Rgb sum;
    for (int v = 0; v < kMapRes; ++v) {
        const double w = texel_solid_angle(v);
        for (int u = 0; u < kMapRes; ++u)
            for (int c = 0; c < std::min(3, map.channels); ++c) sum[c] += map.at(c, v, u) * w;
    }
    return sum;
}

}  // namespace drc
