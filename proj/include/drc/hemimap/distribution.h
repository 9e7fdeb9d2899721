// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "drc/hemimap/hemimap.h"

namespace drc {

inline constexpr double kDistributionFloor = 1e-8;

// Piecewise-constant distribution over the texels of a radiance map, with
// texel weight luminance * sin(theta) plus a small floor.
class MapDistribution {
  public:
    explicit MapDistribution(const HemiMap &radiance);

    struct Texel {
        int u = 0;
        int v = 0;
        double prob = 0;
    };
    // Row from the marginal, then column from that row's conditional.
    Texel sample(Vec2 u) const;
    double prob(int u, int v) const { return prob_[v * kMapRes + u]; }
    // Solid-angle density of directions inside texel (u, v).
    double pdf_solid_angle(int u, int v) const { return prob(u, v) / texel_solid_angle(v); }
    double pdf_direction(const Vec3 &dir, const Frame &frame) const;

  private:
    std::array<double, kMapTexels> prob_{};
    std::array<double, kMapRes + 1> row_cdf_{};
    std::array<double, kMapRes * (kMapRes + 1)> col_cdf_{};
};

struct MapSample {
    Vec3 dir;
    double pdf = 0;  // solid angle
    Rgb radiance;
    int u = 0;
    int v = 0;
};

// Draws a texel center direction; radiance is the texel value times `scale`.
MapSample sample_map(const MapDistribution &dist, const HemiMap &radmap, double scale, Vec2 u);

}  // namespace drc
