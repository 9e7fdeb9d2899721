// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/hemimap/distribution.h"

#include <algorithm>
#include <cmath>

namespace drc {

namespace {

// Index i with cdf[i] <= x < cdf[i + 1], skipping empty intervals.
int find_interval(const double *cdf, int n, double x) {
    const double *it = std::upper_bound(cdf + 1, cdf + n + 1, x);
    int i = static_cast<int>(it - cdf) - 1;
    i = std::clamp(i, 0, n - 1);
    while (i > 0 && cdf[i + 1] <= cdf[i]) --i;
    return i;
}

}  // namespace

MapDistribution::MapDistribution(const HemiMap &radiance) {
    double total = 0;
    std::array<double, kMapTexels> w{};
    for (int v = 0; v < kMapRes; ++v) {
        const double s = std::sin(texel_theta(v));
        for (int u = 0; u < kMapRes; ++u) {
            const double lum = std::max(0.0, radiance.rgb(v, u).luminance());
            w[v * kMapRes + u] = lum * s + kDistributionFloor;
            total += w[v * kMapRes + u];
        }
    }
    for (int i = 0; i < kMapTexels; ++i) prob_[i] = w[i] / total;

    row_cdf_[0] = 0;
    for (int v = 0; v < kMapRes; ++v) {
        double row = 0;
        double *cdf = &col_cdf_[v * (kMapRes + 1)];
        cdf[0] = 0;
        for (int u = 0; u < kMapRes; ++u) {
            row += prob_[v * kMapRes + u];
            cdf[u + 1] = row;
        }
        for (int u = 1; u <= kMapRes; ++u) cdf[u] /= row;
        cdf[kMapRes] = 1.0;
        row_cdf_[v + 1] = row_cdf_[v] + row;
    }
    for (int v = 1; v <= kMapRes; ++v) row_cdf_[v] /= row_cdf_[kMapRes];
    row_cdf_[kMapRes] = 1.0;
}

MapDistribution::Texel MapDistribution::sample(Vec2 u) const {
    Texel t;
    t.v = find_interval(row_cdf_.data(), kMapRes, u.y);
    t.u = find_interval(&col_cdf_[t.v * (kMapRes + 1)], kMapRes, u.x);
    t.prob = prob(t.u, t.v);
    return t;
}

double MapDistribution::pdf_direction(const Vec3 &dir, const Frame &frame) const {
    const auto texel = direction_to_texel(dir, frame);
    if (!texel) return 0;
    return pdf_solid_angle(texel->first, texel->second);
}

MapSample sample_map(const MapDistribution &dist, const HemiMap &radmap, double scale, Vec2 u) {
    const MapDistribution::Texel t = dist.sample(u);
    MapSample s;
    s.u = t.u;
    s.v = t.v;
    s.dir = texel_to_direction(t.u, t.v, radmap.frame);
    s.pdf = t.prob / texel_solid_angle(t.v);
    s.radiance = radmap.rgb(t.v, t.u) * scale;
    return s;
}

}  // namespace drc
