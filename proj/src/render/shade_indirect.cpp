// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/render/shade_indirect.h"

#include <algorithm>
#include <cmath>

#include "drc/core/errors.h"
#include "drc/render/integrators.h"

namespace drc {

namespace {

// Latin hypercube over the n draws of one technique.
class Strata {
  public:
    Strata(Sampler &sampler, int n)
        : sampler_(sampler), n_(static_cast<std::uint32_t>(n)),
          key_(static_cast<std::uint32_t>(sampler.next_1d() * 0x1p32)) {}

    Vec2 get(int i) {
        const auto j = permute_index(static_cast<std::uint32_t>(i), n_, key_);
        const Vec2 jitter = sampler_.next_2d();
        return {std::min((i + jitter.x) / n_, kOneMinusEpsilon),
                std::min((j + jitter.y) / n_, kOneMinusEpsilon)};
    }

  private:
    static constexpr double kOneMinusEpsilon = 0x1.fffffffffffffp-1;
    Sampler &sampler_;
    std::uint32_t n_;
    std::uint32_t key_;
};

}  // namespace

Rgb shade_indirect(const Material &m, const HemiMap &radmap, const Vec3 &wo, Sampler &sampler,
                   int mis_samples) {
    return shade_indirect(m, radmap, MapDistribution(radmap), wo, sampler, mis_samples);
}

Rgb shade_indirect(const Material &m, const HemiMap &radmap, const MapDistribution &dist,
                   const Vec3 &wo, Sampler &sampler, int mis_samples) {
    if (mis_samples < 2) throw ContractError("mis_samples must be at least 2");
    if (m.is_specular()) throw ContractError("shade_indirect on a specular material");
    const Frame &frame = radmap.frame;
    const int n_map = mis_samples / 2;
    const int n_bsdf = mis_samples - n_map;

    Rgb from_map;
    Strata map_strata(sampler, n_map);
    for (int i = 0; i < n_map; ++i) {
        const MapSample ms = sample_map(dist, radmap, 1.0, map_strata.get(i));
        if (ms.pdf <= 0 || ms.radiance.is_black()) continue;
        const double cos_i = dot(ms.dir, frame.n);
        const Rgb f = eval_bsdf(m, frame, wo, ms.dir);
        if (cos_i <= 0 || f.is_black()) continue;
        const double pb = pdf_bsdf(m, frame, wo, ms.dir);
        const double w = power_heuristic(n_map * ms.pdf, n_bsdf * pb);
        from_map += f * ms.radiance * (cos_i * w / ms.pdf);
    }

    Rgb from_bsdf;
    Strata bsdf_strata(sampler, n_bsdf);
    for (int i = 0; i < n_bsdf; ++i) {
        const BsdfSample bs = sample_bsdf(m, frame, wo, bsdf_strata.get(i));
        if (bs.pdf <= 0 || bs.weight.is_black()) continue;
        const auto texel = direction_to_texel(bs.wi, frame);
        if (!texel) continue;
        const Rgb radiance = radmap.rgb(texel->second, texel->first);
        if (radiance.is_black()) continue;
        const double pm = dist.pdf_solid_angle(texel->first, texel->second);
        const double w = power_heuristic(n_bsdf * bs.pdf, n_map * pm);
        from_bsdf += bs.weight * radiance * w;
    }
    return from_map / n_map + from_bsdf / n_bsdf;
}

}  // namespace drc
