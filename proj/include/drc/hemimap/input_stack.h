// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "drc/core/scene.h"
#include "drc/hemimap/hemimap.h"
#include "drc/render/integrators.h"
#include "drc/render/sampler.h"

namespace drc {

inline constexpr double kRadianceScaleFloor = 1e-3;

// Network input at one surface point: normalized radiance, normals and
// normalized distance, with the scales that undo the normalization.
struct InputStack {
    HemiMap radiance{3};
    HemiMap normals{3};
    HemiMap distance{1};
    float s_r = 1.f;
    float s_d = 1.f;
    Frame frame;

    // The 7 channels in network order: radiance RGB, normal XYZ, distance.
    std::vector<float> channels() const;
};

struct MapRenderOptions {
    SamplerKind sampler = SamplerKind::independent;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    PathOptions path;
};

// Traces one ray per texel from `position` and fills all three maps. Normals
// are expressed in `frame` and face the point; misses leave zero normal and
// distance. Emission seen directly by a map ray is excluded.
InputStack render_input_stack(const Scene &scene, const Vec3 &position, const Frame &frame,
                              const MapRenderOptions &opt, IntegratorStats *stats = nullptr);

// Average of `spp` paths per texel, in physical units, with the same
// exclusion of directly visible emission.
HemiMap render_radiance_map(const Scene &scene, const Vec3 &position, const Frame &frame, int spp,
                            const MapRenderOptions &opt, IntegratorStats *stats = nullptr);

// Scale that brings the mean luminance of `map` to about one.
float radiance_scale(const HemiMap &map);
HemiMap scale_map(const HemiMap &map, float factor);
HemiMap normalize_map(const HemiMap &map, float scale);
HemiMap denormalize_map(const HemiMap &map, float scale);

}  // namespace drc
