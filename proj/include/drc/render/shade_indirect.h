// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "drc/core/material.h"
#include "drc/hemimap/distribution.h"
#include "drc/hemimap/hemimap.h"
#include "drc/render/sampler.h"

namespace drc {

// Reflected radiance toward `wo` from a radiance map treated as a fully
// visible environment around the point. Half of `mis_samples` come from the
// map's distribution and half from the BSDF; the two are combined with the
// power heuristic. `radmap` holds physical radiance in its own frame, whose
// normal is the shading normal on the side of `wo`.
Rgb shade_indirect(const Material &m, const HemiMap &radmap, const Vec3 &wo, Sampler &sampler,
                   int mis_samples);
Rgb shade_indirect(const Material &m, const HemiMap &radmap, const MapDistribution &dist,
                   const Vec3 &wo, Sampler &sampler, int mis_samples);

}  // namespace drc
