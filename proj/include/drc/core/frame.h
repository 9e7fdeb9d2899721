// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "drc/core/geometry.h"

namespace drc {

// Right-handed orthonormal basis with t x b = n.
struct Frame {
    Vec3 t{1, 0, 0};
    Vec3 b{0, 1, 0};
    Vec3 n{0, 0, 1};

    Vec3 to_local(const Vec3 &v) const { return {dot(v, t), dot(v, b), dot(v, n)}; }
    Vec3 to_world(const Vec3 &v) const { return t * v.x + b * v.y + n * v.z; }
};

// Threshold on |normal . up| above which the up vector is considered degenerate.
inline constexpr double kUpDegeneracy = 1.0 - 1e-4;

// Hemisphere frame around `normal`. The tangent plane is oriented by `global_up`
// projected onto it; when the normal is (anti)parallel to the up vector, the up
// vector is first rotated by 90 degrees toward the global Y axis.
Frame build_frame(const Vec3 &normal, const Vec3 &global_up);

// Arbitrary orthonormal frame around `n`, for BSDF sampling.
Frame frame_from_normal(const Vec3 &n);

}  // namespace drc
