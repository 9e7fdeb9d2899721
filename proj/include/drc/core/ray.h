// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "drc/core/geometry.h"

namespace drc {

// Offset used when spawning secondary rays from a surface.
inline constexpr double kRayEpsilon = 1e-5;

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
    double t_min = 0;
    double t_max = kInf;

    Vec3 at(double t) const { return origin + direction * t; }
};

struct Hit {
    Vec3 position;
    Vec3 normal;  // geometric normal, not flipped toward the ray
    double distance = 0;
    std::uint32_t material_id = 0;
    std::uint32_t primitive_id = 0;
    bool is_emitter = false;
    Rgb emitted;  // radiance leaving toward the ray origin

    // Normal on the side the ray arrived from.
    Vec3 facing_normal(const Vec3 &ray_direction) const {
        return dot(normal, ray_direction) > 0 ? -normal : normal;
    }
};

}  // namespace drc
