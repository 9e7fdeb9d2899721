// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/frame.h"

#include <cmath>

namespace drc {

namespace {

// `up` rotated by 90 degrees inside the plane it spans with `toward`.
Vec3 rotate_toward(const Vec3 &up, const Vec3 &toward) {
    return normalize(toward - up * dot(toward, up));
}

}  // namespace

Frame build_frame(const Vec3 &normal, const Vec3 &global_up) {
    Vec3 up = global_up;
    if (std::abs(dot(normal, up)) > kUpDegeneracy) {
        const Vec3 y_axis{0, 1, 0};
        // An up vector that already is the Y axis has no direction "toward Y";
        // fall back to Z in that case.
        if (std::abs(dot(up, y_axis)) > kUpDegeneracy)
            up = rotate_toward(up, Vec3{0, 0, 1});
        else
            up = rotate_toward(up, y_axis);
    }
    Frame f;
    f.n = normal;
    f.b = normalize(up - normal * dot(up, normal));
    f.t = cross(f.b, normal);
    return f;
}

Frame frame_from_normal(const Vec3 &n) {
    // Duff et al. branchless basis.
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double b = n.x * n.y * a;
    Frame f;
    f.n = n;
    f.t = Vec3{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
    f.b = Vec3{b, sign + n.y * n.y * a, -n.y};
    return f;
}

}  // namespace drc
