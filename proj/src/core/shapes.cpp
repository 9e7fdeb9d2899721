// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/shapes.h"

#include <cmath>

namespace drc {

Bounds3 Primitive::bounds() const {
    Bounds3 b;
    switch (type) {
    case PrimitiveType::sphere:
        b.extend(p - Vec3{radius, radius, radius});
        b.extend(p + Vec3{radius, radius, radius});
        break;
    case PrimitiveType::quad:
        b.extend(p);
        b.extend(p + e1);
        b.extend(p + e2);
        b.extend(p + e1 + e2);
        break;
    case PrimitiveType::triangle:
        b.extend(p);
        b.extend(p + e1);
        b.extend(p + e2);
        break;
    }
    return b;
}

std::optional<double> Primitive::intersect(const Ray &ray, double t_max) const {
    switch (type) {
    case PrimitiveType::sphere: {
        const Vec3 oc = ray.origin - p;
        const double half_b = dot(oc, ray.direction);
        const double c = dot(oc, oc) - radius * radius;
        const double disc = half_b * half_b - c;
        if (disc < 0) return std::nullopt;
        const double sq = std::sqrt(disc);
        const double t0 = -half_b - sq, t1 = -half_b + sq;
        if (t0 > ray.t_min && t0 <= t_max) return t0;
        if (t1 > ray.t_min && t1 <= t_max) return t1;
        return std::nullopt;
    }
    case PrimitiveType::quad: {
        const Vec3 n = cross(e1, e2);
        const double denom = dot(n, ray.direction);
        if (denom == 0) return std::nullopt;
        const double t = dot(n, p - ray.origin) / denom;
        if (!(t > ray.t_min && t <= t_max)) return std::nullopt;
        const Vec3 rel = ray.at(t) - p;
        const double inv = 1.0 / dot(n, n);
        const double a = dot(cross(rel, e2), n) * inv;
        const double b = dot(cross(e1, rel), n) * inv;
        if (a < 0 || a > 1 || b < 0 || b > 1) return std::nullopt;
        return t;
    }
    case PrimitiveType::triangle: {
        // Moller-Trumbore.
        const Vec3 pv = cross(ray.direction, e2);
        const double det = dot(e1, pv);
        if (det == 0) return std::nullopt;
        const double inv_det = 1.0 / det;
        const Vec3 tv = ray.origin - p;
        const double u = dot(tv, pv) * inv_det;
        if (u < 0 || u > 1) return std::nullopt;
        const Vec3 qv = cross(tv, e1);
        const double v = dot(ray.direction, qv) * inv_det;
        if (v < 0 || u + v > 1) return std::nullopt;
        const double t = dot(e2, qv) * inv_det;
        if (!(t > ray.t_min && t <= t_max)) return std::nullopt;
        return t;
    }
    }
    return std::nullopt;
}

Vec3 Primitive::normal_at(const Vec3 &position) const {
    if (type == PrimitiveType::sphere) return normalize(position - p);
    return normal;
}

SurfacePoint sample_area(const Primitive &prim, Vec2 u) {
    if (prim.type == PrimitiveType::quad)
        return {prim.p + prim.e1 * u.x + prim.e2 * u.y, prim.normal};
    // Triangle: square-root parameterization.
    const double su = std::sqrt(u.x);
    const double b0 = 1.0 - su, b1 = u.y * su;
    return {prim.p + prim.e1 * (1.0 - b0 - b1) + prim.e2 * b1, prim.normal};
}

}  // namespace drc
