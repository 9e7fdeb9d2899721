// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drc/core/geometry.h"
#include "drc/core/ray.h"

namespace drc {

struct SphereShape {
    Vec3 center;
    double radius = 1;
    bool operator==(const SphereShape &) const = default;
};

// Parallelogram spanned by two edges from `corner`; its normal is edge_u x edge_v.
struct QuadShape {
    Vec3 corner;
    Vec3 edge_u;
    Vec3 edge_v;
    bool operator==(const QuadShape &) const = default;
};

// Counter-clockwise winding gives the front face.
struct MeshShape {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    bool operator==(const MeshShape &) const = default;
};

struct Shape {
    std::variant<SphereShape, QuadShape, MeshShape> geometry;
    std::string material;
    bool operator==(const Shape &) const = default;
};

struct Bounds3 {
    Vec3 lo{kInf, kInf, kInf};
    Vec3 hi{-kInf, -kInf, -kInf};

    void extend(const Vec3 &p) { lo = min(lo, p); hi = max(hi, p); }
    void extend(const Bounds3 &b) { lo = min(lo, b.lo); hi = max(hi, b.hi); }
    Vec3 centroid() const { return (lo + hi) * 0.5; }
    Vec3 diagonal() const { return hi - lo; }
    double surface_area() const {
        const Vec3 d = diagonal();
        if (d.x < 0) return 0;
        return 2.0 * (d.x * d.y + d.y * d.z + d.z * d.x);
    }
    int max_axis() const {
        const Vec3 d = diagonal();
        return d.x > d.y && d.x > d.z ? 0 : (d.y > d.z ? 1 : 2);
    }
};

enum class PrimitiveType : std::uint8_t { sphere, quad, triangle };

// Flattened intersectable element. For spheres `p` is the center and
// `radius` is set; quads and triangles store an origin vertex and two edges.
struct Primitive {
    PrimitiveType type = PrimitiveType::sphere;
    Vec3 p;
    Vec3 e1, e2;
    Vec3 normal;  // unit geometric normal (quad/triangle)
    double radius = 0;
    double area = 0;
    std::uint32_t material_id = 0;

    Bounds3 bounds() const;
    // Nearest parametric distance in (ray.t_min, t_max], if any.
    std::optional<double> intersect(const Ray &ray, double t_max) const;
    Vec3 normal_at(const Vec3 &position) const;
};

struct SurfacePoint {
    Vec3 position;
    Vec3 normal;
};

// Uniform area sample on a quad or triangle.
SurfacePoint sample_area(const Primitive &prim, Vec2 u);

}  // namespace drc
