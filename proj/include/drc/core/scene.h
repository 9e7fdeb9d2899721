// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drc/core/bvh.h"
#include "drc/core/material.h"
#include "drc/core/ray.h"
#include "drc/core/shapes.h"

namespace drc {

struct Camera {
    Vec3 position;
    Vec3 look_at{0, 0, -1};
    Vec3 up{0, 1, 0};
    double fov = 45;  // vertical, degrees
    int width = 64;
    int height = 64;

    bool operator==(const Camera &) const = default;
};

struct PointLight {
    Vec3 position;
    Rgb intensity;  // W/sr
    bool operator==(const PointLight &) const = default;
};

// Everything a scene document states, before any acceleration structure is built.
struct SceneDescription {
    Camera camera;
    std::vector<Material> materials;
    std::vector<Shape> shapes;
    std::vector<PointLight> point_lights;
    Vec3 global_up{0, 1, 0};
    Rgb environment;  // constant radiance for rays leaving the scene

    bool operator==(const SceneDescription &) const = default;
};

enum class LightType { point, area, environment };

struct Light {
    LightType type = LightType::point;
    std::uint32_t index = 0;  // point light index or primitive index
};

struct LightSample {
    Vec3 wi;
    double distance = kInf;  // to the sampled point; kInf for the environment
    Rgb radiance;            // incident radiance (intensity / d^2 for point lights)
    double pdf = 0;          // solid angle; 1 for delta lights
    bool is_delta = false;
};

// Immutable, validated scene with its BVH. Safe to share across threads.
class Scene {
  public:
    explicit Scene(SceneDescription desc);

    const SceneDescription &description() const { return desc_; }
    const Camera &camera() const { return desc_.camera; }
    const Vec3 &global_up() const { return desc_.global_up; }
    const Rgb &environment() const { return desc_.environment; }
    bool has_environment() const { return !desc_.environment.is_black(); }
    const Material &material(std::uint32_t id) const { return desc_.materials[id]; }
    const std::vector<Primitive> &primitives() const { return prims_; }
    const std::vector<Light> &lights() const { return lights_; }
    std::size_t emitter_count() const;

    std::optional<Hit> intersect(const Ray &ray) const;
    std::optional<Hit> intersect_linear(const Ray &ray) const;
    bool occluded(const Ray &ray) const { return bvh_.occluded(prims_, ray); }
    // Unoccluded segment test between two points.
    bool visible(const Vec3 &from, const Vec3 &to) const;

    // Ray through image position (x, y) in pixels; (0, 0) is the top-left corner.
    Ray camera_ray(double x, double y) const;

    // `normal` is the shading normal at `ref` on the side being lit. The
    // environment is sampled cosine-weighted around it.
    LightSample sample_light(std::size_t light, const Vec3 &ref, const Vec3 &normal, Vec2 u) const;
    // Solid-angle density with which sample_light would produce `wi` hitting
    // `hit`. For the environment `hit` is ignored.
    double light_pdf(std::size_t light, const Vec3 &ref, const Vec3 &normal, const Vec3 &wi,
                     const Hit &hit) const;
    double environment_pdf(const Vec3 &normal, const Vec3 &wi) const;
    // Light index for an emitting primitive, or -1.
    int light_of_primitive(std::uint32_t prim) const { return prim_light_[prim]; }
    int environment_light() const { return env_light_; }

  private:
    Hit make_hit(const Ray &ray, const PrimitiveHit &ph) const;

    SceneDescription desc_;
    std::vector<Primitive> prims_;
    std::vector<Light> lights_;
    std::vector<int> prim_light_;
    int env_light_ = -1;
    Bvh bvh_;
    // Camera basis.
    Vec3 cam_forward_, cam_right_, cam_up_;
    double tan_half_fov_ = 1;
};

}  // namespace drc
