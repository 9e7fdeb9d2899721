// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/scene.h"

#include <cmath>
#include <map>
#include <sstream>

#include "drc/core/errors.h"
#include "drc/core/frame.h"

namespace drc {

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) throw ValidationError(msg);
}

bool in_unit_range(const Rgb &c, bool allow_one) {
    for (int i = 0; i < 3; ++i)
        if (!(c[i] >= 0 && (allow_one ? c[i] <= 1 : c[i] < 1))) return false;
    return true;
}

void validate(const SceneDescription &d) {
    const Camera &cam = d.camera;
    require(cam.width >= 1 && cam.height >= 1, "camera resolution must be at least 1x1");
    require(cam.fov > 0 && cam.fov < 180, "camera fov must lie in (0, 180) degrees");
    require(is_finite(cam.position) && is_finite(cam.look_at) && is_finite(cam.up),
            "camera vectors must be finite");
    require(length(cam.look_at - cam.position) > 0, "camera look_at equals position");
    require(length(cross(cam.look_at - cam.position, cam.up)) > 0,
            "camera up is parallel to the view direction");
    require(std::abs(length(d.global_up) - 1.0) < 1e-6, "global_up must be unit length");

    std::map<std::string, int> seen;
    for (const Material &m : d.materials) {
        require(!m.name.empty(), "material without a name");
        require(seen.emplace(m.name, 0).second, "duplicate material \"" + m.name + "\"");
        require(m.emission.is_finite() && m.emission.r >= 0 && m.emission.g >= 0 &&
                    m.emission.b >= 0,
                "material \"" + m.name + "\": emission must be non-negative");
        require(in_unit_range(m.albedo, m.is_emitter()),
                "material \"" + m.name + "\": albedo must lie in [0, 1)");
        if (m.kind == MaterialKind::glossy)
            require(m.roughness > 0 && m.roughness <= 1,
                    "material \"" + m.name + "\": roughness must lie in (0, 1]");
        if (m.kind == MaterialKind::transmission)
            require(m.ior > 0, "material \"" + m.name + "\": ior must be positive");
    }
    for (const Shape &s : d.shapes) {
        require(seen.count(s.material) != 0, "shape references unknown material \"" +
                                                 s.material + "\"");
        if (const auto *sp = std::get_if<SphereShape>(&s.geometry))
            require(sp->radius > 0, "sphere radius must be positive");
        if (const auto *q = std::get_if<QuadShape>(&s.geometry))
            require(length(cross(q->edge_u, q->edge_v)) > 0, "degenerate quad");
        if (const auto *mesh = std::get_if<MeshShape>(&s.geometry))
            for (const auto &tri : mesh->triangles)
                for (std::uint32_t v : tri)
                    require(v < mesh->vertices.size(), "mesh triangle index out of range");
    }
    for (const PointLight &l : d.point_lights)
        require(l.intensity.r >= 0 && l.intensity.g >= 0 && l.intensity.b >= 0,
                "point light intensity must be non-negative");
    require(d.environment.r >= 0 && d.environment.g >= 0 && d.environment.b >= 0,
            "environment radiance must be non-negative");
}

}  // namespace

Scene::Scene(SceneDescription desc) : desc_(std::move(desc)) {
    validate(desc_);
    std::map<std::string, std::uint32_t> ids;
    for (std::uint32_t i = 0; i < desc_.materials.size(); ++i) ids[desc_.materials[i].name] = i;

    for (const Shape &s : desc_.shapes) {
        const std::uint32_t mat = ids.at(s.material);
        if (const auto *sp = std::get_if<SphereShape>(&s.geometry)) {
            Primitive p;
            p.type = PrimitiveType::sphere;
            p.p = sp->center;
            p.radius = sp->radius;
            p.area = 4.0 * kPi * sp->radius * sp->radius;
            p.material_id = mat;
            prims_.push_back(p);
        } else if (const auto *q = std::get_if<QuadShape>(&s.geometry)) {
            Primitive p;
            p.type = PrimitiveType::quad;
            p.p = q->corner;
            p.e1 = q->edge_u;
            p.e2 = q->edge_v;
            const Vec3 n = cross(q->edge_u, q->edge_v);
            p.area = length(n);
            p.normal = n / p.area;
            p.material_id = mat;
            prims_.push_back(p);
        } else {
            const auto &mesh = std::get<MeshShape>(s.geometry);
            for (const auto &tri : mesh.triangles) {
                Primitive p;
                p.type = PrimitiveType::triangle;
                p.p = mesh.vertices[tri[0]];
                p.e1 = mesh.vertices[tri[1]] - p.p;
                p.e2 = mesh.vertices[tri[2]] - p.p;
                const Vec3 n = cross(p.e1, p.e2);
                p.area = 0.5 * length(n);
                if (p.area <= 0) continue;  // degenerate triangles are dropped
                p.normal = normalize(n);
                p.material_id = mat;
                prims_.push_back(p);
            }
        }
    }

    for (std::uint32_t i = 0; i < desc_.point_lights.size(); ++i)
        lights_.push_back({LightType::point, i});
    prim_light_.assign(prims_.size(), -1);
    for (std::uint32_t i = 0; i < prims_.size(); ++i) {
        if (desc_.materials[prims_[i].material_id].is_emitter()) {
            prim_light_[i] = static_cast<int>(lights_.size());
            lights_.push_back({LightType::area, i});
        }
    }
    if (has_environment()) {
        env_light_ = static_cast<int>(lights_.size());
        lights_.push_back({LightType::environment, 0});
    }

    bvh_ = Bvh(prims_);

    const Camera &cam = desc_.camera;
    cam_forward_ = normalize(cam.look_at - cam.position);
    cam_right_ = normalize(cross(cam_forward_, cam.up));
    cam_up_ = cross(cam_right_, cam_forward_);
    tan_half_fov_ = std::tan(0.5 * cam.fov * kPi / 180.0);
}

std::size_t Scene::emitter_count() const {
    std::size_t n = 0;
    for (const Light &l : lights_) n += l.type == LightType::area;
    return n;
}

Hit Scene::make_hit(const Ray &ray, const PrimitiveHit &ph) const {
    const Primitive &prim = prims_[ph.index];
    Hit h;
    h.distance = ph.t;
    h.position = ray.at(ph.t);
    h.normal = prim.normal_at(h.position);
    h.material_id = prim.material_id;
    h.primitive_id = ph.index;
    const Material &m = desc_.materials[prim.material_id];
    h.is_emitter = m.is_emitter();
    if (h.is_emitter && dot(h.normal, ray.direction) < 0) h.emitted = m.emission;
    return h;
}

std::optional<Hit> Scene::intersect(const Ray &ray) const {
    if (auto ph = bvh_.intersect(prims_, ray)) return make_hit(ray, *ph);
    return std::nullopt;
}

std::optional<Hit> Scene::intersect_linear(const Ray &ray) const {
    if (auto ph = drc::intersect_linear(prims_, ray)) return make_hit(ray, *ph);
    return std::nullopt;
}

bool Scene::visible(const Vec3 &from, const Vec3 &to) const {
    const Vec3 d = to - from;
    const double dist = length(d);
    if (dist <= 2 * kRayEpsilon) return true;
    Ray r{from, d / dist, kRayEpsilon, dist * (1.0 - 1e-7) - kRayEpsilon};
    return !occluded(r);
}

Ray Scene::camera_ray(double x, double y) const {
    const Camera &cam = desc_.camera;
    const double aspect = static_cast<double>(cam.width) / cam.height;
    const double sx = (2.0 * x / cam.width - 1.0) * tan_half_fov_ * aspect;
    const double sy = (1.0 - 2.0 * y / cam.height) * tan_half_fov_;
    return Ray{cam.position, normalize(cam_forward_ + cam_right_ * sx + cam_up_ * sy), 0, kInf};
}

double Scene::environment_pdf(const Vec3 &normal, const Vec3 &wi) const {
    return std::max(0.0, dot(normal, wi)) / kPi;
}

LightSample Scene::sample_light(std::size_t index, const Vec3 &ref, const Vec3 &normal, Vec2 u) const {
    const Light &light = lights_[index];
    LightSample s;
    switch (light.type) {
    case LightType::point: {
        const PointLight &pl = desc_.point_lights[light.index];
        const Vec3 d = pl.position - ref;
        s.distance = length(d);
        s.wi = d / s.distance;
        s.radiance = pl.intensity / (s.distance * s.distance);
        s.pdf = 1;
        s.is_delta = true;
        break;
    }
    case LightType::environment: {
        // The environment is constant, so the cosine lobe is its ideal density.
        const double r = std::sqrt(u.x), phi = 2.0 * kPi * u.y;
        const Vec3 local{r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u.x))};
        s.wi = normalize(frame_from_normal(normal).to_world(local));
        s.radiance = desc_.environment;
        s.pdf = environment_pdf(normal, s.wi);
        break;
    }
    case LightType::area: {
        const Primitive &prim = prims_[light.index];
        const Rgb &le = desc_.materials[prim.material_id].emission;
        if (prim.type == PrimitiveType::sphere) {
            const Vec3 to_center = prim.p - ref;
            const double dc2 = length_squared(to_center);
            const double r2 = prim.radius * prim.radius;
            if (dc2 > r2 * (1.0 + 1e-9)) {
                // Uniform cone of directions subtended by the sphere.
                const double cos_max = std::sqrt(std::max(0.0, 1.0 - r2 / dc2));
                const double cos_t = 1.0 - u.x * (1.0 - cos_max);
                const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
                const double phi = 2.0 * kPi * u.y;
                const Frame f = frame_from_normal(to_center / std::sqrt(dc2));
                s.wi = normalize(f.to_world({sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t}));
                const Ray probe{ref, s.wi, 0, kInf};
                const auto t = prim.intersect(probe, kInf);
                s.distance = t ? *t : std::sqrt(dc2 - r2);
                s.radiance = le;
                s.pdf = 1.0 / (2.0 * kPi * (1.0 - cos_max));
                break;
            }
            // Reference point inside the sphere: uniform area sampling.
            const double z = 1.0 - 2.0 * u.x;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * kPi * u.y;
            const Vec3 n{r * std::cos(phi), r * std::sin(phi), z};
            const Vec3 p = prim.p + n * prim.radius;
            const Vec3 d = p - ref;
            s.distance = length(d);
            s.wi = d / s.distance;
            const double cos_l = dot(-s.wi, n);
            if (cos_l <= 0) return LightSample{};
            s.radiance = le;
            s.pdf = s.distance * s.distance / (cos_l * prim.area);
            break;
        }
        const SurfacePoint sp = sample_area(prim, u);
        const Vec3 d = sp.position - ref;
        s.distance = length(d);
        if (s.distance <= 0) return LightSample{};
        s.wi = d / s.distance;
        const double cos_l = dot(-s.wi, sp.normal);
        if (cos_l <= 0) return LightSample{};  // back side does not emit
        s.radiance = le;
        s.pdf = s.distance * s.distance / (cos_l * prim.area);
        break;
    }
    }
    return s;
}

double Scene::light_pdf(std::size_t index, const Vec3 &ref, const Vec3 &normal, const Vec3 &wi,
                        const Hit &hit) const {
    const Light &light = lights_[index];
    if (light.type == LightType::point) return 0;
    if (light.type == LightType::environment) return environment_pdf(normal, wi);
    const Primitive &prim = prims_[light.index];
    if (prim.type == PrimitiveType::sphere) {
        const double dc2 = length_squared(prim.p - ref);
        const double r2 = prim.radius * prim.radius;
        if (dc2 > r2 * (1.0 + 1e-9)) {
            const double cos_max = std::sqrt(std::max(0.0, 1.0 - r2 / dc2));
            return 1.0 / (2.0 * kPi * (1.0 - cos_max));
        }
    }
    const double cos_l = std::abs(dot(hit.normal, wi));
    if (cos_l <= 0) return 0;
    return hit.distance * hit.distance / (cos_l * prim.area);
}

}  // namespace drc
