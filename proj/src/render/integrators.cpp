// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/render/integrators.h"

#include <algorithm>
#include <cmath>

namespace drc {

namespace {

Ray spawn(const Vec3 &origin, const Vec3 &dir) { return Ray{origin, dir, kRayEpsilon, kInf}; }

std::size_t pick_light(const Scene &scene, double u) {
    const std::size_t n = scene.lights().size();
    return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

// MIS-weighted emission picked up by a BSDF-sampled ray that left `ref`.
Rgb bsdf_hit_emission(const Scene &scene, const Vec3 &ref, const Vec3 &ref_normal, const Vec3 &wi,
                      const Hit &hit, double bsdf_pdf, bool specular) {
    if (hit.emitted.is_black()) return {};
    if (specular) return hit.emitted;
    const int light = scene.light_of_primitive(hit.primitive_id);
    if (light < 0) return {};
    const double pl = scene.light_pdf(static_cast<std::size_t>(light), ref, ref_normal, wi, hit) /
                      static_cast<double>(scene.lights().size());
    return hit.emitted * power_heuristic(bsdf_pdf, pl);
}

Rgb escaped_radiance(const Scene &scene, const Vec3 &ref_normal, const Vec3 &wi, double bsdf_pdf,
                     bool specular) {
    if (!scene.has_environment()) return {};
    if (specular) return scene.environment();
    const double pl = scene.environment_pdf(ref_normal, wi) / static_cast<double>(scene.lights().size());
    return scene.environment() * power_heuristic(bsdf_pdf, pl);
}

bool sanitize(Rgb &c, IntegratorStats *stats) {
    if (c.is_finite() && c.r >= 0 && c.g >= 0 && c.b >= 0) return true;
    c = Rgb{};
    if (stats) ++stats->nonfinite;
    return false;
}

}  // namespace

Rgb sample_one_light(const Scene &scene, const Hit &hit, const Material &m, const Frame &frame,
                     const Vec3 &wo, Sampler &sampler) {
    const double u_pick = sampler.next_1d();
    const Vec2 u = sampler.next_2d();
    if (scene.lights().empty() || m.is_specular()) return {};
    const std::size_t li = pick_light(scene, u_pick);
    const LightSample ls = scene.sample_light(li, hit.position, frame.n, u);
    if (ls.pdf <= 0 || ls.radiance.is_black()) return {};
    const double cos_i = dot(ls.wi, frame.n);
    if (cos_i <= 0) return {};
    const Rgb f = eval_bsdf(m, frame, wo, ls.wi);
    if (f.is_black()) return {};
    const double t_max = ls.distance >= kInf ? kInf : ls.distance * (1.0 - 1e-6) - kRayEpsilon;
    if (scene.occluded(Ray{hit.position, ls.wi, kRayEpsilon, t_max})) return {};
    const double n_lights = static_cast<double>(scene.lights().size());
    const double pl = ls.pdf / n_lights;
    const double w = ls.is_delta ? 1.0 : power_heuristic(pl, pdf_bsdf(m, frame, wo, ls.wi));
    return f * ls.radiance * (cos_i * w / pl);
}

Rgb li_path(const Scene &scene, const Ray &camera_ray, Sampler &sampler, const PathOptions &opt,
            bool skip_first_emission, IntegratorStats *stats) {
    Rgb radiance;
    Rgb beta(1.0);
    Ray ray = camera_ray;
    bool specular = false;
    double bsdf_pdf = 0;
    Vec3 prev = ray.origin, prev_normal;
    for (int depth = 0;; ++depth) {
        const auto hit = scene.intersect(ray);
        if (!hit) {
            if (depth > 0 || !skip_first_emission) {
                Rgb c = beta * (depth == 0 ? scene.environment()
                                           : escaped_radiance(scene, prev_normal, ray.direction, bsdf_pdf, specular));
                sanitize(c, stats);
                radiance += c;
            }
            break;
        }
        if (depth > 0 || !skip_first_emission) {
            Rgb c = beta * (depth == 0 ? hit->emitted
                                       : bsdf_hit_emission(scene, prev, prev_normal, ray.direction,
                                                           *hit, bsdf_pdf, specular));
            sanitize(c, stats);
            radiance += c;
        }
        if (depth >= opt.max_depth) break;

        const Material &m = scene.material(hit->material_id);
        const Vec3 wo = -ray.direction;
        const bool front = dot(hit->normal, wo) > 0;
        const Frame frame = frame_from_normal(front ? hit->normal : -hit->normal);

        if (!m.is_specular()) {
            Rgb c = beta * sample_one_light(scene, *hit, m, frame, wo, sampler);
            sanitize(c, stats);
            radiance += c;
        } else {
            sampler.next_1d();
            sampler.next_2d();
        }

        const BsdfSample bs = sample_bsdf(m, frame, wo, sampler.next_2d(), front);
        if (bs.pdf <= 0 || bs.weight.is_black()) break;
        beta = beta * bs.weight;
        specular = bs.is_specular;
        bsdf_pdf = bs.pdf;
        prev = hit->position;
        prev_normal = frame.n;
        ray = spawn(hit->position, bs.wi);

        const double rr = sampler.next_1d();
        if (depth + 1 >= opt.rr_start) {
            const double q = std::clamp(beta.max_component(), 0.05, 1.0);
            if (rr >= q) break;
            beta = beta / q;
        }
        if (!beta.is_finite()) {
            if (stats) ++stats->nonfinite;
            break;
        }
    }
    return radiance;
}

Rgb li_direct(const Scene &scene, const Ray &camera_ray, Sampler &sampler, IntegratorStats *stats) {
    Rgb radiance;
    Rgb beta(1.0);
    Ray ray = camera_ray;
    for (int chain = 0; chain <= kSpecularChainLimit; ++chain) {
        const auto hit = scene.intersect(ray);
        if (!hit) {
            radiance += beta * scene.environment();
            break;
        }
        radiance += beta * hit->emitted;
        const Material &m = scene.material(hit->material_id);
        const Vec3 wo = -ray.direction;
        const bool front = dot(hit->normal, wo) > 0;
        const Frame frame = frame_from_normal(front ? hit->normal : -hit->normal);
        if (m.is_specular()) {
            const BsdfSample bs = sample_bsdf(m, frame, wo, sampler.next_2d(), front);
            beta = beta * bs.weight;
            if (beta.max_component() < kSpecularCutoff) break;
            ray = spawn(hit->position, bs.wi);
            continue;
        }
        radiance += beta * sample_one_light(scene, *hit, m, frame, wo, sampler);
        const BsdfSample bs = sample_bsdf(m, frame, wo, sampler.next_2d(), front);
        if (bs.pdf > 0 && !bs.weight.is_black()) {
            const Ray next = spawn(hit->position, bs.wi);
            if (const auto h2 = scene.intersect(next))
                radiance += beta * bs.weight *
                            bsdf_hit_emission(scene, hit->position, frame.n, bs.wi, *h2, bs.pdf, false);
            else
                radiance += beta * bs.weight * escaped_radiance(scene, frame.n, bs.wi, bs.pdf, false);
        }
        break;
    }
    sanitize(radiance, stats);
    return radiance;
}

std::optional<PrimaryHit> find_primary_intersection(const Scene &scene, const Ray &camera_ray) {
    PrimaryHit ph;
    Ray ray = camera_ray;
    for (int chain = 0; chain <= kSpecularChainLimit; ++chain) {
        const auto hit = scene.intersect(ray);
        if (!hit) return std::nullopt;
        const Material &m = scene.material(hit->material_id);
        const Vec3 wo = -ray.direction;
        if (!m.is_specular()) {
            ph.hit = *hit;
            ph.wo = wo;
            ph.chain_length = chain;
            return ph;
        }
        const bool front = dot(hit->normal, wo) > 0;
        const Frame frame = frame_from_normal(front ? hit->normal : -hit->normal);
        const SpecularStep step = follow_specular(m, frame, wo, front);
        ph.throughput = ph.throughput * step.throughput;
        if (!step.valid || ph.throughput.max_component() < kSpecularCutoff) return std::nullopt;
        ray = spawn(hit->position, step.wi);
    }
    return std::nullopt;
}

}  // namespace drc
