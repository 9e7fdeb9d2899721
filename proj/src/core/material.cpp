// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/material.h"

#include <cmath>

#include "drc/core/errors.h"

namespace drc {

namespace {

bool refract(const Vec3 &wo, const Vec3 &n, double eta, Vec3 *wt) {
    const double cos_i = dot(wo, n);
    const double sin2_t = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);
    if (sin2_t >= 1.0) return false;
    const double cos_t = std::sqrt(1.0 - sin2_t);
    *wt = normalize(-wo * eta + n * (eta * cos_i - cos_t));
    return true;
}

// Direction of the glossy lobe's axis, sampled around the mirror direction.
Vec3 sample_phong_lobe(const Vec3 &axis, double exponent, Vec2 u) {
    const double cos_a = std::pow(u.x, 1.0 / (exponent + 1.0));
    const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
    const double phi = 2.0 * kPi * u.y;
    const Frame lobe = frame_from_normal(axis);
    return normalize(lobe.to_world({sin_a * std::cos(phi), sin_a * std::sin(phi), cos_a}));
}

}  // namespace

Vec2 sample_concentric_disk(Vec2 u) {
    const double ox = 2.0 * u.x - 1.0, oy = 2.0 * u.y - 1.0;
    if (ox == 0 && oy == 0) return {0, 0};
    double r, theta;
    if (std::abs(ox) > std::abs(oy)) {
        r = ox;
        theta = (kPi / 4.0) * (oy / ox);
    } else {
        r = oy;
        theta = kPi / 2.0 - (kPi / 4.0) * (ox / oy);
    }
    return {r * std::cos(theta), r * std::sin(theta)};
}

Vec3 sample_cosine_hemisphere(Vec2 u) {
    const Vec2 d = sample_concentric_disk(u);
    const double z = std::sqrt(std::max(0.0, 1.0 - d.x * d.x - d.y * d.y));
    return {d.x, d.y, z};
}

double fresnel_dielectric(double cos_i, double eta_i, double eta_t) {
    cos_i = std::clamp(cos_i, 0.0, 1.0);
    const double sin_i = std::sqrt(std::max(0.0, 1.0 - cos_i * cos_i));
    const double sin_t = eta_i / eta_t * sin_i;
    if (sin_t >= 1.0) return 1.0;
    const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t * sin_t));
    const double r_par = (eta_t * cos_i - eta_i * cos_t) / (eta_t * cos_i + eta_i * cos_t);
    const double r_perp = (eta_i * cos_i - eta_t * cos_t) / (eta_i * cos_i + eta_t * cos_t);
    return 0.5 * (r_par * r_par + r_perp * r_perp);
}

Rgb fresnel_schlick(const Rgb &f0, double cos_theta) {
    const double m = std::pow(1.0 - std::clamp(cos_theta, 0.0, 1.0), 5.0);
    return f0 + (Rgb(1.0) - f0) * m;
}

Rgb eval_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, const Vec3 &wi) {
    if (m.is_specular()) throw ContractError("eval_bsdf called on a specular material");
    const double cos_o = dot(wo, frame.n), cos_i = dot(wi, frame.n);
    if (cos_o <= 0 || cos_i <= 0) return {};
    if (m.kind == MaterialKind::diffuse) return m.albedo * kInvPi;
    const double e = m.phong_exponent();
    const double cos_a = dot(wi, reflect(wo, frame.n));
    if (cos_a <= 0) return {};
    return m.albedo * ((e + 2.0) / (2.0 * kPi) * std::pow(cos_a, e));
}

double pdf_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, const Vec3 &wi) {
    if (m.is_specular()) return 0;
    if (dot(wo, frame.n) <= 0) return 0;
    if (m.kind == MaterialKind::diffuse) return std::max(0.0, dot(wi, frame.n)) * kInvPi;
    const double e = m.phong_exponent();
    const double cos_a = dot(wi, reflect(wo, frame.n));
    if (cos_a <= 0) return 0;
    return (e + 1.0) / (2.0 * kPi) * std::pow(cos_a, e);
}

BsdfSample sample_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, Vec2 u,
                       bool front_face) {
    BsdfSample s;
    const double cos_o = dot(wo, frame.n);
    switch (m.kind) {
    case MaterialKind::diffuse: {
        const Vec3 local = sample_cosine_hemisphere(u);
        s.wi = normalize(frame.to_world(local));
        s.pdf = std::max(local.z, 1e-12) * kInvPi;
        s.value = cos_o > 0 ? m.albedo * kInvPi : Rgb{};
        s.weight = cos_o > 0 ? m.albedo : Rgb{};
        break;
    }
    case MaterialKind::glossy: {
        const double e = m.phong_exponent();
        s.wi = sample_phong_lobe(reflect(wo, frame.n), e, u);
        s.pdf = std::max(pdf_bsdf(m, frame, wo, s.wi), 1e-12);
        s.value = eval_bsdf(m, frame, wo, s.wi);
        s.weight = s.value * (std::max(0.0, dot(s.wi, frame.n)) / s.pdf);
        break;
    }
    case MaterialKind::mirror: {
        s.wi = reflect(wo, frame.n);
        s.is_specular = true;
        s.pdf = 1;
        s.weight = fresnel_schlick(m.albedo, cos_o);
        s.value = s.weight / std::max(std::abs(cos_o), 1e-12);
        break;
    }
    case MaterialKind::transmission: {
        const double eta_i = front_face ? 1.0 : m.ior, eta_t = front_face ? m.ior : 1.0;
        const double f = fresnel_dielectric(cos_o, eta_i, eta_t);
        Vec3 wt;
        s.is_specular = true;
        if (u.x < f || !refract(wo, frame.n, eta_i / eta_t, &wt)) {
            s.wi = reflect(wo, frame.n);
            s.pdf = f;
        } else {
            s.wi = wt;
            s.pdf = 1.0 - f;
        }
        s.weight = m.albedo;
        s.value = m.albedo * (s.pdf / std::max(std::abs(dot(s.wi, frame.n)), 1e-12));
        break;
    }
    }
    return s;
}

SpecularStep follow_specular(const Material &m, const Frame &frame, const Vec3 &wo,
                             bool front_face) {
    SpecularStep step;
    const double cos_o = dot(wo, frame.n);
    if (m.kind == MaterialKind::mirror) {
        step.wi = reflect(wo, frame.n);
        step.throughput = fresnel_schlick(m.albedo, cos_o);
        step.valid = true;
    } else if (m.kind == MaterialKind::transmission) {
        const double eta_i = front_face ? 1.0 : m.ior, eta_t = front_face ? m.ior : 1.0;
        Vec3 wt;
        if (refract(wo, frame.n, eta_i / eta_t, &wt)) {
            step.wi = wt;
            step.throughput = m.albedo * (1.0 - fresnel_dielectric(cos_o, eta_i, eta_t));
        } else {
            step.wi = reflect(wo, frame.n);
            step.throughput = m.albedo;
        }
        step.valid = true;
    }
    return step;
}

}  // namespace drc
