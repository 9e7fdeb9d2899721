// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "drc/core/frame.h"
#include "drc/core/geometry.h"

namespace drc {

enum class MaterialKind { diffuse, glossy, mirror, transmission };

struct Material {
    std::string name;
    MaterialKind kind = MaterialKind::diffuse;
    Rgb albedo{0.5};
    double roughness = 0.5;  // glossy only
    double ior = 1.5;        // transmission only
    Rgb emission;

    bool is_specular() const {
        return kind == MaterialKind::mirror || kind == MaterialKind::transmission;
    }
    bool is_emitter() const { return !emission.is_black(); }
    // Exponent of the normalized Phong lobe.
    double phong_exponent() const { return 2.0 / (roughness * roughness) - 2.0; }

    bool operator==(const Material &) const = default;
};

struct BsdfSample {
    Vec3 wi;
    double pdf = 0;        // solid-angle density; 1 for specular events
    Rgb value;             // BSDF value f(wo, wi)
    Rgb weight;            // throughput multiplier f |cos| / pdf
    bool is_specular = false;
};

// All directions are world space, pointing away from the surface. The frame's
// normal is the shading normal on the side of `wo`.

Rgb eval_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, const Vec3 &wi);
double pdf_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, const Vec3 &wi);
// `front_face` tells a dielectric whether `wo` lies outside the surface.
BsdfSample sample_bsdf(const Material &m, const Frame &frame, const Vec3 &wo, Vec2 u,
                       bool front_face = true);

struct SpecularStep {
    Vec3 wi;
    Rgb throughput;
    bool valid = false;
};

// Deterministic continuation through a specular surface: mirrors reflect,
// dielectrics refract (reflecting only under total internal reflection).
SpecularStep follow_specular(const Material &m, const Frame &frame, const Vec3 &wo,
                             bool front_face);

double fresnel_dielectric(double cos_i, double eta_i, double eta_t);
Rgb fresnel_schlick(const Rgb &f0, double cos_theta);

Vec3 sample_cosine_hemisphere(Vec2 u);  // local frame, z up
Vec2 sample_concentric_disk(Vec2 u);

}  // namespace drc
