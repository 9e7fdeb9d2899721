// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "drc/core/scene.h"
#include "drc/render/sampler.h"

namespace drc {

inline constexpr int kSpecularChainLimit = 16;
inline constexpr double kSpecularCutoff = 1e-4;

struct PathOptions {
    int max_depth = 8;
    int rr_start = 5;  // first depth at which Russian roulette may stop a path
};

// Counters filled by the estimators; callers own one per worker.
struct IntegratorStats {
    std::uint64_t nonfinite = 0;
};

// MIS weight of technique a with power 2.
inline double power_heuristic(double pdf_a, double pdf_b) {
    const double a = pdf_a * pdf_a, b = pdf_b * pdf_b;
    return a + b > 0 ? a / (a + b) : 0.0;
}

// Unidirectional path tracing with next-event estimation. With
// skip_first_emission the emission (and environment) seen by the first
// segment is dropped, leaving only radiance that bounced at least once.
Rgb li_path(const Scene &scene, const Ray &ray, Sampler &sampler, const PathOptions &opt,
            bool skip_first_emission = false, IntegratorStats *stats = nullptr);

// Emission plus one bounce of light at the first non-specular surface.
// Specular chains are followed without counting as a bounce.
Rgb li_direct(const Scene &scene, const Ray &ray, Sampler &sampler,
              IntegratorStats *stats = nullptr);

struct PrimaryHit {
    Hit hit;
    Rgb throughput{1.0};
    Vec3 wo;  // unit direction back toward the previous vertex
    int chain_length = 0;
};

// First non-specular hit, refracting through dielectrics (reflecting only on
// total internal reflection) and reflecting off mirrors.
std::optional<PrimaryHit> find_primary_intersection(const Scene &scene, const Ray &ray);

// Estimate of the light reflected at `wo` from `light_pdf`-style samples of
// one light chosen uniformly, weighted against BSDF sampling. Exposed for tests.
Rgb sample_one_light(const Scene &scene, const Hit &hit, const Material &m, const Frame &frame,
                     const Vec3 &wo, Sampler &sampler);

}  // namespace drc
