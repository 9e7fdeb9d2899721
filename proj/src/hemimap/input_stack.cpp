// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/hemimap/input_stack.h"

#include <algorithm>

namespace drc {

std::vector<float> InputStack::channels() const {
    std::vector<float> out;
    out.reserve(7 * kMapTexels);
    out.insert(out.end(), radiance.data.begin(), radiance.data.end());
    out.insert(out.end(), normals.data.begin(), normals.data.end());
    out.insert(out.end(), distance.data.begin(), distance.data.end());
    return out;
}

float radiance_scale(const HemiMap &map) {
    double sum = 0;
    for (int v = 0; v < kMapRes; ++v)
        for (int u = 0; u < kMapRes; ++u) sum += map.rgb(v, u).luminance();
    return static_cast<float>(sum / kMapTexels + kRadianceScaleFloor);
}

HemiMap scale_map(const HemiMap &map, float factor) {
    HemiMap out = map;
    for (float &x : out.data) x *= factor;
    return out;
}

HemiMap normalize_map(const HemiMap &map, float scale) {
    HemiMap out = map;
    for (float &x : out.data) x /= scale;
    return out;
}

HemiMap denormalize_map(const HemiMap &map, float scale) { return scale_map(map, scale); }

InputStack render_input_stack(const Scene &scene, const Vec3 &position, const Frame &frame,
                              const MapRenderOptions &opt, IntegratorStats *stats) {
    InputStack st;
    st.frame = frame;
    st.radiance.frame = st.normals.frame = st.distance.frame = frame;
    Sampler sampler(opt.sampler, opt.seed, opt.stream, kMapTexels);
    HemiMap raw(3, frame);
    float max_dist = 0;
    for (int v = 0; v < kMapRes; ++v) {
        for (int u = 0; u < kMapRes; ++u) {
            sampler.start_sample(static_cast<std::uint32_t>(v * kMapRes + u));
            const Ray ray{position, texel_to_direction(u, v, frame), kRayEpsilon, kInf};
            raw.set_rgb(v, u, li_path(scene, ray, sampler, opt.path, true, stats));
            if (const auto hit = scene.intersect(ray)) {
                const Vec3 n = frame.to_local(hit->facing_normal(ray.direction));
                st.normals.at(0, v, u) = static_cast<float>(n.x);
                st.normals.at(1, v, u) = static_cast<float>(n.y);
                st.normals.at(2, v, u) = static_cast<float>(n.z);
                const float d = static_cast<float>(hit->distance);
                st.distance.at(0, v, u) = d;
                max_dist = std::max(max_dist, d);
            }
        }
    }
    st.s_r = radiance_scale(raw);
    st.radiance = normalize_map(raw, st.s_r);
    st.s_d = max_dist > 0 ? max_dist : 1.f;
    st.distance = normalize_map(st.distance, st.s_d);
    return st;
}

HemiMap render_radiance_map(const Scene &scene, const Vec3 &position, const Frame &frame, int spp,
                            const MapRenderOptions &opt, IntegratorStats *stats) {
    HemiMap map(3, frame);
    const auto count = static_cast<std::uint32_t>(std::max(1, spp));
    for (int v = 0; v < kMapRes; ++v) {
        for (int u = 0; u < kMapRes; ++u) {
            const std::uint64_t texel = static_cast<std::uint64_t>(v * kMapRes + u);
            Sampler sampler(opt.sampler, opt.seed, hash_combine(opt.stream, texel), count);
            const Ray ray{position, texel_to_direction(u, v, frame), kRayEpsilon, kInf};
            Rgb sum;
            for (std::uint32_t s = 0; s < count; ++s) {
                sampler.start_sample(s);
                sum += li_path(scene, ray, sampler, opt.path, true, stats);
            }
            map.set_rgb(v, u, sum / static_cast<double>(count));
        }
    }
    return map;
}

}  // namespace drc
