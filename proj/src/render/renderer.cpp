// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/render/renderer.h"

#include <chrono>

#include "drc/core/errors.h"
#include "drc/core/parallel.h"
#include "drc/render/integrators.h"

namespace drc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

constexpr std::uint64_t kDirectStream = 0xd1;
constexpr std::uint64_t kPathStream = 0x9a;

std::uint64_t pixel_stream(std::uint64_t tag, int x, int y, int width) {
    return hash_combine(tag, static_cast<std::uint64_t>(y) * width + x);
}

}  // namespace

RenderMode parse_render_mode(const std::string &s) {
    if (s == "pt") return RenderMode::pt;
    if (s == "direct") return RenderMode::direct;
    if (s == "drc") return RenderMode::drc;
    throw ValidationError("unknown render mode \"" + s + "\"");
}

const char *render_mode_name(RenderMode m) {
    switch (m) {
    case RenderMode::pt: return "pt";
    case RenderMode::direct: return "direct";
    case RenderMode::drc: return "drc";
    }
    return "pt";
}

void validate_config(const RenderConfig &c) {
    if (c.spp < 1 || c.direct_spp < 1) throw ValidationError("sample counts must be at least 1");
    if (c.max_path_depth < 1) throw ValidationError("max path depth must be at least 1");
    if (c.rr_start < 1) throw ValidationError("russian roulette start depth must be at least 1");
    if (c.mis_samples < 2) throw ValidationError("mis samples must be at least 2");
    if (c.map_resolution != 32) throw ValidationError("map resolution is fixed at 32");
    if (c.r0 < 1) throw ValidationError("initial grid spacing must be at least 1");
    if (c.passes < 0) throw ValidationError("passes must not be negative");
    if (c.tile_size < 0) throw ValidationError("tile size must not be negative");
    if (c.time_budget < 0) throw ValidationError("time budget must not be negative");
}

Image render_direct(const Scene &scene, const RenderConfig &cfg, std::uint64_t *nonfinite) {
    const Camera &cam = scene.camera();
    Image img(cam.width, cam.height);
    std::vector<std::uint64_t> bad(cam.height, 0);
    parallel_for(static_cast<std::size_t>(cam.height), cfg.threads, [&](std::size_t yy, int) {
        const int y = static_cast<int>(yy);
        IntegratorStats stats;
        for (int x = 0; x < cam.width; ++x) {
            Sampler sampler(cfg.sampler, cfg.seed, pixel_stream(kDirectStream, x, y, cam.width),
                            static_cast<std::uint32_t>(cfg.direct_spp));
            Rgb sum;
            for (int s = 0; s < cfg.direct_spp; ++s) {
                sampler.start_sample(static_cast<std::uint32_t>(s));
                const Vec2 j = sampler.next_2d();
                sum += li_direct(scene, scene.camera_ray(x + j.x, y + j.y), sampler, &stats);
            }
            img.set(x, y, sum / cfg.direct_spp);
        }
        bad[y] = stats.nonfinite;
    });
    if (nonfinite)
        for (auto b : bad) *nonfinite += b;
    return img;
}

namespace {

RenderResult render_pt(const Scene &scene, const RenderConfig &cfg, const PassCallback &on_pass) {
    const auto start = Clock::now();
    const Camera &cam = scene.camera();
    const std::size_t n = static_cast<std::size_t>(cam.width) * cam.height;
    std::vector<Rgb> accum(n);
    PathOptions opt{cfg.max_path_depth, cfg.rr_start};
    RenderResult res;
    res.image = Image(cam.width, cam.height);
    const bool budgeted = cfg.time_budget > 0;
    const int target = budgeted ? INT32_MAX : cfg.spp;
    // One sample per pixel per pass so the render can stop at any pass.
    for (int s = 0; s < target; ++s) {
        const auto pass_start = Clock::now();
        std::vector<std::uint64_t> bad(cam.height, 0);
        parallel_for(static_cast<std::size_t>(cam.height), cfg.threads, [&](std::size_t yy, int) {
            const int y = static_cast<int>(yy);
            IntegratorStats stats;
            for (int x = 0; x < cam.width; ++x) {
                Sampler sampler(cfg.sampler, cfg.seed, pixel_stream(kPathStream, x, y, cam.width),
                                static_cast<std::uint32_t>(cfg.spp));
                sampler.start_sample(static_cast<std::uint32_t>(s));
                const Vec2 j = sampler.next_2d();
                accum[yy * cam.width + x] +=
                    li_path(scene, scene.camera_ray(x + j.x, y + j.y), sampler, opt, false, &stats);
            }
            bad[y] = stats.nonfinite;
        });
        for (auto b : bad) res.nonfinite += b;
        res.samples = s + 1;
        for (std::size_t i = 0; i < n; ++i)
            res.image.set(static_cast<int>(i % cam.width), static_cast<int>(i / cam.width),
                          accum[i] / res.samples);
        PassTelemetry t{s, 0, static_cast<std::size_t>(cam.height), 0, seconds_since(pass_start)};
        res.passes.push_back(t);
        if (on_pass && !on_pass(t, res.image)) break;
        if (budgeted && seconds_since(start) >= cfg.time_budget) break;
    }
    res.seconds = seconds_since(start);
    return res;
}

}  // namespace

RenderResult render(const Scene &scene, const RenderConfig &cfg, const Network *net,
                    const PassCallback &on_pass) {
    validate_config(cfg);
    if (scene.camera().width < 1 || scene.camera().height < 1)
        throw ValidationError("camera resolution must be at least 1x1");
    if (cfg.mode == RenderMode::pt) return render_pt(scene, cfg, on_pass);

    const auto start = Clock::now();
    RenderResult res;
    res.direct = render_direct(scene, cfg, &res.nonfinite);
    res.direct_seconds = seconds_since(start);
    if (cfg.mode == RenderMode::direct) {
        res.image = res.direct;
        res.samples = cfg.direct_spp;
        res.seconds = res.direct_seconds;
        return res;
    }
    if (!net) throw ValidationError("drc mode requires a weights file");

    CacheConfig cc;
    cc.r0 = cfg.r0;
    cc.tile_size = cfg.tile_size;
    cc.mis_samples = cfg.mis_samples;
    cc.path = PathOptions{cfg.max_path_depth, cfg.rr_start};
    cc.sampler = cfg.sampler;
    cc.seed = cfg.seed;
    cc.threads = cfg.threads;
    RadianceCache cache(scene, *net, cc);

    auto compose = [&]() {
        Image img = res.direct;
        const Image &ind = cache.indirect();
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] += ind.data[i];
        return img;
    };

    const bool unlimited = cfg.indirect_tasks <= 0;
    long budget = cfg.indirect_tasks;
    for (int pass = 0;; ++pass) {
        if (cfg.passes > 0 && pass >= cfg.passes) break;
        if (cache.converged()) break;
        long allowed = -1;
        if (!unlimited) {
            // The first pass always runs in full so every pixel has entries nearby.
            if (pass > 0) {
                if (budget <= 0) break;
                allowed = budget;
            }
        }
        const CacheTelemetry ct = cache.run_pass(allowed);
        budget -= static_cast<long>(ct.tasks);
        res.tasks += ct.tasks;
        PassTelemetry t{ct.pass, ct.spacing, ct.tasks, ct.total_entries, ct.seconds};
        res.passes.push_back(t);
        if (on_pass && !on_pass(t, compose())) break;
    }
    res.indirect = cache.indirect();
    res.image = compose();
    res.entries = cache.entries();
    res.nonfinite += cache.nonfinite();
    res.seconds = seconds_since(start);
    return res;
}

}  // namespace drc
