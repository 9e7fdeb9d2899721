// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "drc/cache/radiance_cache.h"
#include "drc/core/scene.h"
#include "drc/nn/network.h"
#include "drc/render/image.h"
#include "drc/render/sampler.h"

namespace drc {

enum class RenderMode { pt, direct, drc };

RenderMode parse_render_mode(const std::string &s);
const char *render_mode_name(RenderMode m);

struct RenderConfig {
    RenderMode mode = RenderMode::pt;
    int spp = 16;             // path tracing
    int direct_spp = 16;      // direct pass of drc mode, and direct mode
    long indirect_tasks = 16; // total task budget; <= 0 means unlimited
    int passes = 0;           // cap on passes; 0 means no cap
    int max_path_depth = 8;
    int rr_start = 5;
    int mis_samples = 16;
    int map_resolution = 32;
    int r0 = 16;
    int tile_size = 0;        // 0: eight grid spacings per tile edge
    SamplerKind sampler = SamplerKind::independent;
    std::uint64_t seed = 0;
    int threads = 0;          // 0: all logical cores
    double time_budget = 0;   // pt only: keep adding 1-spp passes until this many seconds
};

// Throws ValidationError on an inconsistent configuration.
void validate_config(const RenderConfig &cfg);

struct PassTelemetry {
    int pass = 0;
    int spacing = 0;          // drc only
    std::size_t tasks = 0;
    std::size_t entries = 0;  // total cache entries after the pass
    double seconds = 0;
};

struct RenderResult {
    Image image;
    Image direct;    // drc: the direct layer
    Image indirect;  // drc: the interpolated indirect layer
    std::vector<PassTelemetry> passes;
    std::vector<CacheEntry> entries;
    std::uint64_t nonfinite = 0;
    std::size_t tasks = 0;
    int samples = 0;  // pt: samples per pixel actually taken
    double direct_seconds = 0;
    double seconds = 0;
};

// Called after each pass with the image so far; returning false stops the
// render after that pass.
using PassCallback = std::function<bool(const PassTelemetry &, const Image &)>;

// `net` is required in drc mode.
RenderResult render(const Scene &scene, const RenderConfig &cfg, const Network *net = nullptr,
                    const PassCallback &on_pass = {});

// Camera image of li_direct or li_path, averaged over `spp` samples.
Image render_direct(const Scene &scene, const RenderConfig &cfg, std::uint64_t *nonfinite = nullptr);

}  // namespace drc
