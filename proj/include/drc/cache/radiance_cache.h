// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drc/core/scene.h"
#include "drc/nn/network.h"
#include "drc/render/image.h"
#include "drc/render/integrators.h"
#include "drc/render/sampler.h"

namespace drc {

inline constexpr double kWeightEpsilon = 1e-4;

struct CacheEntry {
    int px = 0;
    int py = 0;
    Vec3 position;
    Vec3 normal;  // unit, on the side of the camera
    Rgb indirect_radiance;
    Rgb specular_throughput{1.0};
    int pass = 0;
};

// Half-open pixel rectangle.
struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    int area() const { return (x1 - x0) * (y1 - y0); }
};

struct CacheTile {
    PixelRect core;     // pixels owned by the tile
    PixelRect margin;   // core grown by the grid spacing
    std::vector<std::pair<int, int>> points;  // grid points inside the core
};

struct PassPlan {
    int pass_index = 0;
    int spacing = 1;
    int offset_x = 0;
    int offset_y = 0;
    std::uint64_t seed = 0;
    std::vector<CacheTile> tiles;
};

// Grid spacing of pass k: max(1, ceil(r0 / 2^k)).
int pass_spacing(int pass_index, int r0);
PassPlan plan_pass(int width, int height, int pass_index, int r0 = 16, std::uint64_t seed = 0,
                   int tile_size = 64);

// w = w_p * w_n + w_p + eps, where w_p falls linearly from 1 at the entry to 0
// at distance r (in pixels) and w_n is the clamped cosine between normals.
double entry_weight(const CacheEntry &entry, double px, double py, const Vec3 &pixel_normal,
                    double r);

// Normalized weighted average of the entries within 2r, or nothing if none are.
std::optional<Rgb> interpolate_indirect(std::span<const CacheEntry *const> entries, int px, int py,
                                        const Vec3 &pixel_normal, double r);

struct CacheConfig {
    int r0 = 16;
    int tile_size = 0;  // 0: eight grid spacings per tile edge
    int mis_samples = 16;
    PathOptions path;
    SamplerKind sampler = SamplerKind::independent;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct CacheTelemetry {
    int pass = 0;
    int spacing = 0;
    std::size_t tasks = 0;
    std::size_t new_entries = 0;
    std::size_t fallback_entries = 0;
    std::size_t total_entries = 0;
    bool complete = false;
    double seconds = 0;
};

// Progressive image-space radiance cache. Entries are appended, never
// removed, and every pass rebuilds the indirect layer from all of them.
class RadianceCache {
  public:
    RadianceCache(const Scene &scene, const Network &net, const CacheConfig &config);

    // Runs the first `max_tasks` tiles of the next pass (all of them when
    // max_tasks is negative) and rebuilds the indirect layer.
    CacheTelemetry run_pass(long max_tasks = -1);

    int next_pass() const { return next_pass_; }
    std::size_t tasks_in_pass(int pass) const;
    // True once a pass at spacing 1 has completed; later passes add nothing.
    bool converged() const { return converged_; }

    const Image &indirect() const { return indirect_; }
    const std::vector<CacheEntry> &entries() const { return entries_; }
    const std::vector<std::optional<PrimaryHit>> &primary_hits() const { return primary_; }
    std::uint64_t nonfinite() const { return nonfinite_; }

    // Indirect radiance leaving a primary hit, from one predicted map.
    CacheEntry compute_entry(int px, int py, int pass, std::uint64_t stream_tag,
                             IntegratorStats *stats) const;

  private:
    int tile_size_for(int spacing) const;
    void rebuild_indirect();

    const Scene &scene_;
    const Network &net_;
    CacheConfig cfg_;
    int width_, height_;
    std::vector<std::optional<PrimaryHit>> primary_;
    std::vector<CacheEntry> entries_;
    std::vector<int> pixel_spacing_;
    Image indirect_;
    int next_pass_ = 0;
    int current_pass_ = 0;
    bool converged_ = false;
    std::size_t fallback_count_ = 0;
    std::uint64_t nonfinite_ = 0;
};

// Diagnostics dump: "DRCC", u32 version, u32 count, then per entry
// 2 x u32 pixel, 3 x f32 position, 3 x f32 normal, 3 x f32 radiance.
std::vector<std::uint8_t> encode_cache_dump(const std::vector<CacheEntry> &entries);
std::vector<CacheEntry> decode_cache_dump(const std::vector<std::uint8_t> &bytes);
std::string cache_dump_to_csv(const std::vector<CacheEntry> &entries);

}  // namespace drc
