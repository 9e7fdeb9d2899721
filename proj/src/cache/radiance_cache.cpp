// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/cache/radiance_cache.h"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <sstream>

#include "drc/core/binary_io.h"
#include "drc/core/errors.h"
#include "drc/core/parallel.h"
#include "drc/hemimap/input_stack.h"
#include "drc/render/shade_indirect.h"

namespace drc {

int pass_spacing(int pass_index, int r0) {
    if (pass_index >= 30) return 1;
    const int denom = 1 << pass_index;
    return std::max(1, (r0 + denom - 1) / denom);
}

PassPlan plan_pass(int width, int height, int pass_index, int r0, std::uint64_t seed,
                   int tile_size) {
    if (width < 1 || height < 1) throw ContractError("plan_pass on an empty image");
    if (r0 < 1 || tile_size < 1) throw ContractError("plan_pass needs r0 >= 1 and tile_size >= 1");
    PassPlan plan;
    plan.pass_index = pass_index;
    plan.seed = seed;
    plan.spacing = pass_spacing(pass_index, r0);
    const std::uint64_t h = hash_combine(hash_combine(seed, 0x9a55ull), static_cast<std::uint64_t>(pass_index));
    plan.offset_x = static_cast<int>(h % static_cast<std::uint64_t>(plan.spacing));
    plan.offset_y = static_cast<int>((h >> 32) % static_cast<std::uint64_t>(plan.spacing));
    const int r = plan.spacing;
    for (int ty = 0; ty < height; ty += tile_size) {
        for (int tx = 0; tx < width; tx += tile_size) {
            CacheTile tile;
            tile.core = {tx, ty, std::min(width, tx + tile_size), std::min(height, ty + tile_size)};
            tile.margin = {std::max(0, tile.core.x0 - r), std::max(0, tile.core.y0 - r),
                           std::min(width, tile.core.x1 + r), std::min(height, tile.core.y1 + r)};
            // First grid coordinate at or after the tile origin.
            auto first = [r](int origin, int offset) {
                return origin <= offset ? offset : offset + ((origin - offset + r - 1) / r) * r;
            };
            for (int y = first(tile.core.y0, plan.offset_y); y < tile.core.y1; y += r)
                for (int x = first(tile.core.x0, plan.offset_x); x < tile.core.x1; x += r)
                    tile.points.emplace_back(x, y);
            plan.tiles.push_back(std::move(tile));
        }
    }
    return plan;
}

double entry_weight(const CacheEntry &e, double px, double py, const Vec3 &n, double r) {
    const double dist = std::hypot(e.px - px, e.py - py);
    const double wp = std::max(0.0, 1.0 - dist / r);
    const double wn = std::max(0.0, dot(e.normal, n));
    return wp * wn + wp + kWeightEpsilon;
}

std::optional<Rgb> interpolate_indirect(std::span<const CacheEntry *const> entries, int px, int py,
                                        const Vec3 &n, double r) {
    double wsum = 0;
    Rgb acc;
    const double reach2 = 4.0 * r * r;
    for (const CacheEntry *e : entries) {
        const double dx = e->px - px, dy = e->py - py;
        if (dx * dx + dy * dy > reach2) continue;
        const double w = entry_weight(*e, px, py, n, r);
        acc += e->indirect_radiance * w;
        wsum += w;
    }
    if (wsum <= 0) return std::nullopt;
    return acc / wsum;
}

namespace {

constexpr int kBucket = 8;

class EntryGrid {
  public:
    EntryGrid(int width, int height)
        : cols_((width + kBucket - 1) / kBucket), rows_((height + kBucket - 1) / kBucket),
          cells_(static_cast<std::size_t>(cols_) * rows_) {}

    void add(const CacheEntry *e) { cells_[cell(e->px, e->py)].push_back(e); }

    void query(int px, int py, int radius, std::vector<const CacheEntry *> &out) const {
        out.clear();
        const int cx0 = std::max(0, (px - radius) / kBucket), cx1 = std::min(cols_ - 1, (px + radius) / kBucket);
        const int cy0 = std::max(0, (py - radius) / kBucket), cy1 = std::min(rows_ - 1, (py + radius) / kBucket);
        const long r2 = static_cast<long>(radius) * radius;
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx)
                for (const CacheEntry *e : cells_[static_cast<std::size_t>(cy) * cols_ + cx]) {
                    const long dx = e->px - px, dy = e->py - py;
                    if (dx * dx + dy * dy <= r2) out.push_back(e);
                }
    }

  private:
    std::size_t cell(int x, int y) const {
        return static_cast<std::size_t>(y / kBucket) * cols_ + x / kBucket;
    }
    int cols_, rows_;
    std::vector<std::vector<const CacheEntry *>> cells_;
};

}  // namespace

RadianceCache::RadianceCache(const Scene &scene, const Network &net, const CacheConfig &config)
    : scene_(scene), net_(net), cfg_(config), width_(scene.camera().width),
      height_(scene.camera().height), primary_(static_cast<std::size_t>(width_) * height_),
      pixel_spacing_(primary_.size(), INT_MAX), indirect_(width_, height_) {
    if (cfg_.mis_samples < 2) throw ValidationError("mis_samples must be at least 2");
    if (cfg_.r0 < 1) throw ValidationError("r0 must be at least 1");
    parallel_for(static_cast<std::size_t>(height_), cfg_.threads, [&](std::size_t y, int) {
        for (int x = 0; x < width_; ++x)
            primary_[y * width_ + x] =
                find_primary_intersection(scene_, scene_.camera_ray(x + 0.5, y + 0.5));
    });
}

int RadianceCache::tile_size_for(int spacing) const {
    return cfg_.tile_size > 0 ? cfg_.tile_size : 8 * spacing;
}

std::size_t RadianceCache::tasks_in_pass(int pass) const {
    const int r = pass_spacing(pass, cfg_.r0);
    const PassPlan plan = plan_pass(width_, height_, pass, cfg_.r0, cfg_.seed, tile_size_for(r));
    return static_cast<std::size_t>(std::count_if(plan.tiles.begin(), plan.tiles.end(),
                                                  [](const CacheTile &t) { return !t.points.empty(); }));
}

CacheEntry RadianceCache::compute_entry(int px, int py, int pass, std::uint64_t stream_tag,
                                        IntegratorStats *stats) const {
    const PrimaryHit &ph = *primary_[static_cast<std::size_t>(py) * width_ + px];
    const Vec3 n = ph.hit.facing_normal(-ph.wo);
    const Frame frame = build_frame(n, scene_.global_up());
    const std::uint64_t pixel = static_cast<std::uint64_t>(py) * width_ + px;
    const std::uint64_t stream =
        hash_combine(hash_combine(hash_combine(0xcace, stream_tag), static_cast<std::uint64_t>(pass)), pixel);

    MapRenderOptions mopt;
    mopt.sampler = cfg_.sampler;
    mopt.seed = cfg_.seed;
    mopt.stream = stream;
    mopt.path = cfg_.path;
    const InputStack stack = render_input_stack(scene_, ph.hit.position, frame, mopt, stats);

    Tensor input(kNetInputChannels, kMapRes, kMapRes);
    input.data = stack.channels();
    const Tensor out = forward(net_, input);
    HemiMap radmap(3, frame);
    std::copy(out.data.begin(), out.data.end(), radmap.data.begin());
    radmap = denormalize_map(radmap, stack.s_r);

    Sampler sampler(cfg_.sampler, cfg_.seed, hash_combine(stream, 0x5ade), 1);
    sampler.start_sample(0);
    CacheEntry e;
    e.px = px;
    e.py = py;
    e.position = ph.hit.position;
    e.normal = n;
    e.specular_throughput = ph.throughput;
    e.pass = pass;
    e.indirect_radiance = shade_indirect(scene_.material(ph.hit.material_id), radmap, ph.wo,
                                         sampler, cfg_.mis_samples);
    if (!e.indirect_radiance.is_finite()) {
        e.indirect_radiance = Rgb{};
        if (stats) ++stats->nonfinite;
    }
    return e;
}

CacheTelemetry RadianceCache::run_pass(long max_tasks) {
    const auto start = std::chrono::steady_clock::now();
    const int pass = next_pass_++;
    current_pass_ = pass;
    const int r = pass_spacing(pass, cfg_.r0);
    const PassPlan plan = plan_pass(width_, height_, pass, cfg_.r0, cfg_.seed, tile_size_for(r));
    // Tiles without grid points cost nothing and are not tasks.
    std::vector<const CacheTile *> work, idle;
    for (const CacheTile &t : plan.tiles) (t.points.empty() ? idle : work).push_back(&t);
    std::size_t ntasks = work.size();
    if (max_tasks >= 0) ntasks = std::min<std::size_t>(ntasks, static_cast<std::size_t>(max_tasks));
    const bool complete = ntasks == work.size();
    if (complete) work.insert(work.end(), idle.begin(), idle.end());
    else work.resize(ntasks);
    std::vector<std::vector<CacheEntry>> produced(ntasks);
    std::vector<IntegratorStats> stats(ntasks);
    parallel_for(ntasks, cfg_.threads, [&](std::size_t t, int) {
        for (const auto &[x, y] : work[t]->points)
            if (primary_[static_cast<std::size_t>(y) * width_ + x])
                produced[t].push_back(compute_entry(x, y, pass, 0, &stats[t]));
    });
    std::vector<CacheEntry> batch;
    for (std::size_t t = 0; t < ntasks; ++t) {
        batch.insert(batch.end(), produced[t].begin(), produced[t].end());
        nonfinite_ += stats[t].nonfinite;
    }
    for (const CacheTile *tile : work) {
        const PixelRect &core = tile->core;
        for (int y = core.y0; y < core.y1; ++y)
            for (int x = core.x0; x < core.x1; ++x) {
                int &s = pixel_spacing_[static_cast<std::size_t>(y) * width_ + x];
                s = std::min(s, r);
            }
    }
    // Pool order must not depend on how the pass was split into tiles.
    std::stable_sort(batch.begin(), batch.end(), [](const CacheEntry &a, const CacheEntry &b) {
        return a.py != b.py ? a.py < b.py : a.px < b.px;
    });
    entries_.insert(entries_.end(), batch.begin(), batch.end());

    const std::size_t before_fallback = fallback_count_;
    rebuild_indirect();

    CacheTelemetry tel;
    tel.pass = pass;
    tel.spacing = r;
    tel.tasks = ntasks;
    tel.new_entries = batch.size() + (fallback_count_ - before_fallback);
    tel.fallback_entries = fallback_count_ - before_fallback;
    tel.total_entries = entries_.size();
    tel.complete = complete;
    if (tel.complete && r == 1) converged_ = true;
    tel.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return tel;
}

void RadianceCache::rebuild_indirect() {
    // At most one fallback per pixel is appended below; reserving keeps the
    // grid's pointers valid.
    entries_.reserve(entries_.size() + primary_.size());
    EntryGrid grid(width_, height_);
    for (const CacheEntry &e : entries_) grid.add(&e);

    Image layer(width_, height_);
    std::vector<const CacheEntry *> near;
    IntegratorStats stats;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * width_ + x;
            if (!primary_[idx]) continue;
            const int r = pixel_spacing_[idx] == INT_MAX ? cfg_.r0 : pixel_spacing_[idx];
            grid.query(x, y, 2 * r, near);
            if (near.empty()) {
                entries_.push_back(compute_entry(x, y, current_pass_, 1, &stats));
                ++fallback_count_;
                grid.add(&entries_.back());
                near.push_back(&entries_.back());
            }
            const PrimaryHit &ph = *primary_[idx];
            const Vec3 n = ph.hit.facing_normal(-ph.wo);
            const auto value = interpolate_indirect(near, x, y, n, r);
            layer.set(x, y, ph.throughput * value.value_or(Rgb{}));
        }
    }
    nonfinite_ += stats.nonfinite;
    indirect_ = std::move(layer);
}

std::vector<std::uint8_t> encode_cache_dump(const std::vector<CacheEntry> &entries) {
    ByteWriter out;
    out.write_string("DRCC");
    out.write<std::uint32_t>(1);
    out.write<std::uint32_t>(static_cast<std::uint32_t>(entries.size()));
    for (const CacheEntry &e : entries) {
        out.write<std::uint32_t>(static_cast<std::uint32_t>(e.px));
        out.write<std::uint32_t>(static_cast<std::uint32_t>(e.py));
        for (double v : {e.position.x, e.position.y, e.position.z, e.normal.x, e.normal.y, e.normal.z,
                         e.indirect_radiance.r, e.indirect_radiance.g, e.indirect_radiance.b})
            out.write<float>(static_cast<float>(v));
    }
    return out.take();
}

std::vector<CacheEntry> decode_cache_dump(const std::vector<std::uint8_t> &bytes) {
    ByteReader in(bytes);
    in.expect_magic("DRCC");
    const std::size_t version_at = in.offset();
    if (in.read<std::uint32_t>("version") != 1) throw FormatError("unsupported DRCC version", version_at);
    const std::size_t count_at = in.offset();
    const auto count = in.read<std::uint32_t>("entry count");
    if (count > in.remaining() / 44) throw FormatError("entry count exceeds file size", count_at);
    std::vector<CacheEntry> entries(count);
    for (CacheEntry &e : entries) {
        e.px = static_cast<int>(in.read<std::uint32_t>("pixel"));
        e.py = static_cast<int>(in.read<std::uint32_t>("pixel"));
        float f[9];
        in.read_floats(f, 9, "entry values");
        e.position = {f[0], f[1], f[2]};
        e.normal = {f[3], f[4], f[5]};
        e.indirect_radiance = {f[6], f[7], f[8]};
    }
    if (in.remaining() != 0) throw FormatError("trailing bytes after last entry", in.offset());
    return entries;
}

std::string cache_dump_to_csv(const std::vector<CacheEntry> &entries) {
    std::ostringstream os;
    os.precision(9);
    os << "px,py,x,y,z,nx,ny,nz,r,g,b\n";
    for (const CacheEntry &e : entries)
        os << e.px << ',' << e.py << ',' << e.position.x << ',' << e.position.y << ','
           << e.position.z << ',' << e.normal.x << ',' << e.normal.y << ',' << e.normal.z << ','
           << e.indirect_radiance.r << ',' << e.indirect_radiance.g << ',' << e.indirect_radiance.b
           << '\n';
    return os.str();
}

}  // namespace drc
