// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drc/cache/radiance_cache.h"
#include "drc/core/binary_io.h"
#include "drc/core/frame.h"
#include "drc/core/scene_io.h"
#include "drc/dataset/dataset.h"
#include "drc/hemimap/hemimap.h"
#include "drc/metrics/metrics.h"
#include "drc/nn/blur.h"
#include "drc/nn/layers.h"
#include "drc/nn/network.h"
#include "drc/render/image.h"
#include "drc/render/renderer.h"
#include "drc/render/sampler.h"
#include "drc/render/shade_indirect.h"

using namespace drc;
namespace fs = std::filesystem;

namespace {

const std::clock_t g_start = std::clock();

double cpu_seconds() { return static_cast<double>(std::clock() - g_start) / CLOCKS_PER_SEC; }

std::string scene_path(const std::string &name) { return std::string(DRC_SCENE_DIR) + "/" + name; }

// Collects failed sub-checks of one criterion.
struct Check {
    std::vector<std::string> failures;
    std::ostringstream info;

    void expect(bool ok, const std::string &what) {
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

Vec3 random_unit(std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    for (;;) {
        const Vec3 v{n(rng), n(rng), n(rng)};
        const double l = length(v);
        if (l > 1e-6) return v / l;
    }
}

SceneDescription load_description(const std::string &name) {
    const auto bytes = read_file(scene_path(name));
    return parse_scene_description(std::string(bytes.begin(), bytes.end()));
}

// ---------------------------------------------------------------------------

void furnace(Check &c) {
    SceneDescription d;
    d.camera.position = {0, 0, 3};
    d.camera.look_at = {0, 0, 0};
    d.camera.fov = 30;
    d.camera.width = d.camera.height = 64;
    Material m;
    m.name = "grey";
    m.albedo = Rgb(0.5);
    d.materials.push_back(m);
    d.shapes.push_back({SphereShape{{0, 0, 0}, 1.0}, "grey"});
    d.environment = Rgb(1.0);
    const Scene scene(d);

    RenderConfig cfg;
    cfg.spp = 1024;
    cfg.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const RenderResult res = render(scene, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Only pixels whose four corner rays all hit the unit sphere.
    auto hits_sphere = [&](double x, double y) {
        const Ray r = scene.camera_ray(x, y);
        const double b = dot(r.origin, r.direction), disc = b * b - (dot(r.origin, r.origin) - 1);
        return disc > 0;
    };
    double worst = 0, mean = 0;
    int covered = 0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            if (!hits_sphere(x, y) || !hits_sphere(x + 1, y) || !hits_sphere(x, y + 1) || !hits_sphere(x + 1, y + 1))
                continue;
            ++covered;
            const Rgb v = res.image.at(x, y);
            for (double ch : {v.r, v.g, v.b}) worst = std::max(worst, std::abs(ch - 0.5) / 0.5);
            mean += v.g;
        }
    mean /= covered;
    c.info << "pixels=" << covered << " mean=" << fmt(mean) << " worst_rel=" << fmt(worst, 3) << " seconds=" << fmt(secs, 3);
    c.expect(covered > 3000, "sphere covers too few pixels");
    c.expect(worst <= 0.02, "pixel off by more than 2%");
    c.expect(secs < 120, "slower than 2 minutes");
}

void bvh(Check &c) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> pos(-5, 5), rad(0.1, 0.8), origin(-7, 7);
    SceneDescription d;
    Material m;
    m.name = "m";
    d.materials.push_back(m);
    std::vector<std::pair<Vec3, double>> spheres;
    for (int i = 0; i < 100; ++i) {
        const Vec3 center{pos(rng), pos(rng), pos(rng)};
        const double r = rad(rng);
        spheres.emplace_back(center, r);
        d.shapes.push_back({SphereShape{center, r}, "m"});
    }
    const Scene scene(d);
    int hits = 0, mismatches = 0, analytic_mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        const Ray ray{{origin(rng), origin(rng), origin(rng)}, random_unit(rng), 0, kInf};
        const auto a = scene.intersect(ray);
        const auto b = scene.intersect_linear(ray);
        const bool same = a.has_value() == b.has_value() &&
                          (!a || (a->primitive_id == b->primitive_id && a->distance == b->distance &&
                                  a->position == b->position)) &&
                          scene.occluded(ray) == b.has_value();
        mismatches += !same;
        // Closed-form nearest root over all spheres, to confirm the scan itself.
        double best = kInf;
        for (const auto &[center, r] : spheres) {
            const Vec3 oc = ray.origin - center;
            const double bq = dot(oc, ray.direction), cq = dot(oc, oc) - r * r, disc = bq * bq - cq;
            if (disc < 0) continue;
            const double s = std::sqrt(disc);
            for (double t : {-bq - s, -bq + s})
                if (t > 1e-6) {
                    best = std::min(best, t);
                    break;
                }
        }
        if (b) ++hits;
        if ((best < kInf) != b.has_value() || (b && std::abs(best - b->distance) > 1e-6 * (1 + best)))
            ++analytic_mismatches;
    }
    c.info << "rays=10000 shapes=100 hits=" << hits << " mismatches=" << mismatches
           << " analytic_mismatches=" << analytic_mismatches;
    c.expect(mismatches == 0, "BVH differs from linear scan");
    c.expect(analytic_mismatches == 0, "linear scan differs from closed-form spheres");
    c.expect(hits > 500, "too few hits to be meaningful");
}

void map_codec(Check &c) {
    std::mt19937_64 rng(5);
    std::vector<Frame> frames = {Frame{}, build_frame({0, 1, 0}, {0, 1, 0})};
    for (int i = 0; i < 4; ++i) frames.push_back(build_frame(random_unit(rng), {0, 1, 0}));
    int failures = 0;
    for (const Frame &f : frames)
        for (int v = 0; v < kMapRes; ++v)
            for (int u = 0; u < kMapRes; ++u) {
                const auto t = direction_to_texel(texel_to_direction(u, v, f), f);
                if (!t || t->first != u || t->second != v) ++failures;
            }
    c.info << "frames=" << frames.size() << " texels=" << frames.size() * kMapTexels << " failures=" << failures;
    c.expect(failures == 0, "round trip failed");
}

void shade_indirect_check(Check &c) {
    Material diffuse;
    diffuse.albedo = Rgb(0.6);
    const Frame f = build_frame(normalize(Vec3{0.2, 1, 0.1}), {0, 1, 0});
    HemiMap constant(3, f);
    for (float &x : constant.data) x = 2.5f;
    const Vec3 wo = normalize(f.n + f.t * 0.5);
    double worst_const = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Sampler s(SamplerKind::independent, seed, 7);
        const Rgb v = shade_indirect(diffuse, constant, wo, s, 64);
        worst_const = std::max(worst_const, std::abs(v.g - 1.5) / 1.5);
    }

    // Single texel against cosine-weighted hemisphere sampling on a jittered grid.
    Material half;
    half.albedo = Rgb(0.5);
    const Frame g = build_frame(normalize(Vec3{1, 1, 0}), {0, 1, 0});
    HemiMap single(3, g);
    single.set_rgb(14, 9, Rgb(500.0));
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u;
    const int n = 4000;
    double oracle = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double r = std::sqrt((i + u(rng)) / n), phi = 2 * kPi * (j + u(rng)) / n;
            const Vec3 local{r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1 - r * r))};
            const auto t = direction_to_texel(g.to_world(local), g);
            if (t) oracle += 0.5 * single.at(0, t->second, t->first);
        }
    oracle /= static_cast<double>(n) * n;
    Rgb est;
    const int calls = 20000;
    for (int i = 0; i < calls; ++i) {
        Sampler s(SamplerKind::independent, 99, static_cast<std::uint64_t>(i));
        est += shade_indirect(half, single, g.n, s, 16);
    }
    const double single_err = std::abs(est.r / calls - oracle) / oracle;
    c.info << "constant_worst_rel=" << fmt(worst_const, 3) << " single_texel_rel=" << fmt(single_err, 3);
    c.expect(worst_const <= 0.03, "constant map outside 3%");
    c.expect(single_err <= 0.01, "single texel outside 1%");
}

void weights(Check &c) {
    const Vec3 up{0, 1, 0}, side{1, 0, 0};
    CacheEntry e;
    e.px = 10;
    e.py = 10;
    e.normal = up;
    e.indirect_radiance = Rgb(1.0);
    c.expect(entry_weight(e, 10, 10, up, 4) == 2 + 1e-4, "coincident entry");
    c.expect(entry_weight(e, 14, 10, up, 4) == 1e-4, "entry at distance r");
    c.expect(entry_weight(e, 12, 10, side, 4) == 0.5001, "half distance, perpendicular normal");

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0, 1);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 n = random_unit(rng), m = random_unit(rng);
        CacheEntry x;
        x.normal = n;
        const double r = 0.5 + 10 * uni(rng);
        const double d1 = 3 * r * uni(rng), d2 = d1 + r * uni(rng);
        const double a = uni(rng) * 2 * kPi;
        const double w1 = entry_weight(x, d1 * std::cos(a), d1 * std::sin(a), m, r);
        const double w2 = entry_weight(x, d2 * std::cos(a), d2 * std::sin(a), m, r);
        if (w1 < w2 || w2 < kWeightEpsilon) ++violations;
        const Vec3 closer = normalize(m + (n - m) * uni(rng));
        if (dot(closer, n) >= dot(m, n) && entry_weight(x, d1, 0, closer, r) < entry_weight(x, d1, 0, m, r))
            ++violations;
    }
    c.info << "hand_cases=3 configurations=10000 violations=" << violations;
    c.expect(violations == 0, "monotonicity violated");
}

void cnn_goldens(Check &c) {
    double worst = 0;
    auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

    // 3x3 box on a constant: interior c, edge 6c/9, corner 4c/9.
    const float cval = 2.f;
    const Tensor flat(1, 5, 5, cval);
    const Tensor box = conv2d(flat, WeightTensor{{1, 1, 3, 3}, std::vector<float>(9, 1.f / 9.f)}, nullptr);
    track(box.at(0, 2, 2), cval);
    track(box.at(0, 0, 2), 6 * cval / 9);
    track(box.at(0, 0, 0), 4 * cval / 9);

    // Batch norm against its formula.
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<float> sym(-1.f, 1.f), pos(0.1f, 2.f);
    Tensor x(8, 5, 5);
    for (float &v : x.data) v = sym(rng);
    WeightTensor gamma{{8}, {}}, beta{{8}, {}}, mean{{8}, {}}, var{{8}, {}};
    for (int i = 0; i < 8; ++i) {
        gamma.values.push_back(sym(rng));
        beta.values.push_back(sym(rng));
        mean.values.push_back(sym(rng));
        var.values.push_back(pos(rng));
    }
    const Tensor bn = batchnorm_infer(x, gamma, beta, mean, var);
    for (int ch = 0; ch < 8; ++ch)
        for (int p = 0; p < 25; ++p)
            track(bn.data[ch * 25 + p], (x.data[ch * 25 + p] - double(mean.values[ch])) /
                                                std::sqrt(double(var.values[ch]) + 1e-5) * gamma.values[ch] +
                                            beta.values[ch]);

    // Bilinear upsampling of [[0,1],[0,1]] with half-pixel centers.
    Tensor two(1, 2, 2);
    two.data = {0, 1, 0, 1};
    const Tensor up = upsample_bilinear2x2(two);
    const double cols[4] = {0, 0.25, 0.75, 1};
    for (int y = 0; y < 4; ++y)
        for (int xx = 0; xx < 4; ++xx) track(up.at(0, y, xx), cols[xx]);

    // Gaussian blur: an impulse in column 0 leaks into column 31, mass is kept.
    HemiMap impulse(1);
    impulse.at(0, 16, 0) = 1.f;
    const HemiMap blurred = gaussian_blur(impulse, 1.0);
    const auto k = gaussian_kernel(1.0);
    const int r = static_cast<int>(k.size() / 2);
    track(blurred.at(0, 16, 31), k[r - 1] * k[r]);
    track(blurred.at(0, 16, 0), k[r] * k[r]);
    double mass = 0;
    for (float v : blurred.data) mass += v;
    track(mass, 1.0);

    // Zero network gives zero output.
    Tensor in(7, 32, 32);
    for (float &v : in.data) v = sym(rng);
    const Tensor zero = forward(zero_network(64), in);
    bool all_zero = zero.c == 3;
    for (float v : zero.data) all_zero = all_zero && v == 0.f;

    c.info << "max_abs_err=" << fmt(worst, 3) << " zero_network_zero=" << (all_zero ? "yes" : "no");
    c.expect(worst <= 1e-6, "primitive off by more than 1e-6");
    c.expect(all_zero, "zero network produced nonzero output");
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string("\"") + DRC_CLI_PATH + "\" " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Check &c) {
    const fs::path dir = fs::temp_directory_path() / "drc_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string w = (dir / "blur.drcw").string();
    c.expect(run_cli("weights --kind blur --k 12 --out \"" + w + "\"") == 0, "weights command failed");
    const std::string scene = "--scene \"" + scene_path("cornell_box.json") + "\" --seed 17 ";
    const std::vector<std::pair<std::string, std::string>> modes = {
        {"pt", "--mode pt --spp 4"},
        {"direct", "--mode direct --direct-spp 4"},
        {"drc", "--mode drc --weights \"" + w + "\" --direct-spp 2 --mis-samples 4 --r0 8 --indirect-tasks 8"},
    };
    int compared = 0;
    for (const auto &[name, flags] : modes) {
        std::vector<std::vector<std::uint8_t>> outputs;
        for (const char *threads : {"1", "1", "3"}) {
            const std::string out = (dir / (name + std::to_string(outputs.size()) + ".pfm")).string();
            c.expect(run_cli("render " + scene + flags + " --threads " + threads + " --out \"" + out + "\"") == 0,
                     name + " render failed");
            outputs.push_back(fs::exists(out) ? read_file(out) : std::vector<std::uint8_t>{});
        }
        c.expect(!outputs[0].empty() && outputs[0] == outputs[1], name + " differs across runs");
        c.expect(!outputs[0].empty() && outputs[0] == outputs[2], name + " differs across thread counts");
        compared += 2;
    }
    fs::remove_all(dir);
    c.info << "modes=pt,direct,drc comparisons=" << compared;
}

void blur_baseline(Check &c) {
    std::vector<TrainingExample> examples;
    std::uint64_t seed = 0x5eed;
    for (const char *name : {"cornell_box.json", "glossy_box.json", "interior_room.json"}) {
        SceneDescription d = load_description(name);
        d.camera.width = d.camera.height = 64;
        const Scene scene(d);
        DatasetOptions opt;
        opt.grid_x = opt.grid_y = 9;
        opt.ref_spp = 256;
        opt.seed = seed++;
        opt.vary_sampler = false;
        for (auto &e : generate_examples(scene, opt)) examples.push_back(std::move(e));
    }
    double raw_sum = 0, blur_sum = 0;
    int better = 0;
    for (const TrainingExample &e : examples) {
        HemiMap raw(3), ref(3);
        std::copy(e.input.begin(), e.input.begin() + 3 * kMapTexels, raw.data.begin());
        ref.data = e.target;
        float range = 0;
        for (float v : ref.data) range = std::max(range, v);
        if (range <= 0) range = 1;
        const double s_raw = ssim(raw, ref, range), s_blur = ssim(gaussian_blur(raw, 1.0), ref, range);
        raw_sum += s_raw;
        blur_sum += s_blur;
        better += s_blur > s_raw;
    }
    const double n = static_cast<double>(examples.size());
    c.info << "pairs=" << examples.size() << " mean_ssim_raw=" << fmt(raw_sum / n, 4)
           << " mean_ssim_blurred=" << fmt(blur_sum / n, 4) << " blurred_better=" << better;
    c.expect(examples.size() >= 200, "fewer than 200 map pairs");
    c.expect(blur_sum > raw_sum, "blurring did not raise mean SSIM");
}

void task_trend(Check &c) {
    const Scene scene = load_scene(scene_path("interior_room.json"));
    c.expect(scene.camera().width == 128 && scene.camera().height == 128, "interior scene is not 128x128");
    RenderConfig ref_cfg;
    ref_cfg.spp = 2048;
    ref_cfg.seed = 99;
    const Image reference = render(scene, ref_cfg).image;
    const Image8 ref8 = to_display(reference);

    const Network net = blur_stub_network(64);
    std::vector<double> scores;
    RenderResult last;
    for (long tasks : {1L, 2L, 4L, 8L, 16L}) {
        RenderConfig cfg;
        cfg.mode = RenderMode::drc;
        cfg.indirect_tasks = tasks;
        cfg.seed = 3;
        last = render(scene, cfg, &net);
        scores.push_back(ssim(ref8, to_display(last.image)));
        c.info << "ssim@" << tasks << "=" << fmt(scores.back(), 4) << " ";
    }
    for (std::size_t i = 1; i < scores.size(); ++i)
        c.expect(scores[i] >= scores[i - 1], "SSIM decreased between task budgets");

    RenderConfig pt;
    pt.time_budget = last.seconds;
    pt.seed = 3;
    const RenderResult pt_res = render(scene, pt);
    const std::size_t drc_png = png_size_proxy(to_display(last.image));
    const std::size_t pt_png = png_size_proxy(to_display(pt_res.image));
    const double total = cpu_seconds();
    c.info << "drc_seconds=" << fmt(last.seconds, 3) << " pt_spp=" << pt_res.samples << " png_drc=" << drc_png
           << " png_pt=" << pt_png << " ssim_pt=" << fmt(ssim(ref8, to_display(pt_res.image)), 4)
           << " suite_cpu_seconds=" << fmt(total, 4);
    c.expect(drc_png < pt_png, "DRC PNG proxy not below same-time path tracing");
    c.expect(total <= 1800, "suite exceeded 30 CPU minutes");
}

}  // namespace

// Optional arguments restrict the run to the named criteria.
int main(int argc, char **argv) {
    const std::vector<std::string> only(argv + 1, argv + argc);
    const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria = {
        {"furnace", furnace},
        {"bvh_equivalence", bvh},
        {"map_codec_round_trip", map_codec},
        {"shade_indirect_oracles", shade_indirect_check},
        {"weight_suite", weights},
        {"cnn_primitive_goldens", cnn_goldens},
        {"determinism", determinism},
        {"gaussian_blur_baseline", blur_baseline},
        {"task_trend_interior", task_trend},
    };
    int failed = 0, ran = 0;
    for (const auto &[name, fn] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        ++ran;
        Check c;
        const double t0 = cpu_seconds();
        try {
            fn(c);
        } catch (const std::exception &e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        failed += !ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << c.info.str();
        for (const auto &f : c.failures) std::cout << " [" << f << "]";
        std::cout << " cpu=" << fmt(cpu_seconds() - t0, 4) << "s" << std::endl;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << ran - failed << "/" << ran
              << std::endl;
    return failed ? 1 : 0;
}
