// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/cli/cli.h"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "drc/cache/radiance_cache.h"
#include "drc/core/errors.h"
#include "drc/core/scene_io.h"
#include "drc/dataset/dataset.h"
#include "drc/hemimap/montage.h"
#include "drc/metrics/metrics.h"
#include "drc/nn/network.h"
#include "drc/render/image.h"
#include "drc/render/renderer.h"

namespace drc::cli {

namespace {

volatile std::sig_atomic_t g_interrupted = 0;
std::function<void(int)> g_pass_hook;

extern "C" void on_sigint(int) { g_interrupted = 1; }

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_image(const std::string &path, const Image &img, double exposure) {
    if (ends_with(path, ".png"))
        write_png(path, to_display(img, exposure));
    else if (ends_with(path, ".pfm"))
        write_pfm(path, img);
    else
        throw ValidationError("output must end in .pfm or .png: " + path);
}

SamplerKind parse_sampler(const std::string &s) {
    if (s == "independent") return SamplerKind::independent;
    if (s == "stratified") return SamplerKind::stratified;
    throw ValidationError("unknown sampler \"" + s + "\"");
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) parts.push_back(item);
    return parts;
}

struct RenderArgs {
    std::string scene, mode = "pt", weights, out, sampler = "independent", cache_dump;
    int spp = 16, direct_spp = 16, passes = 0, threads = 0, max_depth = 8, mis = 16, r0 = 16, tile = 0;
    long tasks = 16;
    std::uint64_t seed = 0;
    double exposure = 1.0, time_budget = 0;
};

int do_render(const RenderArgs &a, bool tasks_given, bool passes_given, std::ostream &err) {
    RenderConfig cfg;
    cfg.mode = parse_render_mode(a.mode);
    cfg.spp = a.spp;
    cfg.direct_spp = a.direct_spp;
    cfg.indirect_tasks = a.tasks;
    if (passes_given && !tasks_given) cfg.indirect_tasks = 0;
    cfg.passes = a.passes;
    cfg.max_path_depth = a.max_depth;
    cfg.mis_samples = a.mis;
    cfg.r0 = a.r0;
    cfg.tile_size = a.tile;
    cfg.sampler = parse_sampler(a.sampler);
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.time_budget = a.time_budget;
    validate_config(cfg);
    if (cfg.mode == RenderMode::drc && a.weights.empty()) {
        err << "error: --mode drc requires --weights\n";
        return kUsage;
    }
    if (!ends_with(a.out, ".pfm") && !ends_with(a.out, ".png")) {
        err << "error: --out must end in .pfm or .png\n";
        return kUsage;
    }

    const Scene scene = load_scene(a.scene);
    std::optional<Network> net;
    if (cfg.mode == RenderMode::drc) net.emplace(load_weights_file(a.weights));

    install_interrupt_handler();
    const auto on_pass = [&](const PassTelemetry &t, const Image &) {
        err << "pass=" << t.pass;
        if (cfg.mode == RenderMode::drc) err << " r=" << t.spacing << " tasks=" << t.tasks << " entries=" << t.entries;
        err << " seconds=" << std::fixed << std::setprecision(3) << t.seconds << std::defaultfloat << "\n";
        if (g_pass_hook) g_pass_hook(t.pass);
        if (interrupt_requested()) {
            err << "interrupted: finishing after pass " << t.pass << "\n";
            return false;
        }
        return true;
    };
    const RenderResult res = render(scene, cfg, net ? &*net : nullptr, on_pass);
    clear_interrupt();
    write_image(a.out, res.image, a.exposure);
    if (!a.cache_dump.empty()) write_file(a.cache_dump, encode_cache_dump(res.entries));
    err << "done mode=" << render_mode_name(cfg.mode) << " seconds=" << res.seconds
        << " nonfinite=" << res.nonfinite << "\n";
    return kOk;
}

int do_eval(const std::string &ref_path, const std::string &test_path, const std::string &metrics,
            double exposure, std::ostream &out) {
    const Image ref = read_pfm(ref_path), test = read_pfm(test_path);
    if (ref.width != test.width || ref.height != test.height)
        throw ValidationError("reference and test images differ in size");
    const Image8 ref8 = to_display(ref, exposure), test8 = to_display(test, exposure);
    std::vector<std::pair<std::string, std::string>> rows;
    for (const std::string &m : split(metrics, ',')) {
        std::ostringstream v;
        v << std::setprecision(8);
        if (m == "l1")
            v << l1_diff(ref, test);
        else if (m == "ssim")
            v << ssim(ref8, test8);
        else if (m == "pngsize")
            v << png_size_proxy(test8);
        else
            throw ValidationError("unknown metric \"" + m + "\"");
        rows.emplace_back(m, v.str());
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << (i ? " " : "") << rows[i].first << "=" << rows[i].second;
    out << "\n\n";
    out << std::left << std::setw(10) << "metric" << "value\n";
    for (const auto &[k, v] : rows) out << std::left << std::setw(10) << k << v << "\n";
    return kOk;
}

int do_infer(const std::string &weights, const std::string &input, int index, const std::string &out_path,
             const std::string &montage_path) {
    const Network net = load_weights_file(weights);
    const auto examples = read_dataset_file(input);
    if (index < 0 || static_cast<std::size_t>(index) >= examples.size())
        throw ValidationError("--index " + std::to_string(index) + " is out of range (dataset has " +
                              std::to_string(examples.size()) + " examples)");
    Tensor in(kNetInputChannels, kMapRes, kMapRes);
    in.data = examples[index].input;
    const Tensor pred = forward(net, in);
    Image img(kMapRes, kMapRes);
    for (int v = 0; v < kMapRes; ++v)
        for (int u = 0; u < kMapRes; ++u) img.set(u, v, {pred.at(0, v, u), pred.at(1, v, u), pred.at(2, v, u)});
    write_pfm(out_path, img);
    if (!montage_path.empty()) {
        HemiMap pm(3);
        pm.data = pred.data;
        write_png(montage_path, to_display(stack_montage(examples[index].input, &pm)));
    }
    return kOk;
}

}  // namespace

void install_interrupt_handler() { std::signal(SIGINT, on_sigint); }
bool interrupt_requested() { return g_interrupted != 0; }
void clear_interrupt() { g_interrupted = 0; }
void set_pass_hook(std::function<void(int)> hook) { g_pass_hook = std::move(hook); }

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Renderer with a neural radiance cache for indirect light", "drc"};
    app.require_subcommand(1);

    RenderArgs ra;
    CLI::App *render_cmd = app.add_subcommand("render", "Render a scene");
    render_cmd->add_option("--scene", ra.scene, "Scene document")->required();
    render_cmd->add_option("--mode", ra.mode, "pt, direct or drc")->check(CLI::IsMember({"pt", "direct", "drc"}));
    render_cmd->add_option("--spp", ra.spp, "Samples per pixel (pt)");
    render_cmd->add_option("--direct-spp", ra.direct_spp, "Samples per pixel of the direct pass");
    auto *tasks_opt = render_cmd->add_option("--indirect-tasks", ra.tasks, "Indirect task budget");
    auto *passes_opt = render_cmd->add_option("--passes", ra.passes, "Maximum number of passes");
    render_cmd->add_option("--weights", ra.weights, "DRCW network weights (drc)");
    render_cmd->add_option("--seed", ra.seed, "Random seed");
    render_cmd->add_option("--threads", ra.threads, "Worker threads (0 = all cores)");
    render_cmd->add_option("--out", ra.out, "Output .pfm or .png")->required();
    render_cmd->add_option("--exposure", ra.exposure, "Exposure for .png output");
    render_cmd->add_option("--sampler", ra.sampler, "independent or stratified");
    render_cmd->add_option("--max-depth", ra.max_depth, "Maximum path depth");
    render_cmd->add_option("--mis-samples", ra.mis, "Samples per indirect shading");
    render_cmd->add_option("--r0", ra.r0, "Initial cache grid spacing in pixels");
    render_cmd->add_option("--tile-size", ra.tile, "Cache tile edge in pixels (0 = 8 spacings)");
    render_cmd->add_option("--time-budget", ra.time_budget, "Seconds of progressive pt passes");
    render_cmd->add_option("--cache-dump", ra.cache_dump, "Write cache entries (DRCC)");

    std::string ds_scene, ds_grid = "4x4", ds_out, ds_id;
    int ds_ref = 1024, ds_threads = 0, ds_depth = 8;
    std::uint64_t ds_seed = 0;
    CLI::App *dataset_cmd = app.add_subcommand("dataset", "Generate training examples");
    dataset_cmd->add_option("--scene", ds_scene, "Scene document")->required();
    dataset_cmd->add_option("--grid", ds_grid, "Grid as NxM");
    dataset_cmd->add_option("--ref-spp", ds_ref, "Samples per texel of reference maps");
    dataset_cmd->add_option("--seed", ds_seed, "Random seed");
    dataset_cmd->add_option("--threads", ds_threads, "Worker threads");
    dataset_cmd->add_option("--max-depth", ds_depth, "Maximum path depth");
    dataset_cmd->add_option("--scene-id", ds_id, "Scene id stored in each example");
    dataset_cmd->add_option("--out", ds_out, "Output DRCD file")->required();

    std::string ev_ref, ev_test, ev_metrics = "l1,ssim,pngsize";
    double ev_exposure = 1.0;
    CLI::App *eval_cmd = app.add_subcommand("eval", "Compare an image with a reference");
    eval_cmd->add_option("--ref", ev_ref, "Reference PFM")->required();
    eval_cmd->add_option("--test", ev_test, "Test PFM")->required();
    eval_cmd->add_option("--metrics", ev_metrics, "Comma-separated l1, ssim, pngsize");
    eval_cmd->add_option("--exposure", ev_exposure, "Exposure of the display transform");

    std::string in_weights, in_input, in_out, in_montage;
    int in_index = 0;
    CLI::App *infer_cmd = app.add_subcommand("infer", "Run the network on a dataset example");
    infer_cmd->add_option("--weights", in_weights, "DRCW file")->required();
    infer_cmd->add_option("--input", in_input, "DRCD file")->required();
    infer_cmd->add_option("--index", in_index, "Example index");
    infer_cmd->add_option("--out", in_out, "Output 32x32 PFM")->required();
    infer_cmd->add_option("--montage", in_montage, "Also write input maps and prediction as PNG");

    std::string cd_in, cd_out;
    CLI::App *dump_cmd = app.add_subcommand("cachedump", "Convert a cache dump to CSV");
    dump_cmd->add_option("--in", cd_in, "DRCC file")->required();
    dump_cmd->add_option("--out", cd_out, "CSV file")->required();

    std::string w_kind = "blur", w_out;
    int w_k = 64;
    std::uint64_t w_seed = 0;
    CLI::App *weights_cmd = app.add_subcommand("weights", "Write a built-in network");
    weights_cmd->add_option("--kind", w_kind, "zero, random or blur")->check(CLI::IsMember({"zero", "random", "blur"}));
    weights_cmd->add_option("--k", w_k, "Base layer width");
    weights_cmd->add_option("--seed", w_seed, "Seed for random weights");
    weights_cmd->add_option("--out", w_out, "Output DRCW file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*render_cmd) return do_render(ra, tasks_opt->count() > 0, passes_opt->count() > 0, err);
        if (*dataset_cmd) {
            const auto dims = split(ds_grid, 'x');
            if (dims.size() != 2) {
                err << "error: --grid must look like NxM\n";
                return kUsage;
            }
            if (ds_ref < 256) throw ValidationError("--ref-spp must be at least 256");
            DatasetOptions opt;
            opt.grid_x = std::stoi(dims[0]);
            opt.grid_y = std::stoi(dims[1]);
            opt.ref_spp = ds_ref;
            opt.seed = ds_seed;
            opt.threads = ds_threads;
            opt.path.max_depth = ds_depth;
            opt.scene_id = ds_id.empty() ? std::filesystem::path(ds_scene).stem().string() : ds_id;
            const Scene scene = load_scene(ds_scene);
            const auto examples = generate_examples(scene, opt);
            write_file(ds_out, write_dataset(examples));
            err << "wrote " << examples.size() << " examples to " << ds_out << "\n";
            return kOk;
        }
        if (*eval_cmd) return do_eval(ev_ref, ev_test, ev_metrics, ev_exposure, out);
        if (*infer_cmd) return do_infer(in_weights, in_input, in_index, in_out, in_montage);
        if (*dump_cmd) {
            const auto entries = decode_cache_dump(read_file(cd_in));
            const std::string csv = cache_dump_to_csv(entries);
            write_file(cd_out, std::vector<std::uint8_t>(csv.begin(), csv.end()));
            return kOk;
        }
        if (*weights_cmd) {
            const Network net = w_kind == "zero"   ? zero_network(w_k)
                                : w_kind == "random" ? random_network(w_k, w_seed)
                                                     : blur_stub_network(w_k);
            write_file(w_out, save_weights(net));
            return kOk;
        }
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kUsage;
}

int run(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace drc::cli
