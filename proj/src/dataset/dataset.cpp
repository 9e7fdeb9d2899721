// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/dataset/dataset.h"

#include <optional>

#include "drc/core/binary_io.h"
#include "drc/core/errors.h"
#include "drc/core/parallel.h"
#include "drc/hemimap/input_stack.h"
#include "drc/render/image.h"

namespace drc {

std::vector<std::uint8_t> write_dataset(const std::vector<TrainingExample> &examples) {
    ByteWriter out;
    out.write_string("DRCD");
    out.write<std::uint32_t>(kDrcdVersion);
    out.write<std::uint32_t>(static_cast<std::uint32_t>(examples.size()));
    out.write<std::uint16_t>(kMapRes);
    for (const TrainingExample &e : examples) {
        if (e.input.size() != 7u * kMapTexels || e.target.size() != 3u * kMapTexels)
            throw ContractError("training example has the wrong number of values");
        out.write<std::uint32_t>(static_cast<std::uint32_t>(e.scene_id.size()));
        out.write_string(e.scene_id);
        out.write<std::uint32_t>(e.px);
        out.write<std::uint32_t>(e.py);
        out.write<float>(e.s_r);
        out.write<float>(e.s_d);
        out.write_floats(e.input.data(), e.input.size());
        out.write_floats(e.target.data(), e.target.size());
    }
    return out.take();
}

std::vector<TrainingExample> read_dataset(const std::vector<std::uint8_t> &bytes) {
    ByteReader in(bytes);
    in.expect_magic("DRCD");
    const std::size_t version_at = in.offset();
    const auto version = in.read<std::uint32_t>("version");
    if (version != kDrcdVersion)
        throw FormatError("unsupported DRCD version " + std::to_string(version), version_at);
    const std::size_t count_at = in.offset();
    const auto count = in.read<std::uint32_t>("example count");
    const std::size_t res_at = in.offset();
    const auto res = in.read<std::uint16_t>("resolution");
    if (res != kMapRes) throw FormatError("map resolution must be 32", res_at);
    constexpr std::size_t kMinRecord = 4 + 8 + 8 + 10 * kMapTexels * sizeof(float);
    if (count > in.remaining() / kMinRecord)
        throw FormatError("example count " + std::to_string(count) + " exceeds file size", count_at);
    std::vector<TrainingExample> out(count);
    for (TrainingExample &e : out) {
        const auto len = in.read<std::uint32_t>("scene id length");
        e.scene_id = in.read_string(len, "scene id");
        e.px = in.read<std::uint32_t>("pixel");
        e.py = in.read<std::uint32_t>("pixel");
        e.s_r = in.read<float>("s_r");
        e.s_d = in.read<float>("s_d");
        in.read_floats(e.input.data(), e.input.size(), "input maps");
        in.read_floats(e.target.data(), e.target.size(), "target map");
    }
    if (in.remaining() != 0)
        throw FormatError("example count does not match file contents", count_at);
    return out;
}

std::vector<TrainingExample> read_dataset_file(const std::string &path) {
    return read_dataset(read_file(path));
}

std::pair<int, int> grid_pixel(int i, int j, int gx, int gy, int width, int height) {
    const int x = static_cast<int>((i + 0.5) * width / gx);
    const int y = static_cast<int>((j + 0.5) * height / gy);
    return {std::min(x, width - 1), std::min(y, height - 1)};
}

std::vector<TrainingExample> generate_examples(const Scene &scene, const DatasetOptions &opt) {
    if (opt.grid_x < 1 || opt.grid_y < 1) throw ValidationError("dataset grid is empty");
    if (opt.ref_spp < 1) throw ValidationError("reference spp must be at least 1");
    const Camera &cam = scene.camera();
    if (opt.grid_x > cam.width || opt.grid_y > cam.height)
        throw ValidationError("dataset grid exceeds the image resolution");

    const std::size_t n = static_cast<std::size_t>(opt.grid_x) * opt.grid_y;
    std::vector<std::optional<TrainingExample>> slots(n);
    parallel_for(n, opt.threads, [&](std::size_t g, int) {
        const int i = static_cast<int>(g % opt.grid_x), j = static_cast<int>(g / opt.grid_x);
        const auto [px, py] = grid_pixel(i, j, opt.grid_x, opt.grid_y, cam.width, cam.height);
        const auto primary = find_primary_intersection(scene, scene.camera_ray(px + 0.5, py + 0.5));
        if (!primary) return;
        const Vec3 normal = primary->hit.facing_normal(-primary->wo);
        const Frame frame = build_frame(normal, scene.global_up());
        const std::uint64_t example_seed = hash_combine(opt.seed, g);
        const std::uint64_t pixel = static_cast<std::uint64_t>(py) * cam.width + px;

        MapRenderOptions in_opt;
        in_opt.sampler = opt.vary_sampler && (g % 2 == 1) ? SamplerKind::stratified
                                                          : SamplerKind::independent;
        in_opt.seed = example_seed;
        in_opt.stream = pixel;
        in_opt.path = opt.path;
        const InputStack stack = render_input_stack(scene, primary->hit.position, frame, in_opt);

        MapRenderOptions ref_opt = in_opt;
        ref_opt.sampler = SamplerKind::independent;
        ref_opt.seed = hash_combine(example_seed, 0x7ef);
        const HemiMap reference =
            render_radiance_map(scene, primary->hit.position, frame, opt.ref_spp, ref_opt);

        TrainingExample e;
        e.input = stack.channels();
        e.target = normalize_map(reference, stack.s_r).data;
        e.s_r = stack.s_r;
        e.s_d = stack.s_d;
        e.scene_id = opt.scene_id;
        e.px = static_cast<std::uint32_t>(px);
        e.py = static_cast<std::uint32_t>(py);
        slots[g] = std::move(e);
    });
    std::vector<TrainingExample> out;
    for (auto &s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

}  // namespace drc
