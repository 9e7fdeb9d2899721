// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drc/core/scene.h"
#include "drc/hemimap/hemimap.h"
#include "drc/render/integrators.h"

namespace drc {

inline constexpr std::uint32_t kDrcdVersion = 1;

// One network input stack and its reference map. Both radiance blocks are
// divided by the same s_r, so target * s_r is physical radiance.
struct TrainingExample {
    std::vector<float> input = std::vector<float>(7 * kMapTexels, 0.f);
    std::vector<float> target = std::vector<float>(3 * kMapTexels, 0.f);
    float s_r = 1.f;
    float s_d = 1.f;
    std::string scene_id;
    std::uint32_t px = 0;
    std::uint32_t py = 0;

    bool operator==(const TrainingExample &) const = default;
};

std::vector<std::uint8_t> write_dataset(const std::vector<TrainingExample> &examples);
std::vector<TrainingExample> read_dataset(const std::vector<std::uint8_t> &bytes);
std::vector<TrainingExample> read_dataset_file(const std::string &path);

struct DatasetOptions {
    int grid_x = 4;
    int grid_y = 4;
    int ref_spp = 1024;
    std::uint64_t seed = 0;
    bool vary_sampler = true;  // alternate independent and stratified inputs
    PathOptions path;
    int threads = 0;
    std::string scene_id;
};

// Camera pixel of grid cell (i, j): the cell center, rounded down.
std::pair<int, int> grid_pixel(int i, int j, int grid_x, int grid_y, int width, int height);

// One example per grid cell whose camera ray reaches a non-specular surface,
// in row-major grid order.
std::vector<TrainingExample> generate_examples(const Scene &scene, const DatasetOptions &opt);

}  // namespace drc
