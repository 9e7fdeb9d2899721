// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace drc {

// Activation tensor (channels, height, width), each channel row-major.
struct Tensor {
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<float> data;

    Tensor() = default;
    Tensor(int c_, int h_, int w_, float fill = 0.f)
        : c(c_), h(h_), w(w_), data(static_cast<std::size_t>(c_) * h_ * w_, fill) {}

    std::size_t size() const { return data.size(); }
    float &at(int ch, int y, int x) { return data[(static_cast<std::size_t>(ch) * h + y) * w + x]; }
    float at(int ch, int y, int x) const {
        return data[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    float *channel(int ch) { return data.data() + static_cast<std::size_t>(ch) * h * w; }
    const float *channel(int ch) const { return data.data() + static_cast<std::size_t>(ch) * h * w; }
    bool operator==(const Tensor &) const = default;
};

// Named parameter tensor of arbitrary rank.
struct WeightTensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;

    std::size_t element_count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
    bool operator==(const WeightTensor &) const = default;
};

}  // namespace drc
