// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/nn/blur.h"

#include <algorithm>
#include <cmath>

#include "drc/core/errors.h"

namespace drc {

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0)) throw ContractError("blur sigma must be positive");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * r + 1);
    double sum = 0;
    for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (double &v : k) v /= sum;
    return k;
}

HemiMap gaussian_blur(const HemiMap &map, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    HemiMap tmp = map, out = map;
    for (int c = 0; c < map.channels; ++c) {
        for (int v = 0; v < kMapRes; ++v)
            for (int u = 0; u < kMapRes; ++u) {
                double acc = 0;
                for (int i = -r; i <= r; ++i) {
                    const int su = ((u + i) % kMapRes + kMapRes) % kMapRes;
                    acc += k[i + r] * map.at(c, v, su);
                }
                tmp.at(c, v, u) = static_cast<float>(acc);
            }
        for (int v = 0; v < kMapRes; ++v)
            for (int u = 0; u < kMapRes; ++u) {
                double acc = 0;
                for (int i = -r; i <= r; ++i)
                    acc += k[i + r] * tmp.at(c, std::clamp(v + i, 0, kMapRes - 1), u);
                out.at(c, v, u) = static_cast<float>(acc);
            }
    }
    return out;
}

}  // namespace drc
