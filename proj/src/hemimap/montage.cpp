// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/hemimap/montage.h"

#include <algorithm>

#include "drc/core/errors.h"

namespace drc {

Image montage(const std::vector<MontagePanel> &panels) {
    Image img(kMapRes * static_cast<int>(panels.size()), kMapRes);
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const HemiMap &m = *panels[p].map;
        for (int v = 0; v < kMapRes; ++v) {
            for (int u = 0; u < kMapRes; ++u) {
                Rgb c;
                for (int ch = 0; ch < 3; ++ch) c[ch] = m.at(std::min(ch, m.channels - 1), v, u);
                if (panels[p].signed_values) c = c * 0.5 + Rgb(0.5);
                img.set(static_cast<int>(p) * kMapRes + u, v, c);
            }
        }
    }
    return img;
}

Image stack_montage(const std::vector<float> &channels, const HemiMap *prediction) {
    if (channels.size() != 7 * static_cast<std::size_t>(kMapTexels))
        throw ContractError("input stack must hold 7 channels of 32x32 values");
    HemiMap radiance(3), normals(3), distance(1);
    const auto begin = channels.begin();
    std::copy(begin, begin + 3 * kMapTexels, radiance.data.begin());
    std::copy(begin + 3 * kMapTexels, begin + 6 * kMapTexels, normals.data.begin());
    std::copy(begin + 6 * kMapTexels, channels.end(), distance.data.begin());
    std::vector<MontagePanel> panels{{&radiance, false}, {&normals, true}, {&distance, false}};
    if (prediction) panels.push_back({prediction, false});
    return montage(panels);
}

}  // namespace drc
