// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "drc/hemimap/hemimap.h"
#include "drc/render/image.h"

namespace drc {

// Side-by-side debug view of 32x32 maps. Signed panels (normals) are shown
// as n * 0.5 + 0.5; single-channel panels are replicated to grey.
struct MontagePanel {
    const HemiMap *map = nullptr;
    bool signed_values = false;
};

Image montage(const std::vector<MontagePanel> &panels);

// Radiance, normals and distance of a 7-channel input stack, followed by
// `prediction` when given.
Image stack_montage(const std::vector<float> &channels, const HemiMap *prediction = nullptr);

}  // namespace drc
