// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drc/hemimap/hemimap.h"
#include "drc/render/image.h"

namespace drc {

// Mean absolute difference over all components.
double l1_diff(std::span<const float> a, std::span<const float> b);
double l1_diff(const Image &a, const Image &b);

// Mean local SSIM of one plane: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, dynamic range L, windows fully inside the image only.
double ssim_plane(const float *a, const float *b, int width, int height, double range = 1.0);
// Mean over the three channels.
double ssim(const Image &a, const Image &b, double range = 1.0);
double ssim(const Image8 &a, const Image8 &b);
double ssim(const HemiMap &a, const HemiMap &b, double range);

// Bytes of the PNG encoding; only meaningful for comparisons on one build.
std::size_t png_size_proxy(const Image8 &img);

struct KruskalWallis {
    double h = 0;
    double p = 1;
};
KruskalWallis kruskal_wallis(const std::vector<std::vector<double>> &groups);
// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

}  // namespace drc
