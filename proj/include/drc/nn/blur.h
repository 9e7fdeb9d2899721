// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "drc/hemimap/hemimap.h"

namespace drc {

// Normalized Gaussian taps for offsets -r..r with r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur of every channel. Columns wrap around (the azimuth
// is periodic) and rows clamp at the pole and the horizon.
HemiMap gaussian_blur(const HemiMap &map, double sigma = 1.0);

}  // namespace drc
