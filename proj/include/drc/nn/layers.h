// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "drc/nn/tensor.h"

namespace drc {

inline constexpr float kBatchNormEps = 1e-5f;

// Stride 1, zero padding k/2. Kernel layout (C_out, C_in, k, k), k in {1, 3}.
// `bias` may be null.
Tensor conv2d(const Tensor &input, const WeightTensor &kernel, const WeightTensor *bias);
// Stride 1, padding 1 transposed convolution. Kernel layout (C_in, C_out, 3, 3).
Tensor deconv2d(const Tensor &input, const WeightTensor &kernel, const WeightTensor *bias);
// Re-expresses a transposed 3x3 kernel as the equivalent ordinary convolution.
WeightTensor deconv_as_conv(const WeightTensor &kernel);

Tensor batchnorm_infer(const Tensor &input, const WeightTensor &gamma, const WeightTensor &beta,
                       const WeightTensor &running_mean, const WeightTensor &running_var,
                       float eps = kBatchNormEps);
Tensor leaky_relu(Tensor input, float slope);
Tensor relu(Tensor input);
Tensor maxpool2x2(const Tensor &input);
// Bilinear 2x upsampling with half-pixel centers (align_corners = false).
Tensor upsample_bilinear2x2(const Tensor &input);
// Channel concatenation [a, b].
Tensor concat_channels(const Tensor &a, const Tensor &b);

}  // namespace drc
