// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "drc/nn/tensor.h"

namespace drc {

inline constexpr std::uint32_t kDrcwVersion = 1;
inline constexpr int kNetInputChannels = 7;
inline constexpr int kNetOutputChannels = 3;
inline constexpr float kDefaultLeakySlope = 0.01f;

struct TensorSpec {
    std::string name;
    std::vector<std::uint32_t> dims;
};

// Every tensor of the autoencoder with base width k, in file order.
std::vector<TensorSpec> canonical_tensors(int k);

// Convolutional autoencoder with three pooling stages, a 4x4 bottleneck and
// three upsampling stages joined to the encoder by channel concatenation.
// Immutable once built; forward is reentrant.
class Network {
  public:
    // Validates `tensors` against the canonical table for the base width
    // implied by enc1.conv1.weight.
    Network(std::map<std::string, WeightTensor> tensors, float leaky_slope);

    int base_width() const { return k_; }
    float leaky_slope() const { return slope_; }
    const std::map<std::string, WeightTensor> &tensors() const { return tensors_; }
    const WeightTensor &tensor(const std::string &name) const;

  private:
    friend struct NetworkRunner;
    int k_ = 0;
    float slope_ = kDefaultLeakySlope;
    std::map<std::string, WeightTensor> tensors_;
    // Transposed kernels rewritten as ordinary convolutions, keyed like tensors_.
    std::map<std::string, WeightTensor> deconv_kernels_;
};

// input (7, 32, 32) -> output (3, 32, 32), all outputs >= 0.
Tensor forward(const Network &net, const Tensor &input);

// DRCW container.
Network load_weights(const std::vector<std::uint8_t> &bytes);
Network load_weights_file(const std::string &path);
std::vector<std::uint8_t> save_weights(const Network &net);

// All weights and biases zero, batch-norm statistics mean 0 and variance 1.
Network zero_network(int k);
// Reproducible random weights with activations of moderate size.
Network random_network(int k, std::uint64_t seed);
// Hand-set weights that pass the radiance channels through two 3x3 binomial
// blurs and ignore everything else.
Network blur_stub_network(int k = 64);

}  // namespace drc
