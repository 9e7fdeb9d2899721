// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "drc/core/geometry.h"

namespace drc {

enum class SamplerKind { independent, stratified };

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);
// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

// Counter-based sample generator. Every value is a pure function of
// (kind, seed, stream, sample index, dimension), so streams can be replayed
// in any order and on any thread.
//
// The stratified kind is a Latin hypercube over `sample_count` samples: each
// dimension is split into sample_count strata and sample i lands in a
// permuted stratum, with a fresh permutation per dimension.
class Sampler {
  public:
    Sampler(SamplerKind kind, std::uint64_t seed, std::uint64_t stream,
            std::uint32_t sample_count = 1);

    void start_sample(std::uint32_t index) {
        index_ = index;
        dim_ = 0;
    }
    double next_1d();
    Vec2 next_2d() {
        const double a = next_1d();
        return {a, next_1d()};
    }

    SamplerKind kind() const { return kind_; }
    std::uint32_t sample_index() const { return index_; }
    std::uint32_t dimension() const { return dim_; }

  private:
    SamplerKind kind_;
    std::uint64_t key_;
    std::uint32_t count_;
    std::uint32_t index_ = 0;
    std::uint32_t dim_ = 0;
};

// Bijective permutation of [0, n) selected by `key`.
std::uint32_t permute_index(std::uint32_t i, std::uint32_t n, std::uint32_t key);

}  // namespace drc
