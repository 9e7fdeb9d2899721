// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/render/sampler.h"

namespace drc {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x632be59bd9b4e019ull + (a << 6) + (a >> 2)));
}

// Kensler, "Correlated Multi-Jittered Sampling", 2013.
std::uint32_t permute_index(std::uint32_t i, std::uint32_t l, std::uint32_t p) {
    if (l <= 1) return 0;
    std::uint32_t w = l - 1;
    w |= w >> 1;
    w |= w >> 2;
    w |= w >> 4;
    w |= w >> 8;
    w |= w >> 16;
    do {
        i ^= p;
        i *= 0xe170893d;
        i ^= p >> 16;
        i ^= (i & w) >> 4;
        i ^= p >> 8;
        i *= 0x0929eb3f;
        i ^= p >> 23;
        i ^= (i & w) >> 1;
        i *= 1 | p >> 27;
        i *= 0x6935fa69;
        i ^= (i & w) >> 11;
        i *= 0x74dcb303;
        i ^= (i & w) >> 2;
        i *= 0x9e501cc3;
        i ^= (i & w) >> 2;
        i *= 0xc860a3df;
        i &= w;
        i ^= i >> 5;
    } while (i >= l);
    return (i + p) % l;
}

Sampler::Sampler(SamplerKind kind, std::uint64_t seed, std::uint64_t stream,
                 std::uint32_t sample_count)
    : kind_(kind), key_(hash_combine(seed, stream)), count_(sample_count < 1 ? 1 : sample_count) {}

double Sampler::next_1d() {
    const std::uint32_t d = dim_++;
    const std::uint64_t dim_key = hash_combine(key_, d);
    const std::uint64_t h = hash_combine(dim_key, index_);
    if (kind_ == SamplerKind::independent || count_ == 1 || index_ >= count_) return to_unit(h);
    const std::uint32_t stratum =
        permute_index(index_, count_, static_cast<std::uint32_t>(dim_key >> 32));
    const double v = (stratum + to_unit(h)) / count_;
    return v < 1.0 ? v : 0x1.fffffffffffffp-1;
}

}  // namespace drc
