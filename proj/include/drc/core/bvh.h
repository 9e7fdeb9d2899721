// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "drc/core/ray.h"
#include "drc/core/shapes.h"

namespace drc {

struct PrimitiveHit {
    double t = 0;
    std::uint32_t index = 0;
};

// Bounding-volume hierarchy over a primitive array, built with binned SAH.
// Ties in hit distance resolve to the lowest primitive index, so results match
// a linear scan exactly.
class Bvh {
  public:
    static constexpr int kMaxLeafSize = 4;

    Bvh() = default;
    explicit Bvh(std::span<const Primitive> prims);

    std::optional<PrimitiveHit> intersect(std::span<const Primitive> prims,
                                          const Ray &ray) const;
    bool occluded(std::span<const Primitive> prims, const Ray &ray) const;

    std::size_t node_count() const { return nodes_.size(); }
    int depth() const;

  private:
    struct Node {
        Bounds3 bounds;
        std::uint32_t first = 0;  // leaf: first index into order_; inner: right child
        std::uint16_t count = 0;  // 0 for inner nodes
        std::uint8_t axis = 0;
    };

    std::uint32_t build(std::vector<Bounds3> &prim_bounds, std::vector<Vec3> &centroids,
                        std::uint32_t begin, std::uint32_t end);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
};

// Reference nearest-hit search over every primitive.
std::optional<PrimitiveHit> intersect_linear(std::span<const Primitive> prims, const Ray &ray);

}  // namespace drc
