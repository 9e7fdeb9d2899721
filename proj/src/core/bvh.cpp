// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/bvh.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace drc {

namespace {

constexpr int kBins = 16;
constexpr double kGamma3 = 3.0 * 1.1102230246251565e-16 / (1.0 - 3.0 * 1.1102230246251565e-16);

bool closer(double t, std::uint32_t idx, const std::optional<PrimitiveHit> &best) {
    return !best || t < best->t || (t == best->t && idx < best->index);
}

// Slab test; returns the entry distance or nothing.
std::optional<double> hit_bounds(const Bounds3 &b, const Ray &ray, const Vec3 &inv_dir,
                                 double t_max) {
    double t0 = ray.t_min, t1 = t_max;
    for (int a = 0; a < 3; ++a) {
        double near = (b.lo[a] - ray.origin[a]) * inv_dir[a];
        double far = (b.hi[a] - ray.origin[a]) * inv_dir[a];
        if (std::isnan(near) || std::isnan(far)) continue;  // origin on a slab plane, parallel ray
        if (near > far) std::swap(near, far);
        far *= 1.0 + 2.0 * kGamma3;
        t0 = near > t0 ? near : t0;
        t1 = far < t1 ? far : t1;
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

Bounds3 padded(Bounds3 b) {
    const Vec3 d = b.diagonal();
    const double pad = 1e-9 * std::max({d.x, d.y, d.z, 1.0});
    b.lo -= Vec3{pad, pad, pad};
    b.hi += Vec3{pad, pad, pad};
    return b;
}

}  // namespace

Bvh::Bvh(std::span<const Primitive> prims) {
    if (prims.empty()) return;
    std::vector<Bounds3> prim_bounds(prims.size());
    std::vector<Vec3> centroids(prims.size());
    order_.resize(prims.size());
    for (std::size_t i = 0; i < prims.size(); ++i) {
        prim_bounds[i] = padded(prims[i].bounds());
        centroids[i] = prim_bounds[i].centroid();
        order_[i] = static_cast<std::uint32_t>(i);
    }
    nodes_.reserve(2 * prims.size());
    build(prim_bounds, centroids, 0, static_cast<std::uint32_t>(prims.size()));
}

std::uint32_t Bvh::build(std::vector<Bounds3> &prim_bounds, std::vector<Vec3> &centroids,
                         std::uint32_t begin, std::uint32_t end) {
    const auto node_index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Bounds3 bounds, centroid_bounds;
    for (std::uint32_t i = begin; i < end; ++i) {
        bounds.extend(prim_bounds[order_[i]]);
        centroid_bounds.extend(centroids[order_[i]]);
    }
    nodes_[node_index].bounds = bounds;
    const std::uint32_t n = end - begin;

    auto make_leaf = [&] {
        nodes_[node_index].first = begin;
        nodes_[node_index].count = static_cast<std::uint16_t>(n);
        return node_index;
    };
    if (n <= 1) return make_leaf();

    const int axis = centroid_bounds.max_axis();
    const double lo = centroid_bounds.lo[axis], extent = centroid_bounds.hi[axis] - lo;
    std::uint32_t mid = begin;
    if (extent <= 0) {
        if (n <= kMaxLeafSize) return make_leaf();
        mid = begin + n / 2;
    } else {
        struct Bin {
            Bounds3 bounds;
            int count = 0;
        };
        std::array<Bin, kBins> bins{};
        auto bin_of = [&](std::uint32_t prim) {
            const int b = static_cast<int>(kBins * (centroids[prim][axis] - lo) / extent);
            return std::clamp(b, 0, kBins - 1);
        };
        for (std::uint32_t i = begin; i < end; ++i) {
            Bin &bin = bins[bin_of(order_[i])];
            bin.bounds.extend(prim_bounds[order_[i]]);
            ++bin.count;
        }
        // Sweep to evaluate the SAH cost of every split plane.
        std::array<double, kBins - 1> cost{};
        Bounds3 acc;
        int count = 0;
        for (int i = 0; i < kBins - 1; ++i) {
            acc.extend(bins[i].bounds);
            count += bins[i].count;
            cost[i] = count * acc.surface_area();
        }
        acc = Bounds3{};
        count = 0;
        for (int i = kBins - 1; i > 0; --i) {
            acc.extend(bins[i].bounds);
            count += bins[i].count;
            cost[i - 1] += count * acc.surface_area();
        }
        const int best = static_cast<int>(std::min_element(cost.begin(), cost.end()) - cost.begin());
        const double leaf_cost = n;
        const double split_cost = 0.125 + cost[best] / std::max(bounds.surface_area(), 1e-300);
        if (n <= kMaxLeafSize && leaf_cost <= split_cost) return make_leaf();
        auto it = std::partition(order_.begin() + begin, order_.begin() + end,
                                 [&](std::uint32_t prim) { return bin_of(prim) <= best; });
        mid = static_cast<std::uint32_t>(it - order_.begin());
        if (mid == begin || mid == end) {
            if (n <= kMaxLeafSize) return make_leaf();
            std::nth_element(order_.begin() + begin, order_.begin() + begin + n / 2,
                             order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                                 return centroids[a][axis] < centroids[b][axis];
                             });
            mid = begin + n / 2;
        }
    }
    nodes_[node_index].axis = static_cast<std::uint8_t>(axis);
    build(prim_bounds, centroids, begin, mid);
    nodes_[node_index].first = build(prim_bounds, centroids, mid, end);
    return node_index;
}

std::optional<PrimitiveHit> Bvh::intersect(std::span<const Primitive> prims,
                                           const Ray &ray) const {
    std::optional<PrimitiveHit> best;
    if (nodes_.empty()) return best;
    const Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    std::array<std::uint32_t, 128> stack;
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node &node = nodes_[stack[--sp]];
        const double t_max = best ? best->t : ray.t_max;
        if (!hit_bounds(node.bounds, ray, inv_dir, t_max)) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t idx = order_[i];
                if (auto t = prims[idx].intersect(ray, best ? best->t : ray.t_max);
                    t && closer(*t, idx, best))
                    best = PrimitiveHit{*t, idx};
            }
        } else {
            const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            // Visit the child on the ray's near side first.
            if (ray.direction[node.axis] < 0) {
                stack[sp++] = self + 1;
                stack[sp++] = node.first;
            } else {
                stack[sp++] = node.first;
                stack[sp++] = self + 1;
            }
        }
    }
    return best;
}

bool Bvh::occluded(std::span<const Primitive> prims, const Ray &ray) const {
    if (nodes_.empty()) return false;
    const Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    std::array<std::uint32_t, 128> stack;
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node &node = nodes_[stack[--sp]];
        if (!hit_bounds(node.bounds, ray, inv_dir, ray.t_max)) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                if (prims[order_[i]].intersect(ray, ray.t_max)) return true;
        } else {
            const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            stack[sp++] = node.first;
            stack[sp++] = self + 1;
        }
    }
    return false;
}

int Bvh::depth() const {
    if (nodes_.empty()) return 0;
    std::function<int(std::uint32_t)> walk = [&](std::uint32_t i) -> int {
        const Node &n = nodes_[i];
        if (n.count > 0) return 1;
        return 1 + std::max(walk(i + 1), walk(n.first));
    };
    return walk(0);
}

std::optional<PrimitiveHit> intersect_linear(std::span<const Primitive> prims, const Ray &ray) {
    std::optional<PrimitiveHit> best;
    for (std::uint32_t i = 0; i < prims.size(); ++i)
        if (auto t = prims[i].intersect(ray, best ? best->t : ray.t_max); t && closer(*t, i, best))
            best = PrimitiveHit{*t, i};
    return best;
}

}  // namespace drc
