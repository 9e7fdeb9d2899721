// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/metrics/metrics.h"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "drc/core/errors.h"

namespace drc {

double l1_diff(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw ValidationError("l1_diff of differently sized data");
    if (a.empty()) return 0;
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(static_cast<double>(a[i]) - b[i]);
    return sum / static_cast<double>(a.size());
}

double l1_diff(const Image &a, const Image &b) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("l1_diff of images with different sizes");
    return l1_diff(a.data, b.data);
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> window_taps() {
    std::array<double, kWindow> k{};
    double sum = 0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        sum += k[i] = std::exp(-d * d / (2 * kSigma * kSigma));
    }
    for (double &v : k) v /= sum;
    return k;
}

// Separable valid-mode filter of a w x h plane.
std::vector<double> filter_valid(const std::vector<double> &src, int w, int h) {
    static const auto k = window_taps();
    const int ow = w - kWindow + 1, oh = h - kWindow + 1;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0;
            for (int i = 0; i < kWindow; ++i) acc += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0;
            for (int i = 0; i < kWindow; ++i) acc += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    return out;
}

}  // namespace

double ssim_plane(const float *a, const float *b, int w, int h, double range) {
    if (w < kWindow || h < kWindow) throw ValidationError("ssim needs images of at least 11x11");
    const double c1 = (0.01 * range) * (0.01 * range), c2 = (0.03 * range) * (0.03 * range);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<double> pa(n), pb(n), aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        pa[i] = a[i];
        pb[i] = b[i];
        aa[i] = pa[i] * pa[i];
        bb[i] = pb[i] * pb[i];
        ab[i] = pa[i] * pb[i];
    }
    const auto mu_a = filter_valid(pa, w, h), mu_b = filter_valid(pb, w, h);
    const auto s_aa = filter_valid(aa, w, h), s_bb = filter_valid(bb, w, h), s_ab = filter_valid(ab, w, h);
    double sum = 0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = s_aa[i] - ma * ma, vb = s_bb[i] - mb * mb, cov = s_ab[i] - ma * mb;
        sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return sum / static_cast<double>(mu_a.size());
}

namespace {

std::vector<float> plane_of(const std::vector<float> &interleaved, int c, std::size_t n) {
    std::vector<float> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = interleaved[i * 3 + c];
    return p;
}

}  // namespace

double ssim(const Image &a, const Image &b, double range) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("ssim of images with different sizes");
    double sum = 0;
    for (int c = 0; c < 3; ++c) {
        const auto pa = plane_of(a.data, c, a.pixel_count()), pb = plane_of(b.data, c, b.pixel_count());
        sum += ssim_plane(pa.data(), pb.data(), a.width, a.height, range);
    }
    return sum / 3.0;
}

double ssim(const Image8 &a, const Image8 &b) {
    Image fa(a.width, a.height), fb(b.width, b.height);
    if (a.data.size() != fa.data.size() || b.data.size() != fb.data.size())
        throw ValidationError("8-bit image has the wrong number of values");
    for (std::size_t i = 0; i < a.data.size(); ++i) fa.data[i] = a.data[i];
    for (std::size_t i = 0; i < b.data.size(); ++i) fb.data[i] = b.data[i];
    return ssim(fa, fb, 255.0);
}

double ssim(const HemiMap &a, const HemiMap &b, double range) {
    if (a.channels != b.channels) throw ValidationError("ssim of maps with different channels");
    double sum = 0;
    for (int c = 0; c < a.channels; ++c)
        sum += ssim_plane(&a.data[HemiMap::index(c, 0, 0)], &b.data[HemiMap::index(c, 0, 0)],
                          kMapRes, kMapRes, range);
    return sum / a.channels;
}

std::size_t png_size_proxy(const Image8 &img) { return encode_png(img).size(); }

double chi_square_sf(double x, double df) {
    if (!(df > 0)) throw ContractError("chi-square needs positive degrees of freedom");
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

KruskalWallis kruskal_wallis(const std::vector<std::vector<double>> &groups) {
    if (groups.size() < 2) throw ContractError("kruskal_wallis needs at least two groups");
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw ContractError("kruskal_wallis group is empty");
        for (double v : groups[g]) all.emplace_back(v, g);
    }
    const double n = static_cast<double>(all.size());
    if (all.size() < 3) throw ContractError("kruskal_wallis needs at least three values");
    std::sort(all.begin(), all.end());
    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_term = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) rank_sum[all[k].second] += avg;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double correction = 1.0 - tie_term / (n * n * n - n);
    KruskalWallis out;
    if (correction <= 0) return out;  // every value identical
    double s = 0;
    for (std::size_t g = 0; g < groups.size(); ++g)
        s += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
    out.h = std::max(0.0, (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / correction);
    out.p = chi_square_sf(out.h, static_cast<double>(groups.size() - 1));
    return out;
}

}  // namespace drc
