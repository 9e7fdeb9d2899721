// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/nn/layers.h"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

#include "drc/core/errors.h"

namespace drc {

namespace {

using RowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_shape(bool ok, const std::string &msg) {
    if (!ok) throw ValidationError(msg);
}

void check_param(const WeightTensor &t, int c, const char *name) {
    require_shape(t.dims.size() == 1 && static_cast<int>(t.dims[0]) == c,
                  std::string(name) + " must have one value per channel");
}

}  // namespace

Tensor conv2d(const Tensor &in, const WeightTensor &kernel, const WeightTensor *bias) {
    require_shape(kernel.dims.size() == 4, "conv kernel must be rank 4");
    const int cout = static_cast<int>(kernel.dims[0]);
    const int cin = static_cast<int>(kernel.dims[1]);
    const int k = static_cast<int>(kernel.dims[2]);
    require_shape(static_cast<int>(kernel.dims[3]) == k && (k == 1 || k == 3),
                  "conv kernel must be 1x1 or 3x3");
    require_shape(cin == in.c, "conv expects " + std::to_string(cin) + " input channels, got " +
                                   std::to_string(in.c));
    if (bias) check_param(*bias, cout, "conv bias");

    const int hw = in.h * in.w;
    const int rows = cin * k * k;
    Tensor out(cout, in.h, in.w);
    Eigen::Map<const RowMatrix> wmat(kernel.values.data(), cout, rows);
    Eigen::Map<RowMatrix> omat(out.data.data(), cout, hw);
    if (k == 1) {
        Eigen::Map<const RowMatrix> imat(in.data.data(), cin, hw);
        omat.noalias() = wmat * imat;
    } else {
        RowMatrix col(rows, hw);
        const int pad = k / 2;
        for (int ci = 0; ci < cin; ++ci) {
            const float *src = in.channel(ci);
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    float *dst = col.data() + static_cast<std::size_t>((ci * k + ky) * k + kx) * hw;
                    for (int y = 0; y < in.h; ++y) {
                        const int sy = y + ky - pad;
                        float *row = dst + y * in.w;
                        if (sy < 0 || sy >= in.h) {
                            std::fill(row, row + in.w, 0.f);
                            continue;
                        }
                        const float *srow = src + sy * in.w;
                        for (int x = 0; x < in.w; ++x) {
                            const int sx = x + kx - pad;
                            row[x] = (sx >= 0 && sx < in.w) ? srow[sx] : 0.f;
                        }
                    }
                }
            }
        }
        omat.noalias() = wmat * col;
    }
    if (bias)
        for (int o = 0; o < cout; ++o) omat.row(o).array() += bias->values[o];
    return out;
}

WeightTensor deconv_as_conv(const WeightTensor &kernel) {
    require_shape(kernel.dims.size() == 4 && kernel.dims[2] == 3 && kernel.dims[3] == 3,
                  "deconv kernel must be (C_in, C_out, 3, 3)");
    const std::uint32_t cin = kernel.dims[0], cout = kernel.dims[1];
    WeightTensor conv{{cout, cin, 3, 3}, std::vector<float>(kernel.values.size())};
    for (std::uint32_t i = 0; i < cin; ++i)
        for (std::uint32_t o = 0; o < cout; ++o)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    conv.values[((o * cin + i) * 3 + a) * 3 + b] =
                        kernel.values[((i * cout + o) * 3 + (2 - a)) * 3 + (2 - b)];
    return conv;
}

Tensor deconv2d(const Tensor &input, const WeightTensor &kernel, const WeightTensor *bias) {
    return conv2d(input, deconv_as_conv(kernel), bias);
}

Tensor batchnorm_infer(const Tensor &in, const WeightTensor &gamma, const WeightTensor &beta,
                       const WeightTensor &mean, const WeightTensor &var, float eps) {
    check_param(gamma, in.c, "batchnorm weight");
    check_param(beta, in.c, "batchnorm bias");
    check_param(mean, in.c, "batchnorm running_mean");
    check_param(var, in.c, "batchnorm running_var");
    Tensor out = in;
    const int hw = in.h * in.w;
    for (int c = 0; c < in.c; ++c) {
        const float denom = var.values[c] + eps;
        if (!(denom > 0)) throw ValidationError("batchnorm running_var + eps must be positive");
        const float scale = gamma.values[c] / std::sqrt(denom);
        const float m = mean.values[c], b = beta.values[c];
        float *p = out.channel(c);
        for (int i = 0; i < hw; ++i) p[i] = (p[i] - m) * scale + b;
    }
    return out;
}

Tensor leaky_relu(Tensor t, float slope) {
    for (float &x : t.data)
        if (x < 0) x *= slope;
    return t;
}

Tensor relu(Tensor t) {
    for (float &x : t.data) x = std::max(x, 0.f);
    return t;
}

Tensor maxpool2x2(const Tensor &in) {
    if (in.h % 2 || in.w % 2) throw ValidationError("maxpool2x2 needs even height and width");
    Tensor out(in.c, in.h / 2, in.w / 2);
    for (int c = 0; c < in.c; ++c)
        for (int y = 0; y < out.h; ++y)
            for (int x = 0; x < out.w; ++x)
                out.at(c, y, x) = std::max(std::max(in.at(c, 2 * y, 2 * x), in.at(c, 2 * y, 2 * x + 1)),
                                           std::max(in.at(c, 2 * y + 1, 2 * x),
                                                    in.at(c, 2 * y + 1, 2 * x + 1)));
    return out;
}

Tensor upsample_bilinear2x2(const Tensor &in) {
    Tensor out(in.c, in.h * 2, in.w * 2);
    auto coord = [](int dst, int size, int *i0, int *i1, float *frac) {
        const float src = std::max(0.f, (dst + 0.5f) * 0.5f - 0.5f);
        *i0 = std::min(static_cast<int>(src), size - 1);
        *i1 = std::min(*i0 + 1, size - 1);
        *frac = src - *i0;
    };
    for (int y = 0; y < out.h; ++y) {
        int y0, y1;
        float fy;
        coord(y, in.h, &y0, &y1, &fy);
        for (int x = 0; x < out.w; ++x) {
            int x0, x1;
            float fx;
            coord(x, in.w, &x0, &x1, &fx);
            for (int c = 0; c < in.c; ++c) {
                const float top = (1 - fx) * in.at(c, y0, x0) + fx * in.at(c, y0, x1);
                const float bot = (1 - fx) * in.at(c, y1, x0) + fx * in.at(c, y1, x1);
                out.at(c, y, x) = (1 - fy) * top + fy * bot;
            }
        }
    }
    return out;
}

Tensor concat_channels(const Tensor &a, const Tensor &b) {
    if (a.h != b.h || a.w != b.w) throw ValidationError("concat of mismatched spatial sizes");
    Tensor out(a.c + b.c, a.h, a.w);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

}  // namespace drc
