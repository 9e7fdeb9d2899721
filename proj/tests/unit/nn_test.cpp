// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <random>

#include "drc/core/errors.h"
#include "drc/dataset/dataset.h"
#include "drc/hemimap/hemimap.h"
#include "drc/nn/blur.h"
#include "drc/nn/layers.h"
#include "drc/nn/network.h"
#include "test_util.h"

using namespace drc;

namespace {

Tensor random_tensor(int c, int h, int w, std::mt19937_64 &rng, float lo = -1.f, float hi = 1.f) {
    std::uniform_real_distribution<float> u(lo, hi);
    Tensor t(c, h, w);
    for (float &x : t.data) x = u(rng);
    return t;
}

WeightTensor random_weights(std::vector<std::uint32_t> dims, std::mt19937_64 &rng) {
    std::uniform_real_distribution<float> u(-1.f, 1.f);
    WeightTensor t{std::move(dims), {}};
    t.values.resize(t.element_count());
    for (float &x : t.values) x = u(rng);
    return t;
}

float max_abs_diff(const Tensor &a, const Tensor &b) {
    EXPECT_EQ(a.c, b.c);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.w, b.w);
    float m = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

// Direct evaluation of a zero-padded, stride-1 convolution.
Tensor naive_conv(const Tensor &x, const WeightTensor &k, const WeightTensor &bias) {
    const int co = static_cast<int>(k.dims[0]), ci = static_cast<int>(k.dims[1]);
    const int ks = static_cast<int>(k.dims[2]), pad = ks / 2;
    Tensor y(co, x.h, x.w);
    for (int o = 0; o < co; ++o)
        for (int py = 0; py < x.h; ++py)
            for (int px = 0; px < x.w; ++px) {
                double s = bias.values[o];
                for (int i = 0; i < ci; ++i)
                    for (int a = 0; a < ks; ++a)
                        for (int b = 0; b < ks; ++b) {
                            const int yy = py + a - pad, xx = px + b - pad;
                            if (yy < 0 || yy >= x.h || xx < 0 || xx >= x.w) continue;
                            s += k.values[((o * ci + i) * ks + a) * ks + b] * x.at(i, yy, xx);
                        }
                y.at(o, py, px) = static_cast<float>(s);
            }
    return y;
}

// Scatter form of the stride-1 transposed convolution with one pixel cropped
// from each side; kernel layout (C_in, C_out, 3, 3).
Tensor naive_deconv(const Tensor &x, const WeightTensor &k, const WeightTensor &bias) {
    const int ci = static_cast<int>(k.dims[0]), co = static_cast<int>(k.dims[1]);
    std::vector<double> acc(static_cast<std::size_t>(co) * x.h * x.w, 0.0);
    for (int i = 0; i < ci; ++i)
        for (int iy = 0; iy < x.h; ++iy)
            for (int ix = 0; ix < x.w; ++ix)
                for (int o = 0; o < co; ++o)
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) {
                            const int oy = iy + a - 1, ox = ix + b - 1;
                            if (oy < 0 || oy >= x.h || ox < 0 || ox >= x.w) continue;
                            acc[(static_cast<std::size_t>(o) * x.h + oy) * x.w + ox] +=
                                x.at(i, iy, ix) * k.values[((i * co + o) * 3 + a) * 3 + b];
                        }
    Tensor y(co, x.h, x.w);
    for (int o = 0; o < co; ++o)
        for (int p = 0; p < x.h * x.w; ++p)
            y.data[o * x.h * x.w + p] = static_cast<float>(acc[o * x.h * x.w + p] + bias.values[o]);
    return y;
}

// Stand-alone DRCW writer for building malformed files.
struct DrcwBuilder {
    std::vector<std::uint8_t> bytes;
    template <typename T>
    void put(T v) {
        std::uint8_t b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        bytes.insert(bytes.end(), b, b + sizeof(T));
    }
    DrcwBuilder(std::uint32_t version, std::uint32_t count) {
        bytes = {'D', 'R', 'C', 'W'};
        put(version);
        put(std::bit_cast<std::uint32_t>(0.01f));
        put(count);
    }
    void tensor(const std::string &name, const WeightTensor &t) {
        put(static_cast<std::uint16_t>(name.size()));
        bytes.insert(bytes.end(), name.begin(), name.end());
        put(static_cast<std::uint8_t>(t.dims.size()));
        for (auto d : t.dims) put(d);
        for (float v : t.values) put(v);
    }
};

std::vector<std::uint8_t> build_drcw(const std::map<std::string, WeightTensor> &tensors) {
    DrcwBuilder b(1, static_cast<std::uint32_t>(tensors.size()));
    for (const auto &[name, t] : tensors) b.tensor(name, t);
    return b.bytes;
}

}  // namespace

TEST(Conv2d, IdentityOneByOne) {
    std::mt19937_64 rng(1);
    const Tensor x = random_tensor(3, 6, 5, rng);
    WeightTensor k{{3, 3, 1, 1}, std::vector<float>(9, 0.f)};
    for (int c = 0; c < 3; ++c) k.values[c * 3 + c] = 1.f;
    EXPECT_EQ(conv2d(x, k, nullptr), x);
}

TEST(Conv2d, BoxFilterBorders) {
    const float c = 2.f;
    const Tensor x(1, 5, 5, c);
    const WeightTensor k{{1, 1, 3, 3}, std::vector<float>(9, 1.f / 9.f)};
    const Tensor y = conv2d(x, k, nullptr);
    EXPECT_NEAR(y.at(0, 2, 2), c, 1e-6);
    EXPECT_NEAR(y.at(0, 0, 2), 6 * c / 9, 1e-6);
    EXPECT_NEAR(y.at(0, 2, 4), 6 * c / 9, 1e-6);
    EXPECT_NEAR(y.at(0, 0, 0), 4 * c / 9, 1e-6);
}

TEST(Conv2d, Linearity) {
    std::mt19937_64 rng(2);
    const Tensor x = random_tensor(4, 8, 8, rng);
    const WeightTensor k = random_weights({5, 4, 3, 3}, rng);
    Tensor x2 = x;
    for (float &v : x2.data) v *= 2.5f;
    const Tensor a = conv2d(x, k, nullptr), b = conv2d(x2, k, nullptr);
    for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(b.data[i], 2.5f * a.data[i], 1e-5);
}

TEST(Conv2d, MatchesDirectEvaluation) {
    std::mt19937_64 rng(3);
    for (int ks : {1, 3}) {
        const Tensor x = random_tensor(6, 8, 12, rng);
        const WeightTensor k = random_weights({5, 6, static_cast<std::uint32_t>(ks), static_cast<std::uint32_t>(ks)}, rng);
        const WeightTensor bias = random_weights({5}, rng);
        EXPECT_LT(max_abs_diff(conv2d(x, k, &bias), naive_conv(x, k, bias)), 1e-5f);
    }
}

TEST(Conv2d, ChannelMismatch) {
    const Tensor x(3, 4, 4);
    const WeightTensor k{{2, 4, 3, 3}, std::vector<float>(72, 0.f)};
    EXPECT_THROW(conv2d(x, k, nullptr), ValidationError);
}

TEST(Deconv2d, MatchesScatterForm) {
    std::mt19937_64 rng(4);
    const Tensor x = random_tensor(5, 8, 8, rng);
    const WeightTensor k = random_weights({5, 3, 3, 3}, rng);
    const WeightTensor bias = random_weights({3}, rng);
    const Tensor ref = naive_deconv(x, k, bias);
    EXPECT_LT(max_abs_diff(deconv2d(x, k, &bias), ref), 1e-5f);
    EXPECT_LT(max_abs_diff(conv2d(x, deconv_as_conv(k), &bias), ref), 1e-5f);
}

TEST(BatchNorm, IdentityParameters) {
    std::mt19937_64 rng(5);
    const Tensor x = random_tensor(2, 4, 4, rng);
    const WeightTensor one{{2}, {1, 1}}, zero{{2}, {0, 0}};
    const Tensor y = batchnorm_infer(x, one, zero, zero, one);
    for (std::size_t i = 0; i < x.data.size(); ++i)
        EXPECT_NEAR(y.data[i], x.data[i] / std::sqrt(1 + 1e-5), 1e-7);
}

TEST(BatchNorm, ConstantAtMeanGivesBeta) {
    const Tensor x(2, 3, 3, 0.75f);
    const WeightTensor gamma{{2}, {2, 3}}, beta{{2}, {0.5f, -0.25f}}, mean{{2}, {0.75f, 0.75f}}, var{{2}, {4, 9}};
    const Tensor y = batchnorm_infer(x, gamma, beta, mean, var);
    EXPECT_EQ(y.at(0, 1, 1), 0.5f);
    EXPECT_EQ(y.at(1, 2, 0), -0.25f);
}

TEST(BatchNorm, MatchesFormula) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<float> u(0.1f, 2.f);
    const Tensor x = random_tensor(8, 5, 5, rng);
    WeightTensor gamma = random_weights({8}, rng), beta = random_weights({8}, rng),
                 mean = random_weights({8}, rng), var{{8}, {}};
    for (int c = 0; c < 8; ++c) var.values.push_back(u(rng));
    const Tensor y = batchnorm_infer(x, gamma, beta, mean, var);
    double worst = 0;
    for (int c = 0; c < 8; ++c)
        for (int p = 0; p < 25; ++p) {
            const double ref = (x.data[c * 25 + p] - double(mean.values[c])) /
                                   std::sqrt(double(var.values[c]) + 1e-5) * gamma.values[c] + beta.values[c];
            worst = std::max(worst, std::abs(ref - y.data[c * 25 + p]));
        }
    EXPECT_LT(worst, 1e-6);  // float storage of values up to ~10 limits this to a few ulps
    const WeightTensor bad{{8}, std::vector<float>(8, -1.f)};
    EXPECT_THROW(batchnorm_infer(x, gamma, beta, mean, bad), ValidationError);
}

TEST(Pooling, MaxOfWindow) {
    Tensor x(1, 2, 2);
    x.data = {1, 2, 3, 4};
    const Tensor y = maxpool2x2(x);
    EXPECT_EQ(y.h, 1);
    EXPECT_EQ(y.data[0], 4.f);
    EXPECT_THROW(maxpool2x2(Tensor(1, 3, 2)), ValidationError);
}

TEST(Upsample, ConstantStaysConstant) {
    const Tensor y = upsample_bilinear2x2(Tensor(2, 4, 4, 1.5f));
    EXPECT_EQ(y.h, 8);
    for (float v : y.data) EXPECT_EQ(v, 1.5f);
}

TEST(Upsample, HalfPixelWeights) {
    Tensor x(1, 2, 2);
    x.data = {0, 1, 0, 1};
    const Tensor y = upsample_bilinear2x2(x);
    const float cols[4] = {0.f, 0.25f, 0.75f, 1.f};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) EXPECT_FLOAT_EQ(y.at(0, r, c), cols[c]);
}

TEST(Activations, LeakyAndPlainRelu) {
    Tensor x(1, 1, 3);
    x.data = {-2.f, 0.f, 3.f};
    EXPECT_EQ(leaky_relu(x, 0.01f).data, (std::vector<float>{-0.02f, 0.f, 3.f}));
    EXPECT_EQ(relu(x).data, (std::vector<float>{0.f, 0.f, 3.f}));
}

TEST(Concat, ChannelOrder) {
    const Tensor a(2, 2, 2, 1.f), b(1, 2, 2, 2.f);
    const Tensor c = concat_channels(a, b);
    EXPECT_EQ(c.c, 3);
    EXPECT_EQ(c.at(1, 1, 1), 1.f);
    EXPECT_EQ(c.at(2, 0, 0), 2.f);
    EXPECT_THROW(concat_channels(a, Tensor(1, 4, 4)), ValidationError);
}

TEST(GaussianBlur, ConstantMap) {
    HemiMap m(3);
    for (float &x : m.data) x = 0.3f;
    const HemiMap b = gaussian_blur(m, 1.0);
    for (float x : b.data) EXPECT_NEAR(x, 0.3f, 1e-6);
}

TEST(GaussianBlur, ImpulseGivesKernel) {
    HemiMap m(1);
    m.at(0, 16, 16) = 1.f;
    const HemiMap b = gaussian_blur(m, 1.0);
    double sum = 0;
    for (float x : b.data) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-6);
    // Truncated at 3 sigma and renormalized.
    double norm = 0;
    for (int i = -3; i <= 3; ++i) norm += std::exp(-0.5 * i * i);
    const double g0 = 1 / norm, g1 = std::exp(-0.5) / norm, g2 = std::exp(-2.0) / norm;
    EXPECT_NEAR(b.at(0, 16, 16), g0 * g0, 1e-7);
    EXPECT_NEAR(b.at(0, 17, 16), g1 * g0, 1e-7);
    EXPECT_NEAR(b.at(0, 18, 17), g2 * g1, 1e-7);
    EXPECT_EQ(b.at(0, 16, 20), 0.f);
}

TEST(GaussianBlur, AzimuthWraps) {
    HemiMap m(1);
    m.at(0, 10, 0) = 1.f;
    const HemiMap b = gaussian_blur(m, 1.0);
    EXPECT_GT(b.at(0, 10, 31), 0.f);
    EXPECT_FLOAT_EQ(b.at(0, 10, 31), b.at(0, 10, 1));
    // Rows clamp: reads above row 0 repeat row 0.
    HemiMap top(1);
    for (int u = 0; u < kMapRes; ++u) top.at(0, 0, u) = 1.f;
    const HemiMap tb = gaussian_blur(top, 1.0);
    const std::vector<double> g = gaussian_kernel(1.0);
    EXPECT_NEAR(tb.at(0, 0, 7), g[0] + g[1] + g[2] + g[3], 1e-6);
    EXPECT_NEAR(tb.at(0, 2, 7), g[0] + g[1], 1e-6);
}

TEST(Network, CanonicalLayout) {
    const auto specs = canonical_tensors(64);
    std::map<std::string, std::vector<std::uint32_t>> dims;
    for (const auto &s : specs) dims[s.name] = s.dims;
    EXPECT_EQ(dims.at("enc1.conv1.weight"), (std::vector<std::uint32_t>{64, 7, 3, 3}));
    EXPECT_EQ(dims.at("enc3.conv2.weight"), (std::vector<std::uint32_t>{256, 256, 3, 3}));
    EXPECT_EQ(dims.at("bottleneck.conv1.weight"), (std::vector<std::uint32_t>{512, 256, 3, 3}));
    EXPECT_EQ(dims.at("dec3.deconv1.weight"), (std::vector<std::uint32_t>{768, 256, 3, 3}));
    EXPECT_EQ(dims.at("dec1.deconv1.weight"), (std::vector<std::uint32_t>{192, 64, 3, 3}));
    EXPECT_EQ(dims.at("head.deconv1.weight"), (std::vector<std::uint32_t>{64, 32, 3, 3}));
    EXPECT_EQ(dims.at("head.deconv2.weight"), (std::vector<std::uint32_t>{32, 16, 3, 3}));
    EXPECT_EQ(dims.at("head.conv.weight"), (std::vector<std::uint32_t>{3, 16, 1, 1}));
    EXPECT_EQ(dims.at("head.bn2.running_var"), (std::vector<std::uint32_t>{16}));
    EXPECT_EQ(dims.count("head.bn3.weight"), 0u);  // no normalization after the 1x1 output
    int encoders = 0, decoders = 0;
    for (const auto &[name, _] : dims) {
        encoders += name.ends_with(".conv1.weight") && name.starts_with("enc");
        decoders += name.ends_with(".deconv1.weight") && name.starts_with("dec");
    }
    EXPECT_EQ(encoders, 3);
    EXPECT_EQ(decoders, 3);
}

TEST(Network, ZeroNetworkGivesZero) {
    std::mt19937_64 rng(7);
    const Tensor y = forward(zero_network(8), random_tensor(7, 32, 32, rng));
    EXPECT_EQ(y.c, 3);
    for (float v : y.data) EXPECT_EQ(v, 0.f);
}

TEST(Network, OutputShapeAndSign) {
    std::mt19937_64 rng(8);
    const Network net = random_network(8, 9);
    const Tensor x = random_tensor(7, 32, 32, rng);
    const Tensor y = forward(net, x);
    EXPECT_EQ(y.c, 3);
    EXPECT_EQ(y.h, 32);
    EXPECT_EQ(y.w, 32);
    int positive = 0;
    for (float v : y.data) {
        EXPECT_GE(v, 0.f);
        positive += v > 0;
    }
    EXPECT_GT(positive, 0);
    EXPECT_EQ(forward(net, x), y);
    EXPECT_THROW(forward(net, Tensor(7, 16, 16)), ValidationError);
}

TEST(Network, MatchesTorchReference) {
    const auto cases = read_dataset_file(test::data_path("parity.drcd"));
    ASSERT_EQ(cases.size(), 20u);
    for (const TrainingExample &e : cases) {
        const Network net = random_network(static_cast<int>(e.px), e.py);
        Tensor x(7, 32, 32);
        x.data = e.input;
        Tensor ref(3, 32, 32);
        ref.data = e.target;
        EXPECT_LE(max_abs_diff(forward(net, x), ref), 1e-4f) << e.scene_id;
    }
}

TEST(Network, BlurStubBlursRadiance) {
    std::mt19937_64 rng(10);
    Tensor x = random_tensor(7, 32, 32, rng, 0.f, 1.f);
    const Tensor y = forward(blur_stub_network(12), x);
    // Two binomial 3x3 passes are a 5x5 binomial filter.
    const double w[5] = {1 / 16., 4 / 16., 6 / 16., 4 / 16., 1 / 16.};
    for (int c = 0; c < 3; ++c)
        for (int py = 2; py < 30; py += 3)
            for (int px = 2; px < 30; px += 5) {
                double s = 0;
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b) s += w[a] * w[b] * x.at(c, py + a - 2, px + b - 2);
                EXPECT_NEAR(y.at(c, py, px), s, 1e-5);
            }
}

TEST(Network, BlurStubNeedsThreeHeadChannels) {
    EXPECT_THROW(blur_stub_network(8), ValidationError);
}

TEST(Drcw, RoundTrip) {
    const Network net = random_network(8, 11);
    const auto bytes = save_weights(net);
    const Network back = load_weights(bytes);
    EXPECT_EQ(back.tensors(), net.tensors());
    EXPECT_EQ(back.leaky_slope(), net.leaky_slope());
    EXPECT_EQ(save_weights(back), bytes);
    // Header layout.
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "DRCW");
    std::uint32_t version, slope, count;
    std::memcpy(&version, &bytes[4], 4);
    std::memcpy(&slope, &bytes[8], 4);
    std::memcpy(&count, &bytes[12], 4);
    EXPECT_EQ(version, 1u);
    EXPECT_EQ(std::bit_cast<float>(slope), 0.01f);
    EXPECT_EQ(count, canonical_tensors(8).size());
}

TEST(Drcw, TruncatedFileReportsOffset) {
    const auto bytes = save_weights(random_network(4, 1));
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + bytes.size() / 2);
    try {
        load_weights(cut);
        FAIL() << "expected a format error";
    } catch (const FormatError &e) {
        EXPECT_GT(e.offset(), 16u);
        EXPECT_LE(e.offset(), cut.size());
    }
}

TEST(Drcw, BadMagicAndVersion) {
    auto bytes = save_weights(zero_network(4));
    auto wrong = bytes;
    wrong[0] = 'X';
    EXPECT_THROW(load_weights(wrong), FormatError);
    wrong = bytes;
    wrong[4] = 2;
    EXPECT_THROW(load_weights(wrong), FormatError);
}

TEST(Drcw, ShapeMismatchNamesTensor) {
    auto tensors = zero_network(4).tensors();
    WeightTensor &t = tensors.at("enc1.conv1.weight");
    t.dims = {4, 7, 5, 5};
    t.values.assign(t.element_count(), 0.f);
    try {
        load_weights(build_drcw(tensors));
        FAIL() << "expected a validation error";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("enc1.conv1.weight"), std::string::npos) << e.what();
    }
}

TEST(Drcw, MissingAndUnexpectedTensors) {
    auto tensors = zero_network(4).tensors();
    tensors.erase("dec2.bn1.running_mean");
    try {
        load_weights(build_drcw(tensors));
        FAIL();
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("dec2.bn1.running_mean"), std::string::npos);
    }
    tensors = zero_network(4).tensors();
    tensors["enc4.conv1.weight"] = WeightTensor{{1}, {0.f}};
    EXPECT_THROW(load_weights(build_drcw(tensors)), ValidationError);
}

TEST(Network, ForwardLatency) {
    // Soft budget; reported, not enforced.
    const Network net = random_network(64, 1);
    std::mt19937_64 rng(12);
    const Tensor x = random_tensor(7, 32, 32, rng);
    forward(net, x);
    const auto t0 = std::chrono::steady_clock::now();
    const int runs = 5;
    for (int i = 0; i < runs; ++i) forward(net, x);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / runs;
    RecordProperty("forward_ms", std::to_string(ms));
    std::printf("forward K=64: %.1f ms\n", ms);
}
