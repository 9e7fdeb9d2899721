// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/nn/network.h"

#include <bit>
#include <cmath>
#include <set>

#include "drc/core/binary_io.h"
#include "drc/core/errors.h"
#include "drc/render/image.h"
#include "drc/render/sampler.h"
#include "drc/nn/layers.h"

namespace drc {

namespace {

void add_bn(std::vector<TensorSpec> &out, const std::string &prefix, std::uint32_t c) {
    for (const char *p : {"weight", "bias", "running_mean", "running_var"})
        out.push_back({prefix + "." + p, {c}});
}

void add_conv(std::vector<TensorSpec> &out, const std::string &prefix, std::uint32_t cin,
              std::uint32_t cout, std::uint32_t k) {
    out.push_back({prefix + ".weight", {cout, cin, k, k}});
    out.push_back({prefix + ".bias", {cout}});
}

void add_deconv(std::vector<TensorSpec> &out, const std::string &prefix, std::uint32_t cin,
                std::uint32_t cout) {
    out.push_back({prefix + ".weight", {cin, cout, 3, 3}});
    out.push_back({prefix + ".bias", {cout}});
}

bool is_deconv(const std::string &name) {
    return name.find(".deconv") != std::string::npos && name.ends_with(".weight");
}

}  // namespace

std::vector<TensorSpec> canonical_tensors(int k_) {
    const auto k = static_cast<std::uint32_t>(k_);
    std::vector<TensorSpec> t;
    const std::pair<const char *, std::pair<std::uint32_t, std::uint32_t>> enc[] = {
        {"enc1", {kNetInputChannels, k}},
        {"enc2", {k, 2 * k}},
        {"enc3", {2 * k, 4 * k}},
        {"bottleneck", {4 * k, 8 * k}},
    };
    for (const auto &[name, io] : enc) {
        const std::string p = name;
        add_conv(t, p + ".conv1", io.first, io.second, 3);
        add_bn(t, p + ".bn1", io.second);
        add_conv(t, p + ".conv2", io.second, io.second, 3);
        add_bn(t, p + ".bn2", io.second);
    }
    const std::pair<const char *, std::pair<std::uint32_t, std::uint32_t>> dec[] = {
        {"dec3", {8 * k + 4 * k, 4 * k}},
        {"dec2", {4 * k + 2 * k, 2 * k}},
        {"dec1", {2 * k + k, k}},
    };
    for (const auto &[name, io] : dec) {
        const std::string p = name;
        add_deconv(t, p + ".deconv1", io.first, io.second);
        add_bn(t, p + ".bn1", io.second);
        add_deconv(t, p + ".deconv2", io.second, io.second);
        add_bn(t, p + ".bn2", io.second);
    }
    const std::uint32_t h1 = std::max(1u, k / 2), h2 = std::max(1u, k / 4);
    add_deconv(t, "head.deconv1", k, h1);
    add_bn(t, "head.bn1", h1);
    add_deconv(t, "head.deconv2", h1, h2);
    add_bn(t, "head.bn2", h2);
    add_conv(t, "head.conv", h2, kNetOutputChannels, 1);
    return t;
}

Network::Network(std::map<std::string, WeightTensor> tensors, float leaky_slope)
    : slope_(leaky_slope), tensors_(std::move(tensors)) {
    const auto first = tensors_.find("enc1.conv1.weight");
    if (first == tensors_.end()) throw ValidationError("missing tensor \"enc1.conv1.weight\"");
    if (first->second.dims.empty() || first->second.dims[0] < 4)
        throw ValidationError("shape mismatch for \"enc1.conv1.weight\"");
    k_ = static_cast<int>(first->second.dims[0]);
    if (!std::isfinite(slope_)) throw ValidationError("leaky slope must be finite");

    std::set<std::string> expected;
    for (const TensorSpec &spec : canonical_tensors(k_)) {
        expected.insert(spec.name);
        const auto it = tensors_.find(spec.name);
        if (it == tensors_.end()) throw ValidationError("missing tensor \"" + spec.name + "\"");
        if (it->second.dims != spec.dims)
            throw ValidationError("shape mismatch for \"" + spec.name + "\"");
        if (it->second.values.size() != it->second.element_count())
            throw ValidationError("value count mismatch for \"" + spec.name + "\"");
        for (float v : it->second.values)
            if (!std::isfinite(v)) throw ValidationError("non-finite value in \"" + spec.name + "\"");
    }
    for (const auto &[name, _] : tensors_)
        if (!expected.count(name)) throw ValidationError("unexpected tensor \"" + name + "\"");
    for (const auto &[name, t] : tensors_)
        if (is_deconv(name)) deconv_kernels_.emplace(name, deconv_as_conv(t));
}

const WeightTensor &Network::tensor(const std::string &name) const {
    const auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ContractError("no tensor named " + name);
    return it->second;
}

struct NetworkRunner {
    const Network &net;

    Tensor bn_act(const Tensor &x, const std::string &bn) const {
        return leaky_relu(batchnorm_infer(x, net.tensor(bn + ".weight"), net.tensor(bn + ".bias"),
                                          net.tensor(bn + ".running_mean"),
                                          net.tensor(bn + ".running_var")),
                          net.slope_);
    }
    Tensor conv(const Tensor &x, const std::string &layer) const {
        return conv2d(x, net.tensor(layer + ".weight"), &net.tensor(layer + ".bias"));
    }
    Tensor deconv(const Tensor &x, const std::string &layer) const {
        return conv2d(x, net.deconv_kernels_.at(layer + ".weight"), &net.tensor(layer + ".bias"));
    }
    Tensor encoder(const Tensor &x, const std::string &p) const {
        return bn_act(conv(bn_act(conv(x, p + ".conv1"), p + ".bn1"), p + ".conv2"), p + ".bn2");
    }
    Tensor decoder(const Tensor &x, const Tensor &skip, const std::string &p) const {
        const Tensor cat = concat_channels(upsample_bilinear2x2(x), skip);
        return bn_act(deconv(bn_act(deconv(cat, p + ".deconv1"), p + ".bn1"), p + ".deconv2"),
                      p + ".bn2");
    }
};

Tensor forward(const Network &net, const Tensor &input) {
    if (input.c != kNetInputChannels || input.h != 32 || input.w != 32)
        throw ValidationError("network input must be (7, 32, 32)");
    const NetworkRunner r{net};
    const Tensor e1 = r.encoder(input, "enc1");
    const Tensor e2 = r.encoder(maxpool2x2(e1), "enc2");
    const Tensor e3 = r.encoder(maxpool2x2(e2), "enc3");
    const Tensor b = r.encoder(maxpool2x2(e3), "bottleneck");
    const Tensor d3 = r.decoder(b, e3, "dec3");
    const Tensor d2 = r.decoder(d3, e2, "dec2");
    const Tensor d1 = r.decoder(d2, e1, "dec1");
    Tensor h = r.bn_act(r.deconv(d1, "head.deconv1"), "head.bn1");
    h = r.bn_act(r.deconv(h, "head.deconv2"), "head.bn2");
    return relu(r.conv(h, "head.conv"));
}

Network load_weights(const std::vector<std::uint8_t> &bytes) {
    ByteReader in(bytes);
    in.expect_magic("DRCW");
    const std::size_t version_at = in.offset();
    const auto version = in.read<std::uint32_t>("version");
    if (version != kDrcwVersion)
        throw FormatError("unsupported DRCW version " + std::to_string(version), version_at);
    const float slope = std::bit_cast<float>(in.read<std::uint32_t>("leaky slope"));
    const auto count = in.read<std::uint32_t>("tensor count");
    std::map<std::string, WeightTensor> tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t at = in.offset();
        const auto len = in.read<std::uint16_t>("tensor name length");
        std::string name = in.read_string(len, "tensor name");
        const auto rank = in.read<std::uint8_t>("tensor rank");
        WeightTensor t;
        for (int d = 0; d < rank; ++d) t.dims.push_back(in.read<std::uint32_t>("tensor dims"));
        const std::size_t n = t.element_count();
        if (n > in.remaining() / sizeof(float))
            throw FormatError("truncated values of tensor \"" + name + "\"", in.offset());
        t.values.resize(n);
        in.read_floats(t.values.data(), n, "tensor values");
        if (!tensors.emplace(std::move(name), std::move(t)).second)
            throw FormatError("duplicate tensor", at);
    }
    if (in.remaining() != 0) throw FormatError("trailing bytes after last tensor", in.offset());
    return Network(std::move(tensors), slope);
}

Network load_weights_file(const std::string &path) { return load_weights(read_file(path)); }

std::vector<std::uint8_t> save_weights(const Network &net) {
    ByteWriter out;
    out.write_string("DRCW");
    out.write<std::uint32_t>(kDrcwVersion);
    out.write<std::uint32_t>(std::bit_cast<std::uint32_t>(net.leaky_slope()));
    const auto specs = canonical_tensors(net.base_width());
    out.write<std::uint32_t>(static_cast<std::uint32_t>(specs.size()));
    for (const TensorSpec &spec : specs) {
        const WeightTensor &t = net.tensor(spec.name);
        out.write<std::uint16_t>(static_cast<std::uint16_t>(spec.name.size()));
        out.write_string(spec.name);
        out.write<std::uint8_t>(static_cast<std::uint8_t>(t.dims.size()));
        for (auto d : t.dims) out.write<std::uint32_t>(d);
        out.write_floats(t.values.data(), t.values.size());
    }
    return out.take();
}

namespace {

std::map<std::string, WeightTensor> zero_tensors(int k) {
    std::map<std::string, WeightTensor> m;
    for (const TensorSpec &spec : canonical_tensors(k)) {
        WeightTensor t{spec.dims, {}};
        const float fill = spec.name.ends_with("running_var") ? 1.f : 0.f;
        t.values.assign(t.element_count(), fill);
        m.emplace(spec.name, std::move(t));
    }
    return m;
}

}  // namespace

Network zero_network(int k) { return Network(zero_tensors(k), kDefaultLeakySlope); }

Network random_network(int k, std::uint64_t seed) {
    auto m = zero_tensors(k);
    std::uint64_t counter = 0;
    auto uniform = [&](double lo, double hi) {
        return static_cast<float>(lo + (hi - lo) * to_unit(hash_combine(seed, counter++)));
    };
    for (const TensorSpec &spec : canonical_tensors(k)) {
        WeightTensor &t = m.at(spec.name);
        const std::string &n = spec.name;
        if (n.ends_with("running_var")) {
            for (float &v : t.values) v = uniform(0.5, 1.5);
        } else if (n.ends_with("running_mean") || (n.find(".bn") != std::string::npos && n.ends_with(".bias"))) {
            for (float &v : t.values) v = uniform(-0.1, 0.1);
        } else if (n.find(".bn") != std::string::npos) {
            for (float &v : t.values) v = uniform(0.5, 1.5);
        } else if (t.dims.size() == 4) {
            // Fan-in of the equivalent convolution.
            const double fan_in = (is_deconv(n) ? t.dims[0] : t.dims[1]) * t.dims[2] * t.dims[3];
            const double a = std::sqrt(6.0 / fan_in);
            for (float &v : t.values) v = uniform(-a, a);
        } else {
            for (float &v : t.values) v = uniform(-0.05, 0.05);
        }
    }
    return Network(std::move(m), kDefaultLeakySlope);
}

Network blur_stub_network(int k) {
    // The narrowest head layer (k/4 wide) must carry three colour channels.
    if (k < 12) throw ValidationError("blur stub network needs k >= 12, got " + std::to_string(k));
    auto m = zero_tensors(k);
    // Running variance 1 - eps makes each batch norm an exact identity.
    for (auto &[name, t] : m) {
        if (name.ends_with("running_var")) std::fill(t.values.begin(), t.values.end(), 1.f - kBatchNormEps);
        if (name.find(".bn") != std::string::npos && name.ends_with(".weight"))
            std::fill(t.values.begin(), t.values.end(), 1.f);
    }
    const float binomial[3] = {0.25f, 0.5f, 0.25f};
    auto set_conv = [&](const std::string &name, std::uint32_t o, std::uint32_t i, int a, int b,
                        float v) {
        WeightTensor &t = m.at(name);
        t.values[((o * t.dims[1] + i) * t.dims[2] + a) * t.dims[3] + b] = v;
    };
    for (std::uint32_t c = 0; c < 3; ++c) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                set_conv("enc1.conv1.weight", c, c, a, b, binomial[a] * binomial[b]);
                set_conv("enc1.conv2.weight", c, c, a, b, binomial[a] * binomial[b]);
            }
        // Deconv layout is (C_in, C_out, 3, 3); the centre tap is its own flip.
        // dec1 sees [upsampled, skip] so the skip copy of channel c sits at 2k + c.
        set_conv("dec1.deconv1.weight", static_cast<std::uint32_t>(2 * k) + c, c, 1, 1, 1.f);
        set_conv("dec1.deconv2.weight", c, c, 1, 1, 1.f);
        set_conv("head.deconv1.weight", c, c, 1, 1, 1.f);
        set_conv("head.deconv2.weight", c, c, 1, 1, 1.f);
        set_conv("head.conv.weight", c, c, 0, 0, 1.f);
    }
    return Network(std::move(m), kDefaultLeakySlope);
}

}  // namespace drc
