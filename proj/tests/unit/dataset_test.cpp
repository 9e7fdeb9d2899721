// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/dataset/dataset.h"

#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "drc/core/errors.h"
#include "drc/core/frame.h"
#include "drc/hemimap/input_stack.h"
#include "drc/render/integrators.h"
#include "test_util.h"

using namespace drc;

namespace {

TrainingExample random_example(std::mt19937_64 &rng, int i) {
    std::uniform_real_distribution<float> u(-3.f, 3.f);
    TrainingExample e;
    for (float &x : e.input) x = u(rng);
    for (float &x : e.target) x = u(rng);
    e.s_r = std::abs(u(rng)) + 1e-3f;
    e.s_d = std::abs(u(rng)) + 1e-3f;
    e.scene_id = "scene_" + std::to_string(i);
    e.px = static_cast<std::uint32_t>(rng() % 4096);
    e.py = static_cast<std::uint32_t>(rng() % 4096);
    return e;
}

Scene cornell(int res) {
    SceneDescription d = test::load_description("cornell_box.json");
    d.camera.width = d.camera.height = res;
    return Scene(d);
}

double map_mean(const std::vector<float> &v) {
    double s = 0;
    for (float x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST(Drcd, RoundTripBitIdentical) {
    std::mt19937_64 rng(5);
    std::vector<TrainingExample> ex;
    for (int i = 0; i < 10; ++i) ex.push_back(random_example(rng, i));
    const auto bytes = write_dataset(ex);
    const auto back = read_dataset(bytes);
    ASSERT_EQ(back.size(), ex.size());
    for (std::size_t i = 0; i < ex.size(); ++i) {
        EXPECT_EQ(std::memcmp(back[i].input.data(), ex[i].input.data(), ex[i].input.size() * 4), 0);
        EXPECT_EQ(back[i], ex[i]);
    }
    EXPECT_EQ(write_dataset(back), bytes);
}

TEST(Drcd, HeaderLayout) {
    std::mt19937_64 rng(1);
    const auto bytes = write_dataset({random_example(rng, 0)});
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "DRCD");
    std::uint32_t version, count;
    std::uint16_t res;
    std::memcpy(&version, &bytes[4], 4);
    std::memcpy(&count, &bytes[8], 4);
    std::memcpy(&res, &bytes[12], 2);
    EXPECT_EQ(version, 1u);
    EXPECT_EQ(count, 1u);
    EXPECT_EQ(res, 32);
    // header + id length + "scene_0" + px, py, s_r, s_d + 10 maps
    EXPECT_EQ(bytes.size(), 14u + 4 + 7 + 16 + 10 * 1024 * 4);
}

TEST(Drcd, CorruptedCountIsFramingError) {
    std::mt19937_64 rng(2);
    auto bytes = write_dataset({random_example(rng, 0), random_example(rng, 1)});
    for (std::uint32_t bad : {1u, 3u, 1000000u}) {
        std::memcpy(&bytes[8], &bad, 4);
        try {
            read_dataset(bytes);
            FAIL() << "count " << bad << " accepted";
        } catch (const FormatError &e) {
            EXPECT_EQ(e.offset(), 8u);
        }
    }
}

TEST(Drcd, TruncationAndMagic) {
    std::mt19937_64 rng(3);
    const auto good = write_dataset({random_example(rng, 0)});
    auto cut = good;
    cut.resize(good.size() - 1);
    EXPECT_THROW(read_dataset(cut), FormatError);
    auto magic = good;
    magic[0] = 'X';
    EXPECT_THROW(read_dataset(magic), FormatError);
    auto version = good;
    version[4] = 9;
    try {
        read_dataset(version);
        FAIL();
    } catch (const FormatError &e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    auto res = good;
    res[12] = 16;
    EXPECT_THROW(read_dataset(res), FormatError);
    EXPECT_THROW(read_dataset({}), FormatError);
}

TEST(Drcd, WrongSizedExampleIsContractError) {
    TrainingExample e;
    e.target.resize(10);
    EXPECT_THROW(write_dataset({e}), ContractError);
}

TEST(Drcd, ReadsExternallyWrittenFile) {
    const auto ex = read_dataset_file(test::data_path("parity.drcd"));
    ASSERT_EQ(ex.size(), 20u);
    for (const auto &e : ex) {
        EXPECT_EQ(e.input.size(), 7u * 1024);
        EXPECT_GT(e.s_r, 0.f);
    }
    EXPECT_THROW(read_dataset_file(test::data_path("no_such.drcd")), IoError);
}

TEST(Dataset, GridPixels) {
    EXPECT_EQ(grid_pixel(0, 0, 4, 4, 64, 64), std::make_pair(8, 8));
    EXPECT_EQ(grid_pixel(3, 1, 4, 4, 64, 64), std::make_pair(56, 24));
    EXPECT_EQ(grid_pixel(0, 0, 1, 1, 5, 3), std::make_pair(2, 1));
    EXPECT_EQ(grid_pixel(2, 2, 3, 3, 3, 3), std::make_pair(2, 2));
}

TEST(Dataset, CornellGrid) {
    const Scene scene = cornell(64);
    DatasetOptions opt;
    opt.ref_spp = 4;
    opt.seed = 9;
    opt.scene_id = "cornell";
    const auto ex = generate_examples(scene, opt);
    ASSERT_LE(ex.size(), 16u);
    ASSERT_GE(ex.size(), 12u);
    for (const auto &e : ex) {
        EXPECT_EQ(e.input.size(), 7u * 1024);
        EXPECT_EQ(e.target.size(), 3u * 1024);
        EXPECT_EQ(e.scene_id, "cornell");
        EXPECT_LT(e.px, 64u);
        EXPECT_LT(e.py, 64u);
        EXPECT_GE(e.s_r, 1e-3f);
        EXPECT_GT(e.s_d, 0.f);
        // Normalized input radiance has mean luminance close to one.
        double lum = 0;
        for (int t = 0; t < 1024; ++t)
            lum += 0.2126 * e.input[t] + 0.7152 * e.input[1024 + t] + 0.0722 * e.input[2048 + t];
        EXPECT_LE(lum / 1024, 1.0 + 1e-5);
        for (int t = 6 * 1024; t < 7 * 1024; ++t) {
            EXPECT_GE(e.input[t], 0.f);
            EXPECT_LE(e.input[t], 1.f);
        }
    }
}

TEST(Dataset, Reproducible) {
    const Scene scene = cornell(32);
    DatasetOptions opt;
    opt.grid_x = 2;
    opt.grid_y = 2;
    opt.ref_spp = 4;
    opt.seed = 11;
    opt.threads = 1;
    const auto a = generate_examples(scene, opt);
    opt.threads = 3;
    const auto b = generate_examples(scene, opt);
    EXPECT_EQ(write_dataset(a), write_dataset(b));
    opt.seed = 12;
    EXPECT_NE(write_dataset(generate_examples(scene, opt)), write_dataset(a));
}

TEST(Dataset, UnlitSceneHasZeroTargets) {
    SceneDescription d = test::load_description("cornell_box.json");
    d.camera.width = d.camera.height = 32;
    for (Material &m : d.materials) m.emission = Rgb();
    const Scene scene(d);
    DatasetOptions opt;
    opt.grid_x = opt.grid_y = 2;
    opt.ref_spp = 8;
    const auto ex = generate_examples(scene, opt);
    ASSERT_FALSE(ex.empty());
    for (const auto &e : ex) {
        EXPECT_FLOAT_EQ(e.s_r, static_cast<float>(kRadianceScaleFloor));
        for (float x : e.target) ASSERT_EQ(x, 0.f);
        for (int t = 0; t < 3 * 1024; ++t) ASSERT_EQ(e.input[t], 0.f);
    }
}

TEST(Dataset, InvalidOptions) {
    const Scene scene = cornell(8);
    DatasetOptions opt;
    opt.grid_x = 0;
    EXPECT_THROW(generate_examples(scene, opt), ValidationError);
    opt.grid_x = 16;
    EXPECT_THROW(generate_examples(scene, opt), ValidationError);
    opt.grid_x = 2;
    opt.ref_spp = 0;
    EXPECT_THROW(generate_examples(scene, opt), ValidationError);
}

TEST(Dataset, TargetMatchesIndependentHighSppRender) {
    const Scene scene = cornell(64);
    DatasetOptions opt;
    opt.grid_x = opt.grid_y = 1;
    opt.ref_spp = 1024;
    opt.seed = 21;
    const auto ex = generate_examples(scene, opt);
    ASSERT_EQ(ex.size(), 1u);
    const TrainingExample &e = ex[0];

    const auto hit = find_primary_intersection(scene, scene.camera_ray(e.px + 0.5, e.py + 0.5));
    ASSERT_TRUE(hit);
    const Frame frame = build_frame(hit->hit.facing_normal(-hit->wo), scene.global_up());
    MapRenderOptions ro;
    ro.seed = 0xabcdef;
    const HemiMap ref = render_radiance_map(scene, hit->hit.position, frame, 4096, ro);

    for (int c = 0; c < 3; ++c) {
        double target = 0, oracle = 0;
        for (int t = 0; t < 1024; ++t) {
            target += e.target[c * 1024 + t] * e.s_r;
            oracle += ref.data[c * 1024 + t];
        }
        ASSERT_GT(oracle, 0);
        EXPECT_NEAR(target / oracle, 1.0, 0.03) << "channel " << c;
    }
    EXPECT_GT(map_mean(e.target), 0);
}
