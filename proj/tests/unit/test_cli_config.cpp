// test_cli_config.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <experiment_config.hpp>

#include "test_util.hpp"

#include <filesystem>
#include <fstream>

using namespace wft;
using namespace wft::cli;

namespace {

const std::filesystem::path config_dir = WFT_CONFIG_DIR;

}  // namespace

TEST(ExperimentConfig, DefaultsRoundTrip)
{
    const ExperimentConfig c;
    EXPECT_EQ(ExperimentConfig::from_json(c.to_json()), c);
    EXPECT_EQ(c.eps, (std::vector<double>{0.2, 0.1, 0.05, 0.025}));
    EXPECT_EQ(c.parallelism, 1);
    EXPECT_FALSE(c.nu.has_value());
}

TEST(ExperimentConfig, ShippedConfigsRoundTrip)
{
    for (const char* name : {"psystem_bump.json", "euler_bump.json", "euler_two_bumps.json"}) {
        const auto c = ExperimentConfig::load(config_dir / name);
        EXPECT_NO_THROW(c.validate()) << name;
        const auto again = ExperimentConfig::from_json(c.to_json(), c.base_dir);
        EXPECT_EQ(again, c) << name;
        EXPECT_EQ(again.to_json().dump(), c.to_json().dump()) << name;
    }
}

TEST(ExperimentConfig, FieldsMapToSweepOptions)
{
    const auto c = ExperimentConfig::from_json(nlohmann::json::parse(R"({
        "model": {"name": "psystem", "gamma": 2.0},
        "u0": [1.0, 0.0], "u1": "x.json", "nu": 12, "variant": "noncompact",
        "solver": {"delta_r": 0.001, "front_cap": 5000, "delta0": 0.2},
        "parallelism": 2, "budget_seconds": 30
    })"));
    EXPECT_EQ(c.model_params().gamma, 2.0);
    const auto o = c.sweep_options();
    EXPECT_EQ(o.variant, SweepVariant::Noncompact);
    EXPECT_EQ(o.nu, 12);
    EXPECT_EQ(o.delta_r, 0.001);
    EXPECT_EQ(o.ft.front_cap, 5000u);
    EXPECT_EQ(o.ft.tv_threshold, 0.2);
    EXPECT_EQ(o.parallelism, 2);
    EXPECT_EQ(o.budget_seconds, 30.0);
    ASSERT_TRUE(o.u0.has_value());
    EXPECT_EQ(o.u0->size(), 2);
}

TEST(ExperimentConfig, Validation)
{
    auto parse = [](const char* s) { return ExperimentConfig::from_json(nlohmann::json::parse(s), config_dir); };
    EXPECT_WFT_ERROR(parse(R"({"colour": 1})"), ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"eps": "small"})"), ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"u1": "data/psystem_bump.json", "eps": [0.5, 1.5]})").validate(),
                     ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"u1": "data/psystem_bump.json", "parallelism": 0})").validate(),
                     ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"u1": "data/missing.json"})").validate(), ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"u1": "data/psystem_bump.json", "model": "navier"})").validate(),
                     ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(parse(R"({"u1": "data/psystem_bump.json", "variant": "cubic"})").validate(),
                     ErrorKind::ConfigValidation);
    EXPECT_NO_THROW(parse(R"({"u1": "data/psystem_bump.json"})").validate());
    EXPECT_WFT_ERROR(ExperimentConfig::load(config_dir / "nope.json"), ErrorKind::ConfigValidation);
}
