// experiment_config.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/harness.hpp>
#include <wft/models.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wft::cli {

struct SolverConfig {
    std::optional<double> delta_r;  // unset: split_factor * eps^2
    double split_factor = 0.03;
    std::size_t front_cap = 200000;
    double delta0 = 0.3;

    bool operator==(const SolverConfig&) const = default;
};

struct OutputConfig {
    std::string csv;   // empty: standard output
    std::string json;  // summary record, optional

    bool operator==(const OutputConfig&) const = default;
};

struct GridConfig {
    std::vector<double> multiples{0.5, 1.0, 2.0, 3.0, 5.0};
    int tail_points = 3;
    double horizon = 10.0;

    bool operator==(const GridConfig&) const = default;
};

// Defaults (one table, see README):
//   model psystem, gamma 1.4, k 1, U0 = model background, eps {0.2, 0.1, 0.05, 0.025},
//   nu coupled with offset 3, variant plain, grid {0.5,1,2,3,5} T0 + 3 tail points to 10 T0,
//   split_factor 0.03, front_cap 200000, delta0 0.3, parallelism 1, seed 1, no budget.
struct ExperimentConfig {
    std::string model = "psystem";
    double gamma = 1.4;
    double k = 1.0;
    std::optional<std::vector<double>> u0;
    std::string u1;  // path to a piecewise JSON file, relative to the config file
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    std::optional<int> nu;
    int nu_offset = 3;
    std::string variant = "plain";
    GridConfig grid;
    SolverConfig solver;
    OutputConfig output;
    int parallelism = 1;
    std::uint64_t seed = 1;
    std::optional<double> budget_seconds;

    std::filesystem::path base_dir;  // directory of the loaded file, not serialized

    bool operator==(const ExperimentConfig& o) const { return to_json() == o.to_json(); }

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j, std::filesystem::path base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& file);

    /// Throws ConfigValidation; checks the referenced files exist.
    void validate() const;

    std::filesystem::path u1_path() const;
    ModelParams model_params() const { return {gamma, k}; }
    SweepOptions sweep_options() const;
};

}  // namespace wft::cli
