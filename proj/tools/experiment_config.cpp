// experiment_config.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "experiment_config.hpp"

#include <wft/error.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace wft::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw Error(ErrorKind::ConfigValidation, "unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out)
{
    if (j.contains(key) && !j.at(key).is_null())
        out = j.at(key).get<T>();
}

}  // namespace

json ExperimentConfig::to_json() const
{
    json j;
    j["model"] = {{"name", model}, {"gamma", gamma}, {"k", k}};
    j["u0"] = u0 ? json(*u0) : json(nullptr);
    j["u1"] = u1;
    j["eps"] = eps;
    j["nu"] = nu ? json(*nu) : json(nullptr);
    j["nu_offset"] = nu_offset;
    j["variant"] = variant;
    j["grid"] = {{"multiples", grid.multiples}, {"tail_points", grid.tail_points}, {"horizon", grid.horizon}};
    j["solver"] = {{"delta_r", solver.delta_r ? json(*solver.delta_r) : json(nullptr)},
                   {"split_factor", solver.split_factor},
                   {"front_cap", solver.front_cap},
                   {"delta0", solver.delta0}};
    j["output"] = {{"csv", output.csv}, {"json", output.json}};
    j["parallelism"] = parallelism;
    j["seed"] = seed;
    j["budget_seconds"] = budget_seconds ? json(*budget_seconds) : json(nullptr);
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, std::filesystem::path base_dir)
{
    ExperimentConfig c;
    c.base_dir = std::move(base_dir);
    try {
        if (!j.is_object())
            throw Error(ErrorKind::ConfigValidation, "config must be a JSON object");
        reject_unknown(j,
                       {"model", "u0", "u1", "eps", "nu", "nu_offset", "variant", "grid", "solver", "output",
                        "parallelism", "seed", "budget_seconds"},
                       "config");
        if (j.contains("model")) {
            const json& m = j.at("model");
            if (m.is_string()) {
                c.model = m.get<std::string>();
            } else {
                reject_unknown(m, {"name", "gamma", "k"}, "model");
                read(m, "name", c.model);
                read(m, "gamma", c.gamma);
                read(m, "k", c.k);
            }
        }
        read(j, "u0", c.u0);
        read(j, "u1", c.u1);
        read(j, "eps", c.eps);
        read(j, "nu", c.nu);
        read(j, "nu_offset", c.nu_offset);
        read(j, "variant", c.variant);
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            reject_unknown(g, {"multiples", "tail_points", "horizon"}, "grid");
            read(g, "multiples", c.grid.multiples);
            read(g, "tail_points", c.grid.tail_points);
            read(g, "horizon", c.grid.horizon);
        }
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            reject_unknown(s, {"delta_r", "split_factor", "front_cap", "delta0"}, "solver");
            read(s, "delta_r", c.solver.delta_r);
            read(s, "split_factor", c.solver.split_factor);
            read(s, "front_cap", c.solver.front_cap);
            read(s, "delta0", c.solver.delta0);
        }
        if (j.contains("output")) {
            const json& o = j.at("output");
            reject_unknown(o, {"csv", "json"}, "output");
            read(o, "csv", c.output.csv);
            read(o, "json", c.output.json);
        }
        read(j, "parallelism", c.parallelism);
        read(j, "seed", c.seed);
        read(j, "budget_seconds", c.budget_seconds);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigValidation, e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error(ErrorKind::ConfigValidation, "cannot open config " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigValidation, file.string() + ": " + e.what());
    }
    return from_json(j, file.parent_path());
}

std::filesystem::path ExperimentConfig::u1_path() const
{
    const std::filesystem::path p(u1);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

void ExperimentConfig::validate() const
{
    const auto names = model_names();
    if (std::find(names.begin(), names.end(), model) == names.end())
        throw Error(ErrorKind::ConfigValidation, "unknown model '" + model + "'");
    if (eps.empty())
        throw Error(ErrorKind::ConfigValidation, "eps list is empty");
    for (double e : eps)
        if (!(e > 0.0 && e < 1.0))
            throw Error(ErrorKind::ConfigValidation, "eps values must lie in (0, 1)");
    if (parallelism < 1)
        throw Error(ErrorKind::ConfigValidation, "parallelism must be at least 1");
    if (nu && *nu < 0)
        throw Error(ErrorKind::ConfigValidation, "nu must be nonnegative");
    variant_from_name(variant);
    if (grid.multiples.empty() || grid.tail_points < 0 || !(grid.horizon > 0.0))
        throw Error(ErrorKind::ConfigValidation, "bad time grid");
    if (solver.delta_r && !(*solver.delta_r > 0.0))
        throw Error(ErrorKind::ConfigValidation, "solver.delta_r must be positive");
    if (!(solver.split_factor > 0.0) || !(solver.delta0 > 0.0) || solver.front_cap == 0)
        throw Error(ErrorKind::ConfigValidation, "bad solver parameters");
    if (budget_seconds && !(*budget_seconds > 0.0))
        throw Error(ErrorKind::ConfigValidation, "budget_seconds must be positive");
    if (u1.empty())
        throw Error(ErrorKind::ConfigValidation, "u1 path is required");
    if (!std::filesystem::is_regular_file(u1_path()))
        throw Error(ErrorKind::ConfigValidation, "u1 file not found: " + u1_path().string());
}

SweepOptions ExperimentConfig::sweep_options() const
{
    SweepOptions o;
    o.variant = variant_from_name(variant);
    o.grid = TimeGrid{grid.multiples, grid.tail_points, grid.horizon};
    o.nu = nu;
    o.nu_offset = nu_offset;
    o.split_factor = solver.split_factor;
    o.delta_r = solver.delta_r;
    o.ft.front_cap = solver.front_cap;
    o.ft.tv_threshold = solver.delta0;
    if (u0)
        o.u0 = State(Eigen::Map<const Eigen::VectorXd>(u0->data(), static_cast<Eigen::Index>(u0->size())));
    o.parallelism = parallelism;
    if (budget_seconds)
        o.budget_seconds = *budget_seconds;
    return o;
}

}  // namespace wft::cli
