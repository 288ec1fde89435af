// main.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "experiment_config.hpp"

#include <wft/error.hpp>
#include <wft/geo_optics.hpp>
#include <wft/harness.hpp>
#include <wft/models.hpp>
#include <wft/piecewise.hpp>
#include <wft/scalar_ft.hpp>
#include <wft/system_ft.hpp>
#include <wft/system_riemann.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

using nlohmann::json;

namespace wft::cli {
namespace {

struct ModelArgs {
    std::string name = "psystem";
    double gamma = 1.4;
    double k = 1.0;

    void attach(CLI::App* app)
    {
        app->add_option("--model", name, "burgers | psystem | euler1d | steady-euler2d")->capture_default_str();
        app->add_option("--gamma", gamma, "adiabatic exponent")->capture_default_str();
        app->add_option("--k", k, "p-system pressure constant")->capture_default_str();
    }
    std::unique_ptr<SystemModel> make() const
    {
        const auto names = model_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw Error(ErrorKind::ConfigValidation, "unknown model '" + name + "'");
        return make_model(name, {gamma, k});
    }
};

State to_state(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_vector(const State& u) { return {u.data(), u.data() + u.size()}; }

PiecewiseConstant read_piecewise(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ConfigValidation, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigValidation, path + ": " + e.what());
    }
    return piecewise_from_json(j);
}

// writes to `path`, or to standard output when it is empty or "-"
template <class F>
void emit(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        std::cout << std::setprecision(17);
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::ConfigValidation, "cannot write " + path);
    out << std::setprecision(17);
    write(out);
}

void emit_json(const std::string& path, const json& j)
{
    emit(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json fan_json(const SystemModel& model, const WaveFan& fan)
{
    json waves = json::array();
    for (const auto& w : fan.waves)
        waves.push_back({{"family", w.family},
                         {"kind", wave_kind_name(w.kind)},
                         {"strength", w.strength},
                         {"speed_left", w.speed_left},
                         {"speed_right", w.speed_right},
                         {"left", to_vector(w.left)},
                         {"right", to_vector(w.right)}});
    return {{"model", model.name()},   {"left", to_vector(fan.left)}, {"right", to_vector(fan.right)},
            {"beta", fan.beta},        {"waves", waves},              {"residual", fan.residual},
            {"iterations", fan.iterations}};
}

int run_scalar(const std::string& init_path, int nu, double t, const std::string& out, const std::string& events)
{
    const auto init = read_piecewise(init_path);
    if (init.dim() != 1)
        throw Error(ErrorKind::ConfigValidation, "scalar data must have dim 1");
    if (nu < 0 || !(t >= 0.0))
        throw Error(ErrorKind::ConfigValidation, "need nu >= 0 and t >= 0");
    const auto q = quantize_to_grid(init, nu);
    const auto traj = scalar_evolve(q, burgers_flux(nu, sup_norm(q)), t);
    const auto snap = traj.snapshot(t);
    emit_json(out, {{"t", t},
                    {"nu", nu},
                    {"tv", total_variation(snap)},
                    {"interactions", traj.interaction_count()},
                    {"solution", to_json(snap)}});
    if (!events.empty())
        emit(events, [&](std::ostream& os) { write_events_csv(os, traj.events()); });
    return 0;
}

int run_riemann(const ModelArgs& margs, const std::vector<double>& left, const std::vector<double>& right,
                std::optional<double> radius, const std::string& out)
{
    auto model = margs.make();
    if (left.size() != static_cast<std::size_t>(model->size()) || right.size() != left.size())
        throw Error(ErrorKind::ConfigValidation, "states must have " + std::to_string(model->size()) + " components");
    RiemannOptions opts;
    if (radius) {
        opts.small_amplitude = *radius;
        opts.curve_radius = std::max(opts.curve_radius, *radius);
    }
    emit_json(out, fan_json(*model, riemann_solve(*model, to_state(left), to_state(right), opts)));
    return 0;
}

struct EvolveArgs {
    std::string init;
    double t = 1.0;
    double split = 0.01;
    std::size_t front_cap = 200000;
    double delta0 = 0.3;
    std::string out, events, diagnostics;
};

int run_evolve(const ModelArgs& margs, const EvolveArgs& a)
{
    auto model = margs.make();
    FtOptions o;
    o.split = a.split;
    o.front_cap = a.front_cap;
    o.tv_threshold = a.delta0;
    if (!(a.split > 0.0) || !(a.t >= 0.0))
        throw Error(ErrorKind::ConfigValidation, "need split > 0 and t >= 0");
    const auto traj = ft_evolve(*model, read_piecewise(a.init), a.t, o);
    const auto snap = traj.snapshot(a.t);
    emit_json(a.out, {{"model", model->name()},
                      {"t", a.t},
                      {"tv", traj.total_variation_at(a.t)},
                      {"fronts", traj.total_fronts()},
                      {"interactions", traj.interaction_count()},
                      {"conservation_bound", traj.conservation_bound(a.t)},
                      {"solution", to_json(snap)}});
    if (!a.events.empty())
        emit(a.events, [&](std::ostream& os) { write_events_csv(os, traj.events()); });
    if (!a.diagnostics.empty())
        emit(a.diagnostics, [&](std::ostream& os) { write_diagnostics_csv(os, traj.diagnostics()); });
    return 0;
}

struct ExpandArgs {
    std::string u1;
    std::vector<double> u0;
    double eps = 0.1;
    std::optional<int> nu;
    double t = 0.0;
    std::string variant = "plain";
    std::string out;
};

int run_expand(const ModelArgs& margs, const ExpandArgs& a)
{
    auto model = margs.make();
    if (!(a.eps > 0.0 && a.eps < 1.0) || !(a.t >= 0.0))
        throw Error(ErrorKind::ConfigValidation, "need eps in (0, 1) and t >= 0");
    const auto variant = variant_from_name(a.variant);
    const auto u1 = read_piecewise(a.u1);
    const int nu = a.nu ? *a.nu : coupled_nu(a.eps, std::max(total_variation(u1), 1e-300)) + 3;
    std::optional<State> u0;
    if (!a.u0.empty())
        u0 = to_state(a.u0);
    const auto prof = evolve_profiles(project_initial(*model, u1, a.eps, nu, u0), a.eps * a.t);
    json rec{{"model", model->name()}, {"eps", a.eps}, {"nu", nu}, {"t", a.t}, {"variant", variant_name(variant)}};
    PiecewiseConstant u;
    if (variant == SweepVariant::Auxiliary) {
        const double t0 = separation_time(prof);
        rec["t0"] = t0;
        if (a.t >= t0) {
            const auto corr = build_correction_compact(prof, t0);
            u = assemble_auxiliary(prof, a.t, CorrectionKind::Compact, &corr);
        } else {
            u = assemble_auxiliary(prof, a.t, CorrectionKind::Compact, nullptr);
        }
    } else if (variant == SweepVariant::Noncompact) {
        const auto corr = build_correction_noncompact(prof, a.t);
        rec["tail"] = to_vector(corr.tail);
        u = assemble_auxiliary(prof, a.t, CorrectionKind::Noncompact, &corr);
    } else {
        u = assemble_expansion(prof, a.t);
    }
    rec["solution"] = to_json(u);
    emit_json(a.out, rec);
    return 0;
}

struct ProbeArgs {
    std::string kind;
    int family = 0;
    std::vector<double> sigma_left;
    double sigma = 0.25;
    std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
    std::string u1, other;
    std::vector<double> u0;
    std::optional<int> nu;
    double x0 = 0.0, t0 = 0.5, h = 0.5;
    double a = 0.0, b = 1.0, t = 1.0;
    std::vector<double> times{4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0};
    std::string out;
};

int run_probe(const ModelArgs& margs, const ProbeArgs& p)
{
    if (p.kind == "tv-decay") {
        const auto rec = tv_decay_probe(read_piecewise(p.u1), p.times, p.nu.value_or(10));
        emit(p.out, [&](std::ostream& os) {
            os << "t,tv\n";
            for (std::size_t i = 0; i < rec.times.size(); ++i)
                os << rec.times[i] << ',' << rec.tv[i] << '\n';
        });
        std::cerr << "first interaction " << rec.first_interaction << ", exponent " << rec.exponent << '\n';
        return 0;
    }
    const ProbeKind kind = probe_kind_from_name(p.kind);
    auto model = margs.make();
    std::vector<ProbeRecord> records;
    switch (kind) {
    case ProbeKind::Lemma32:
    case ProbeKind::Lemma34:
    case ProbeKind::Lemma51:
    case ProbeKind::Lemma61: {
        std::vector<double> sl = p.sigma_left;
        if (sl.empty())
            sl.assign(static_cast<std::size_t>(model->size()), 0.0);
        const auto s = strength_expansion_probe(*model, kind, p.family, sl, p.sigma, p.eps);
        records = s.records;
        std::cerr << "slope " << s.slope << ", ratio spread " << s.ratio_spread << '\n';
        break;
    }
    case ProbeKind::Prop31:
    case ProbeKind::Prop32: {
        const auto u1 = read_piecewise(p.u1);
        std::optional<State> u0;
        if (!p.u0.empty())
            u0 = to_state(p.u0);
        for (double eps : p.eps) {
            const int nu = p.nu ? *p.nu : coupled_nu(eps, std::max(total_variation(u1), 1e-300)) + 3;
            const auto prof = evolve_profiles(project_initial(*model, u1, eps, nu, u0), eps * (p.t0 + p.h));
            records.push_back(local_estimate_probe(prof, p.x0, p.t0, p.h));
        }
        break;
    }
    case ProbeKind::LocalSemigroup: {
        const double d = finite_domain_probe(*model, read_piecewise(p.u1), read_piecewise(p.other),
                                             Window{p.a, p.b}, p.t);
        records.push_back({kind, 0.0, p.t, 0.0, d, d});
        break;
    }
    }
    emit(p.out, [&](std::ostream& os) { write_probe_csv(os, records); });
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string model;
    std::vector<double> eps;
    std::string variant;
    std::optional<int> nu;
    std::optional<int> parallelism;
    std::optional<double> budget;
    std::string u1, out, json_out, dump_config;
};

ExperimentConfig effective_config(const SweepArgs& a)
{
    ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(a.config);
    if (!a.model.empty())
        c.model = a.model;
    if (!a.eps.empty())
        c.eps = a.eps;
    if (!a.variant.empty())
        c.variant = a.variant;
    if (a.nu)
        c.nu = a.nu;
    if (a.parallelism)
        c.parallelism = *a.parallelism;
    if (a.budget)
        c.budget_seconds = a.budget;
    if (!a.u1.empty()) {
        c.u1 = a.u1;
        c.base_dir.clear();
    }
    if (!a.out.empty())
        c.output.csv = a.out;
    if (!a.json_out.empty())
        c.output.json = a.json_out;
    return c;
}

int run_sweep(const SweepArgs& a)
{
    const ExperimentConfig c = effective_config(a);
    if (!a.dump_config.empty())
        emit_json(a.dump_config, c.to_json());
    c.validate();
    auto model = make_model(c.model, c.model_params());
    const auto u1 = read_piecewise(c.u1_path().string());
    const auto rec = convergence_sweep(*model, u1, c.eps, c.sweep_options());
    emit(c.output.csv, [&](std::ostream& os) { write_sweep_csv(os, rec); });
    json runs = json::array();
    for (const auto& r : rec.runs)
        runs.push_back({{"eps", r.eps},
                        {"nu", r.nu},
                        {"delta_r", r.delta_r},
                        {"sup_error", r.sup_error},
                        {"uniformity", r.uniformity},
                        {"fronts", r.fronts},
                        {"interactions", r.interactions}});
    const json summary{{"model", rec.model},
                       {"variant", variant_name(rec.variant)},
                       {"t0", rec.t0},
                       {"time_unit", rec.time_unit},
                       {"slope", rec.slope},
                       {"halving_slopes", rec.halving_slopes},
                       {"uniformity", rec.uniformity},
                       {"runs", runs}};
    if (!c.output.json.empty())
        emit_json(c.output.json, summary);
    std::cerr << std::setprecision(4) << rec.model << ' ' << variant_name(rec.variant) << ": slope " << rec.slope
              << ", uniformity " << rec.uniformity << ", T0 " << rec.t0 << '\n';
    return 0;
}

int run_lint(const ModelArgs& margs, int samples, std::uint64_t seed, const std::string& out)
{
    if (samples < 1)
        throw Error(ErrorKind::ConfigValidation, "samples must be positive");
    std::vector<std::string> names;
    if (margs.name == "all")
        names = model_names();
    else
        names.push_back(margs.name);
    json reports = json::array();
    bool ok = true;
    for (const auto& n : names) {
        ModelArgs m = margs;
        m.name = n;
        const auto r = model_lint(*m.make(), samples, seed);
        ok = ok && r.passed;
        reports.push_back({{"model", r.model},
                           {"samples", r.samples},
                           {"biorthogonality", r.biorthogonality},
                           {"eigen_residual", r.eigen_residual},
                           {"gnl_normalization", r.gnl_normalization},
                           {"ld_degeneracy", r.ld_degeneracy},
                           {"jacobian_error", r.jacobian_error},
                           {"ordering", r.ordering},
                           {"passed", r.passed}});
        std::cerr << n << (r.passed ? ": ok\n" : ": FAILED\n");
    }
    emit_json(out, names.size() == 1 ? reports.front() : reports);
    return ok ? 0 : 2;
}

const std::set<std::string> subcommands{"scalar", "riemann", "evolve", "expand", "probe", "sweep", "lint-model"};

int run(int argc, char** argv)
{
    if (argc > 1 && argv[1][0] != '-' && !subcommands.count(argv[1]))
        throw Error(ErrorKind::UnknownSubcommand, std::string("'") + argv[1] + "'");

    CLI::App app{"wave-front tracking and weakly nonlinear expansion experiments", "wft"};
    app.require_subcommand(1);
    std::function<int()> action;

    // scalar
    std::string s_init, s_out, s_events;
    int s_nu = 8;
    double s_t = 1.0;
    auto* scalar = app.add_subcommand("scalar", "Burgers front tracking on the grid 2^-nu Z");
    scalar->add_option("--init", s_init, "piecewise JSON, dim 1")->required();
    scalar->add_option("--nu", s_nu, "grid exponent")->capture_default_str();
    scalar->add_option("--t", s_t, "final time")->capture_default_str();
    scalar->add_option("--out", s_out, "solution JSON (default stdout)");
    scalar->add_option("--events", s_events, "interaction CSV");
    scalar->callback([&] { action = [&] { return run_scalar(s_init, s_nu, s_t, s_out, s_events); }; });

    // riemann
    ModelArgs r_model;
    std::vector<double> r_left, r_right;
    std::optional<double> r_radius;
    std::string r_out;
    auto* riemann = app.add_subcommand("riemann", "solve one Riemann problem, fan as JSON");
    r_model.attach(riemann);
    riemann->add_option("--left", r_left, "left state, comma separated")->required()->delimiter(',');
    riemann->add_option("--right", r_right, "right state, comma separated")->required()->delimiter(',');
    riemann->add_option("--radius", r_radius, "small-amplitude radius (default 0.05)");
    riemann->add_option("--out", r_out, "fan JSON (default stdout)");
    riemann->callback([&] { action = [&] { return run_riemann(r_model, r_left, r_right, r_radius, r_out); }; });

    // evolve
    ModelArgs e_model;
    EvolveArgs e;
    auto* evolve = app.add_subcommand("evolve", "system front tracking");
    e_model.attach(evolve);
    evolve->add_option("--init", e.init, "piecewise JSON initial data")->required();
    evolve->add_option("--t", e.t, "final time")->capture_default_str();
    evolve->add_option("--split", e.split, "delta_r")->capture_default_str();
    evolve->add_option("--front-cap", e.front_cap)->capture_default_str();
    evolve->add_option("--delta0", e.delta0, "bound on TV of the data")->capture_default_str();
    evolve->add_option("--out", e.out, "solution JSON (default stdout)");
    evolve->add_option("--events", e.events, "interaction CSV");
    evolve->add_option("--diagnostics", e.diagnostics, "TV / front count CSV");
    evolve->callback([&] { action = [&] { return run_evolve(e_model, e); }; });

    // expand
    ModelArgs x_model;
    ExpandArgs x;
    auto* expand = app.add_subcommand("expand", "assemble the geometric-optics expansion at time t");
    x_model.attach(expand);
    expand->add_option("--u1", x.u1, "piecewise JSON perturbation")->required();
    expand->add_option("--u0", x.u0, "background state")->delimiter(',');
    expand->add_option("--eps", x.eps)->capture_default_str();
    expand->add_option("--nu", x.nu, "grid exponent (default: coupled to eps)");
    expand->add_option("--t", x.t)->capture_default_str();
    expand->add_option("--variant", x.variant, "plain | auxiliary | noncompact")->capture_default_str();
    expand->add_option("--out", x.out, "solution JSON (default stdout)");
    expand->callback([&] { action = [&] { return run_expand(x_model, x); }; });

    // probe
    ModelArgs p_model;
    ProbeArgs p;
    auto* probe = app.add_subcommand("probe", "local-estimate, strength-expansion and decay probes");
    p_model.attach(probe);
    probe->add_option("--kind", p.kind, "prop31 | prop32 | lemma32 | lemma34 | lemma51 | lemma61 | local-semigroup | tv-decay")
        ->required();
    probe->add_option("--family", p.family)->capture_default_str();
    probe->add_option("--sigma-left", p.sigma_left)->delimiter(',');
    probe->add_option("--sigma", p.sigma)->capture_default_str();
    probe->add_option("--eps", p.eps)->delimiter(',');
    probe->add_option("--u1", p.u1, "piecewise JSON (profile data, first function, or TV-decay data)");
    probe->add_option("--other", p.other, "second function for local-semigroup");
    probe->add_option("--u0", p.u0)->delimiter(',');
    probe->add_option("--nu", p.nu);
    probe->add_option("--x0", p.x0)->capture_default_str();
    probe->add_option("--t0", p.t0)->capture_default_str();
    probe->add_option("--window-h", p.h, "probe step h")->capture_default_str();
    probe->add_option("--a", p.a)->capture_default_str();
    probe->add_option("--b", p.b)->capture_default_str();
    probe->add_option("--t", p.t)->capture_default_str();
    probe->add_option("--times", p.times)->delimiter(',');
    probe->add_option("--out", p.out, "CSV (default stdout)");
    probe->callback([&] { action = [&] { return run_probe(p_model, p); }; });

    // sweep
    SweepArgs w;
    auto* sweep = app.add_subcommand("sweep", "convergence sweep over an eps chain");
    sweep->add_option("--config", w.config, "experiment config JSON");
    sweep->add_option("--model", w.model);
    sweep->add_option("--eps", w.eps)->delimiter(',');
    sweep->add_option("--variant", w.variant, "plain | auxiliary | noncompact");
    sweep->add_option("--nu", w.nu);
    sweep->add_option("--parallelism", w.parallelism);
    sweep->add_option("--budget", w.budget, "seconds");
    sweep->add_option("--u1", w.u1, "piecewise JSON perturbation");
    sweep->add_option("--out", w.out, "CSV (default stdout)");
    sweep->add_option("--json", w.json_out, "summary JSON");
    sweep->add_option("--dump-config", w.dump_config, "write the effective config ('-' for stdout)");
    sweep->callback([&] { action = [&] { return run_sweep(w); }; });

    // lint-model
    ModelArgs l_model;
    int l_samples = 200;
    std::uint64_t l_seed = 1;
    std::string l_out;
    auto* lint = app.add_subcommand("lint-model", "check eigenstructure invariants");
    l_model.attach(lint);
    lint->add_option("--samples", l_samples)->capture_default_str();
    lint->add_option("--seed", l_seed)->capture_default_str();
    lint->add_option("--out", l_out, "report JSON (default stdout)");
    lint->callback([&] { action = [&] { return run_lint(l_model, l_samples, l_seed, l_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ConfigValidation: " << e.what() << '\n';
        return 1;
    }
    return action ? action() : 1;
}

}  // namespace
}  // namespace wft::cli

int main(int argc, char** argv)
{
    try {
        return wft::cli::run(argc, argv);
    } catch (const wft::Error& e) {
        std::cerr << e.what() << '\n';
        return e.is_validation() ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
