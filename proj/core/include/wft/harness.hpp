// harness.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/geo_optics.hpp>
#include <wft/piecewise.hpp>
#include <wft/scalar_ft.hpp>
#include <wft/system_ft.hpp>

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wft {

/// Least-squares slope of log(value) against log(eps).
double fit_slope(const std::vector<std::pair<double, double>>& points);

/// 2 max|lambda| over the model's box (and the given states) plus one.
double lambda_hat(const SystemModel& model, std::span<const State> extra = {});

/// Smallest nu with 2^-nu <= eps^2 tv.
int coupled_nu(double eps, double tv);

// ---------------------------------------------------------------- reference solver

/// First-order Godunov on a uniform grid covering the domain of dependence;
/// interface fluxes from riemann_solve sampled at x/t = 0.
PiecewiseConstant godunov_reference(const SystemModel& model, const PiecewiseConstant& init, double t_final,
                                    double dx, double cfl = 0.4, const RiemannOptions& options = wide_riemann_options());

// ---------------------------------------------------------------- sweeps

enum class SweepVariant { Plain, Auxiliary, Noncompact };

const char* variant_name(SweepVariant v);
SweepVariant variant_from_name(const std::string& name);

struct TimeGrid {
    std::vector<double> multiples{0.5, 1.0, 2.0, 3.0, 5.0};  // of T0
    int tail_points = 3;                                     // geometric, up to the horizon
    double horizon = 10.0;                                   // of T0; noncompact runs stop at T0 / eps
};

/// Grid times for one run; `unit` is T0 (or 1 when T0 = 0).
std::vector<double> grid_times(const TimeGrid& grid, double unit, double horizon_time);

struct SweepOptions {
    SweepVariant variant = SweepVariant::Plain;
    TimeGrid grid;
    std::optional<int> nu;         // overrides the eps^2 TV coupling
    int nu_offset = 3;             // added to the coupled nu
    double split_factor = 0.03;    // delta_r = split_factor * eps^2
    std::optional<double> delta_r; // fixed split, overrides split_factor
    FtOptions ft;                  // split and deadline are set per run
    std::optional<State> u0;
    int parallelism = 1;
    double budget_seconds = std::numeric_limits<double>::infinity();
    double uniformity_from = 3.0;  // multiples of T0
};

struct EpsRun {
    double eps = 0.0;
    int nu = 0;
    double delta_r = 0.0;
    std::vector<double> times;
    std::vector<double> errors;
    double sup_error = 0.0;
    double uniformity = 0.0;  // max_{t >= 3 T0} err(t) / err(T0)
    double seconds = 0.0;
    std::size_t fronts = 0;
    std::size_t interactions = 0;
};

struct ConvergenceRecord {
    std::string model;
    SweepVariant variant = SweepVariant::Plain;
    double t0 = 0.0;
    double time_unit = 1.0;
    std::vector<EpsRun> runs;
    std::vector<double> halving_slopes;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double uniformity = 0.0;
};

/// |U^eps(t) - U_w^eps(t)|_L1 (or against V for the auxiliary variant) on the
/// time grid for each eps; eps must be strictly decreasing.
ConvergenceRecord convergence_sweep(const SystemModel& model, const PiecewiseConstant& u1,
                                    const std::vector<double>& eps_list, const SweepOptions& options = {});

void write_sweep_csv(std::ostream& os, const ConvergenceRecord& rec);

// ---------------------------------------------------------------- probes

enum class ProbeKind { Prop31, Prop32, Lemma32, Lemma34, Lemma51, Lemma61, LocalSemigroup };

const char* probe_kind_name(ProbeKind k);
ProbeKind probe_kind_from_name(const std::string& name);

struct ProbeRecord {
    ProbeKind kind;
    double eps;
    double h;
    double sigma;
    double measured;
    double ratio;
};

struct ProbeSeries {
    std::vector<ProbeRecord> records;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double ratio_spread = std::numeric_limits<double>::quiet_NaN();  // max ratio / min ratio
};

struct LocalProbeOptions {
    FtOptions ft;
    std::optional<double> lambda_hat;
};

/// D = |S_h U_w(t0) - U_w(t0 + h)|_L1 on [x0 - lhat h, x0 + lhat h], normalized by
/// sigma (sigma + max|sigma_-|) h eps^2. The window [x0 - 2 lhat h, x0 + 2 lhat h]
/// must contain at most one profile jump.
ProbeRecord local_estimate_probe(const ExpansionProfiles& profiles, double x0, double t0, double h,
                                 const LocalProbeOptions& options = {});

/// Residual |beta - sigma eps e_k|_1 of the Riemann strengths between the
/// probed states, for each eps; slope fitted over the chain.
ProbeSeries strength_expansion_probe(const SystemModel& model, ProbeKind kind, int k,
                                     const std::vector<double>& sigma_left, double sigma,
                                     const std::vector<double>& eps_list,
                                     const RiemannOptions& options = wide_riemann_options());

void write_probe_csv(std::ostream& os, const std::vector<ProbeRecord>& records);

struct TvDecayRecord {
    std::vector<double> times;
    std::vector<double> tv;
    double first_interaction = 0.0;
    double exponent = std::numeric_limits<double>::quiet_NaN();  // fitted over t >= first_interaction
};

/// Burgers front tracking from compactly supported data; TV at each time.
TvDecayRecord tv_decay_probe(const PiecewiseConstant& init, const std::vector<double>& times, int nu,
                             const ScalarOptions& options = {});

/// L1 distance of S_t u and S_t v on (a + lhat t, b - lhat t).
double finite_domain_probe(const SystemModel& model, const PiecewiseConstant& u, const PiecewiseConstant& v,
                           Window agree, double t, const FtOptions& options = {});

}  // namespace wft
