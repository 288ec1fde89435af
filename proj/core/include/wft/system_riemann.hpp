// system_riemann.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/models.hpp>

#include <span>
#include <vector>

namespace wft {

struct RiemannOptions {
    double small_amplitude = 0.05;  // max |U+ - U-|_1
    double curve_radius = 0.5;      // max |beta| along one wave curve
    double newton_tol = 1e-11;      // residual |Psi(beta) - U+|_1
    int max_iterations = 50;
    double fd_step = 1e-7;
    double zero_strength = 1e-13;  // smaller |beta| are reported as exact zeros
};

/// Options for front tracking and expansion work, where jumps of the data
/// are larger than the default small-amplitude radius.
RiemannOptions wide_riemann_options();

enum class WaveKind { Shock, Rarefaction, Contact };

const char* wave_kind_name(WaveKind kind);

struct Wave {
    int family;  // first field of the group
    int group;
    WaveKind kind;
    double strength;  // beta of the family; for a repeated group, the sum of its betas
    std::vector<double> group_strengths;
    double speed_left;   // equal to speed_right for shocks and contacts
    double speed_right;
    State left;
    State right;
};

struct WaveFan {
    State left;
    State right;
    std::vector<double> beta;   // one per field
    std::vector<State> states;  // one per field group boundary: U_0 .. U_G
    std::vector<Wave> waves;    // nontrivial waves, left to right
    double residual = 0.0;
    int iterations = 0;

    /// self-similar solution at x / t = xi (right-continuous at jumps)
    State sample(const SystemModel& model, double xi) const;
};

/// Point on the j-th wave curve through u (rarefaction or Hugoniot branch for
/// GNL fields, integral curve for LD fields).
State lax_curve_point(const SystemModel& model, const State& u, int family, double beta,
                      const RiemannOptions& options = {});

/// Composite map of a field group: integral curves of each member in
/// ascending index order.
State group_curve_point(const SystemModel& model, const State& u, int group, std::span<const double> betas,
                        const RiemannOptions& options = {});

/// The full wave map Psi(u; beta_1..beta_n).
State wave_map(const SystemModel& model, const State& u, std::span<const double> beta,
               const RiemannOptions& options = {});

/// Shock speed of the GNL shock u -> lax_curve_point(u, j, beta), beta < 0.
double shock_speed(const SystemModel& model, const State& u, int family, double beta,
                   const RiemannOptions& options = {});

WaveFan riemann_solve(const SystemModel& model, const State& u_minus, const State& u_plus,
                      const RiemannOptions& options = {}, std::span<const double> guess = {});

std::vector<double> strength_decompose(const SystemModel& model, const State& u_minus, const State& u_plus,
                                       const RiemannOptions& options = {});

State rarefaction_sample(const SystemModel& model, const WaveFan& fan, int family, double xi);

}  // namespace wft
