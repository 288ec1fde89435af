// scalar_ft.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/front_log.hpp>
#include <wft/piecewise.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wft {

/// Piecewise-linear interpolant of a scalar flux on the grid 2^{-nu} Z.
class AffineFlux {
public:
    AffineFlux(const std::function<double(double)>& f, int nu, double u_min, double u_max);

    int nu() const { return m_nu; }
    double step() const { return m_h; }
    std::int64_t first_node() const { return m_jmin; }
    std::int64_t last_node() const { return m_jmin + static_cast<std::int64_t>(m_nodes.size()) - 1; }
    double u_min() const { return grid_value(first_node()); }
    double u_max() const { return grid_value(last_node()); }

    double grid_value(std::int64_t j) const;
    bool contains(std::int64_t j) const { return j >= first_node() && j <= last_node(); }
    /// Grid index of u; throws ValueOffGrid if u is not a node in range.
    std::int64_t index_of(double u) const;

    double node(std::int64_t j) const { return m_nodes[static_cast<std::size_t>(j - m_jmin)]; }
    double operator()(double u) const;
    /// Secant slope on the cell [j h, (j+1) h].
    double secant(std::int64_t j) const { return (node(j + 1) - node(j)) / m_h; }
    double shock_speed(std::int64_t jl, std::int64_t jr) const;
    /// max |secant slope| over the range
    double lipschitz() const;

private:
    int m_nu;
    double m_h;
    std::int64_t m_jmin;
    std::vector<double> m_nodes;
};

AffineFlux affine_flux(const std::function<double(double)>& f, int nu, double u_min, double u_max);

/// Burgers flux u^2/2 on [-bound - h, bound + h] with bound rounded up to the grid.
AffineFlux burgers_flux(int nu, double bound);

enum class ScalarFrontKind { Shock, Rarefaction };

struct ScalarFront {
    double position;
    double speed;
    double left_value;
    double right_value;
    std::int64_t left_index;
    std::int64_t right_index;
    ScalarFrontKind kind;
};

std::vector<ScalarFront> scalar_riemann(double u_minus, double u_plus, const AffineFlux& flux);

struct ScalarFrontRecord {
    double t0;
    double x0;
    double speed;
    std::int64_t left;
    std::int64_t right;
    ScalarFrontKind kind;

    double position(double t) const { return x0 + speed * (t - t0); }
};

using ScalarEvent = FrontEvent;

struct ScalarOptions {
    std::size_t front_cap = 200000;
};

class ScalarTrajectory {
public:
    ScalarTrajectory(AffineFlux flux, std::int64_t left_end, double t_final)
        : m_flux(std::move(flux)), m_left_end(left_end), m_t_final(t_final) {}

    const AffineFlux& flux() const { return m_flux; }
    double t_final() const { return m_t_final; }
    const std::vector<ScalarEvent>& events() const { return m_events; }
    std::size_t interaction_count() const { return m_events.size(); }
    std::size_t total_fronts() const { return m_log.size(); }

    std::vector<ScalarFront> fronts_at(double t) const;
    PiecewiseConstant snapshot(double t) const;
    double total_variation_at(double t) const;

    // construction interface used by scalar_evolve
    FrontLog<ScalarFrontRecord>& log() { return m_log; }
    void add_event(ScalarEvent e) { m_events.push_back(std::move(e)); }

private:
    void check_span(double t) const;

    AffineFlux m_flux;
    std::int64_t m_left_end;
    double m_t_final;
    FrontLog<ScalarFrontRecord> m_log;
    std::vector<ScalarEvent> m_events;
};

ScalarTrajectory scalar_evolve(const PiecewiseConstant& init, const AffineFlux& flux, double t_final,
                               const ScalarOptions& options = {});

double lipschitz_time_bound(const ScalarTrajectory& traj, double t, double t2);

}  // namespace wft
