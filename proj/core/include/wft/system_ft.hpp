// system_ft.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/front_log.hpp>
#include <wft/piecewise.hpp>
#include <wft/system_riemann.hpp>

#include <array>
#include <chrono>
#include <iosfwd>
#include <vector>

namespace wft {

struct FtOptions {
    double split = 0.01;              // delta_r, max strength of a rarefaction front
    std::size_t front_cap = 200000;
    double tv_threshold = 0.3;        // delta_0, bound on TV of the initial data
    double tv_factor = 2.0;           // C_0, TV(t) <= C_0 TV(0)
    double drop_strength = 1e-11;     // waves weaker than this are not emitted
    RiemannOptions riemann = wide_riemann_options();
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct SystemFront {
    double position;
    double speed;
    int family;
    WaveKind kind;
    State left;
    State right;
    double strength;
};

struct SystemFrontRecord {
    double t0;
    double x0;
    double speed;
    int family;
    WaveKind kind;
    State left;
    State right;
    std::array<double, max_state_size> beta;  // strength per field
    double rh_defect;                         // |F(R) - F(L) - s (R - L)|_1
    double t_end;                             // time the front was absorbed, inf while live
    double position(double t) const { return x0 + speed * (t - t0); }
};

struct FtDiagnostic {
    double t;
    double tv;
    std::size_t fronts;
};

class SystemTrajectory {
public:
    SystemTrajectory(const SystemModel& model, State left_end, double t_final)
        : m_model(&model), m_left_end(std::move(left_end)), m_t_final(t_final) {}

    const SystemModel& model() const { return *m_model; }
    double t_final() const { return m_t_final; }
    const std::vector<FrontEvent>& events() const { return m_events; }
    const std::vector<FtDiagnostic>& diagnostics() const { return m_diag; }
    std::size_t interaction_count() const { return m_events.size(); }
    std::size_t total_fronts() const { return m_log.size(); }
    double initial_tv() const { return m_diag.empty() ? 0.0 : m_diag.front().tv; }
    double max_tv() const;

    std::vector<SystemFront> fronts_at(double t) const;
    PiecewiseConstant snapshot(double t) const;
    double total_variation_at(double t) const;
    /// Bound on |integral of U(t) - U(0)|_1 from the RH defects of all fronts.
    double conservation_bound(double t) const;

    // construction interface used by ft_evolve
    FrontLog<SystemFrontRecord>& log() { return m_log; }
    void add_event(FrontEvent e) { m_events.push_back(std::move(e)); }
    void add_diagnostic(FtDiagnostic d) { m_diag.push_back(d); }

private:
    void check_span(double t) const;

    const SystemModel* m_model;
    State m_left_end;
    double m_t_final;
    FrontLog<SystemFrontRecord> m_log;
    std::vector<FrontEvent> m_events;
    std::vector<FtDiagnostic> m_diag;
};

/// Wave-front tracking; the model must outlive the trajectory.
SystemTrajectory ft_evolve(const SystemModel& model, const PiecewiseConstant& init, double t_final,
                           const FtOptions& options = {});

/// S_h w; throws InteractionWithinH if any two fronts meet before h.
PiecewiseConstant apply_semigroup(const SystemModel& model, const PiecewiseConstant& w, double h,
                                  const FtOptions& options = {});

struct StabilityPair {
    double lhs;  // |S_t u - S_t v|
    double rhs;  // |u - v|
};

StabilityPair l1_stability_probe(const SystemModel& model, const PiecewiseConstant& u, const PiecewiseConstant& v,
                                 double t, const FtOptions& options = {});

void write_events_csv(std::ostream& os, const std::vector<FrontEvent>& events);
void write_diagnostics_csv(std::ostream& os, const std::vector<FtDiagnostic>& diag);

}  // namespace wft
