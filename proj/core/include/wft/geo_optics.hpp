// geo_optics.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <wft/models.hpp>
#include <wft/piecewise.hpp>
#include <wft/scalar_ft.hpp>
#include <wft/system_riemann.hpp>

#include <memory>
#include <optional>
#include <vector>

namespace wft {

struct FamilyInfo {
    double lambda0;
    State r0;
    State l0;
    FieldKind kind;
    int group;
};

/// Per-family scalar profiles sigma_j(tau, y) around the background state.
/// The model must outlive the profiles.
class ExpansionProfiles {
public:
    ExpansionProfiles(const SystemModel& model, State u0, double eps, int nu);

    const SystemModel& model() const { return *m_model; }
    const State& background() const { return m_u0; }
    double eps() const { return m_eps; }
    int nu() const { return m_nu; }
    int size() const { return static_cast<int>(m_family.size()); }
    const FamilyInfo& family(int j) const { return m_family[static_cast<std::size_t>(j)]; }
    /// (r_j . grad) r_k at the background state
    const State& second_order(int j, int k) const { return m_d2[static_cast<std::size_t>(j * size() + k)]; }

    const PiecewiseConstant& initial(int j) const { return m_initial[static_cast<std::size_t>(j)]; }
    double tau_final() const { return m_tau_final; }
    /// TV(sigma_nu(0)) - TV(l_j . U1), summed over families
    double quantization_slack() const { return m_slack; }

    /// sigma_j(tau, .) in the y variable; throws SpanExceeded past the evolved span
    PiecewiseConstant profile(int j, double tau) const;
    /// sigma_j(eps t, x - lambda_j t) in the x variable
    PiecewiseConstant profile_x(int j, double t) const;
    const ScalarTrajectory* trajectory(int j) const;

    // construction interface
    void set_initial(int j, PiecewiseConstant f) { m_initial[static_cast<std::size_t>(j)] = std::move(f); }
    void set_slack(double s) { m_slack = s; }
    void set_evolution(std::vector<std::shared_ptr<const ScalarTrajectory>> traj, double tau_final);

private:
    const SystemModel* m_model;
    State m_u0;
    double m_eps;
    int m_nu;
    std::vector<FamilyInfo> m_family;
    std::vector<State> m_d2;
    std::vector<PiecewiseConstant> m_initial;
    std::vector<std::shared_ptr<const ScalarTrajectory>> m_traj;
    double m_tau_final = 0.0;
    double m_slack = 0.0;
};

/// sigma_j(0, .) = quantize(l_j(U0) . U1, nu)
ExpansionProfiles project_initial(const SystemModel& model, const PiecewiseConstant& u1, double eps, int nu,
                                  std::optional<State> u0 = std::nullopt);

/// GNL profiles by scalar front tracking with the Burgers flux; LD profiles stay frozen.
ExpansionProfiles evolve_profiles(ExpansionProfiles profiles, double tau_final, const ScalarOptions& options = {});

/// U0 + eps sum_j sigma_j(eps t, x - lambda_j t) r_j
PiecewiseConstant assemble_expansion(const ExpansionProfiles& profiles, double t);

enum class CorrectionKind { Compact, Noncompact };

struct CorrectionField {
    CorrectionKind kind;
    double anchor_time;               // T0 for the compact kind, t for the noncompact kind
    std::vector<int> groups;          // compact: LD group index of each field
    std::vector<PiecewiseConstant> fields;
    double sup_norm = 0.0;
    State tail;                       // noncompact: E(+inf), zero for L1 fields
};

/// V = U0 + eps sum sigma r + eps^2 / 2 sum_GNL sigma^2 (r . grad) r + eps^2 sum_LD E_j(x - lambda_j (t - T0))
/// or, for the noncompact kind, U0 + eps sum sigma r + eps^2 E(t, x).
PiecewiseConstant assemble_auxiliary(const ExpansionProfiles& profiles, double t, CorrectionKind variant,
                                     const CorrectionField* corrections = nullptr);

CorrectionField build_correction_compact(const ExpansionProfiles& profiles, double t0,
                                         const RiemannOptions& options = wide_riemann_options());

CorrectionField build_correction_noncompact(const ExpansionProfiles& profiles, double t);

double front_slope_xt(double lambda0, double eps, double sigma_left, double sigma_jump, FieldKind kind);

/// Earliest time after which the supports of the family groups stay disjoint.
double separation_time(const ExpansionProfiles& profiles);

}  // namespace wft
