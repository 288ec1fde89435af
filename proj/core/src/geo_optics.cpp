// geo_optics.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/error.hpp>
#include <wft/geo_optics.hpp>

#include <algorithm>
#include <cmath>

namespace wft {

namespace {

constexpr double span_slack = 1e-12;

PiecewiseConstant zero_scalar() { return PiecewiseConstant::constant({0.0}); }

PiecewiseConstant constant_state(const State& u)
{
    return PiecewiseConstant::constant(std::vector<double>(u.data(), u.data() + u.size()));
}

// f (scalar) times the fixed vector v
PiecewiseConstant times_vector(const PiecewiseConstant& f, const State& v, double c)
{
    const auto n = static_cast<std::size_t>(v.size());
    return map_values(f, n, [&](std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = c * in[0] * v[static_cast<Eigen::Index>(i)];
    });
}

State to_state(std::span<const double> v)
{
    State s(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        s[static_cast<Eigen::Index>(i)] = v[i];
    return s;
}

std::vector<double> merged_breaks(const std::vector<PiecewiseConstant>& fs)
{
    std::vector<double> bp;
    for (const auto& f : fs)
        bp.insert(bp.end(), f.breakpoints().begin(), f.breakpoints().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

}  // namespace

ExpansionProfiles::ExpansionProfiles(const SystemModel& model, State u0, double eps, int nu)
    : m_model(&model), m_u0(std::move(u0)), m_eps(eps), m_nu(nu)
{
    if (m_u0.size() != model.size())
        throw Error(ErrorKind::DimensionMismatch, "background state has wrong size");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw Error(ErrorKind::InvalidFunction, "eps must be finite and nonnegative");
    const Eigensystem es = eigen_decompose(model, m_u0);
    const int n = model.size();
    for (int j = 0; j < n; ++j)
        m_family.push_back(FamilyInfo{es.lambda[j], es.right.col(j), es.left.row(j).transpose(),
                                      model.field_kind(j), model.group_of(j)});
    m_d2.reserve(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            m_d2.push_back(model.directional_derivative(m_u0, j, k));
    m_initial.assign(static_cast<std::size_t>(n), zero_scalar());
    m_traj.assign(static_cast<std::size_t>(n), nullptr);
}

PiecewiseConstant ExpansionProfiles::profile(int j, double tau) const
{
    const auto& info = family(j);
    if (info.kind == FieldKind::LinearlyDegenerate || initial(j).is_constant())
        return initial(j);
    if (tau > m_tau_final * (1.0 + span_slack) + span_slack)
        throw Error(ErrorKind::SpanExceeded, "profile queried past the evolved span");
    const auto* traj = trajectory(j);
    if (!traj)
        return initial(j);
    return traj->snapshot(std::min(tau, traj->t_final()));
}

PiecewiseConstant ExpansionProfiles::profile_x(int j, double t) const
{
    return shift(profile(j, m_eps * t), family(j).lambda0 * t);
}

const ScalarTrajectory* ExpansionProfiles::trajectory(int j) const
{
    return m_traj[static_cast<std::size_t>(j)].get();
}

void ExpansionProfiles::set_evolution(std::vector<std::shared_ptr<const ScalarTrajectory>> traj, double tau_final)
{
    if (traj.size() != m_family.size())
        throw Error(ErrorKind::DimensionMismatch, "one trajectory slot per family expected");
    m_traj = std::move(traj);
    m_tau_final = tau_final;
}

ExpansionProfiles project_initial(const SystemModel& model, const PiecewiseConstant& u1, double eps, int nu,
                                  std::optional<State> u0)
{
    if (u1.dim() != static_cast<std::size_t>(model.size()))
        throw Error(ErrorKind::DimensionMismatch, "U1 must have the model's dimension");
    ExpansionProfiles p(model, u0 ? *u0 : model.background(), eps, nu);
    double slack = 0.0;
    for (int j = 0; j < p.size(); ++j) {
        const State l = p.family(j).l0;
        const PiecewiseConstant raw = map_values(u1, 1, [&](std::span<const double> in, std::span<double> out) {
            out[0] = l.dot(to_state(in));
        });
        PiecewiseConstant q = quantize_to_grid(raw, nu);
        slack += std::max(0.0, total_variation(q) - total_variation(raw));
        p.set_initial(j, std::move(q));
    }
    p.set_slack(slack);
    return p;
}

ExpansionProfiles evolve_profiles(ExpansionProfiles profiles, double tau_final, const ScalarOptions& options)
{
    if (!(tau_final >= 0.0))
        throw Error(ErrorKind::OutOfSpan, "tau_final must be nonnegative");
    std::vector<std::shared_ptr<const ScalarTrajectory>> traj(static_cast<std::size_t>(profiles.size()));
    for (int j = 0; j < profiles.size(); ++j) {
        const auto& init = profiles.initial(j);
        if (profiles.family(j).kind != FieldKind::GenuinelyNonlinear || init.is_constant())
            continue;
        const AffineFlux flux = burgers_flux(profiles.nu(), sup_norm(init));
        traj[static_cast<std::size_t>(j)] =
            std::make_shared<const ScalarTrajectory>(scalar_evolve(init, flux, tau_final, options));
    }
    profiles.set_evolution(std::move(traj), tau_final);
    return profiles;
}

PiecewiseConstant assemble_expansion(const ExpansionProfiles& profiles, double t)
{
    PiecewiseConstant out = constant_state(profiles.background());
    if (profiles.eps() == 0.0)
        return out;
    for (int j = 0; j < profiles.size(); ++j) {
        const PiecewiseConstant s = profiles.profile_x(j, t);
        if (s.is_constant() && s.scalar_value(0) == 0.0)
            continue;
        out = add(out, times_vector(s, profiles.family(j).r0, profiles.eps()));
    }
    return out;
}

PiecewiseConstant assemble_auxiliary(const ExpansionProfiles& profiles, double t, CorrectionKind variant,
                                     const CorrectionField* corrections)
{
    if (corrections && corrections->kind != variant)
        throw Error(ErrorKind::KindMismatch, "correction field kind does not match the requested variant");
    const double eps = profiles.eps();
    PiecewiseConstant out = assemble_expansion(profiles, t);
    if (eps == 0.0)
        return out;
    const double e2 = eps * eps;

    if (variant == CorrectionKind::Noncompact) {
        if (corrections) {
            if (std::abs(corrections->anchor_time - t) > span_slack * (1.0 + std::abs(t)))
                throw Error(ErrorKind::SpanExceeded, "noncompact correction was built for another time");
            out = add(out, scale(corrections->fields.front(), e2));
        }
        return out;
    }

    for (int j = 0; j < profiles.size(); ++j) {
        if (profiles.family(j).kind != FieldKind::GenuinelyNonlinear)
            continue;
        const PiecewiseConstant s = profiles.profile_x(j, t);
        if (s.is_constant() && s.scalar_value(0) == 0.0)
            continue;
        const PiecewiseConstant sq = map_values(s, 1, [](std::span<const double> in, std::span<double> o) {
            o[0] = in[0] * in[0];
        });
        out = add(out, times_vector(sq, profiles.second_order(j, j), 0.5 * e2));
    }
    if (corrections) {
        const double t0 = corrections->anchor_time;
        if (t < t0 - span_slack * (1.0 + t0))
            throw Error(ErrorKind::SpanExceeded, "compact correction used before its anchor time");
        for (std::size_t g = 0; g < corrections->fields.size(); ++g) {
            const int first = profiles.model().groups()[static_cast<std::size_t>(corrections->groups[g])].first;
            const double lam = profiles.family(first).lambda0;
            out = add(out, scale(shift(corrections->fields[g], lam * (t - t0)), e2));
        }
    }
    return out;
}

CorrectionField build_correction_compact(const ExpansionProfiles& profiles, double t0, const RiemannOptions& options)
{
    const SystemModel& model = profiles.model();
    const double sep = separation_time(profiles);
    if (sep > t0 + span_slack * (1.0 + t0))
        throw Error(ErrorKind::SupportsNotSeparated,
                    "profile supports overlap at the anchor time (separation at t=" + std::to_string(sep) + ")");

    CorrectionField cf;
    cf.kind = CorrectionKind::Compact;
    cf.anchor_time = t0;
    cf.tail = State::Zero(model.size());
    const State& u0 = profiles.background();
    const double eps = profiles.eps();
    const auto groups = model.groups();
    const auto n = static_cast<std::size_t>(model.size());

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const FieldGroup grp = groups[g];
        if (model.field_kind(grp.first) != FieldKind::LinearlyDegenerate)
            continue;
        std::vector<PiecewiseConstant> members;
        for (int i = 0; i < grp.size; ++i)
            members.push_back(profiles.profile_x(grp.first + i, t0));
        const std::vector<double> bp = merged_breaks(members);

        auto sigma_sum = [&](double x) {
            State s = State::Zero(model.size());
            for (int i = 0; i < grp.size; ++i)
                s += members[static_cast<std::size_t>(i)].scalar_at(x) * profiles.family(grp.first + i).r0;
            return s;
        };

        std::vector<double> vals;
        vals.reserve((bp.size() + 1) * n);
        auto push = [&](const State& v) { vals.insert(vals.end(), v.data(), v.data() + v.size()); };
        push(State::Zero(model.size()));
        if (eps > 0.0) {
            State w = u0;
            for (std::size_t k = 0; k < bp.size(); ++k) {
                const double x = bp[k];
                State target = w;
                for (int i = 0; i < grp.size; ++i) {
                    const auto& m = members[static_cast<std::size_t>(i)];
                    const std::size_t pc = m.piece_at(x);
                    const double left = pc > 0 ? m.scalar_value(pc - 1) : m.scalar_value(0);
                    const double right = m.scalar_value(pc);
                    const bool jumps_here = pc > 0 && m.breakpoints()[pc - 1] == x;
                    if (jumps_here)
                        target += eps * (right - left) * profiles.family(grp.first + i).r0;
                }
                const std::vector<double> beta = strength_decompose(model, w, target, options);
                const std::span<const double> gb(beta.data() + grp.first, static_cast<std::size_t>(grp.size));
                w = group_curve_point(model, w, static_cast<int>(g), gb, options);
                if (k + 1 == bp.size())
                    w = u0;
                push((w - u0 - eps * sigma_sum(x)) / (eps * eps));
            }
        } else {
            for (std::size_t k = 0; k < bp.size(); ++k)
                push(State::Zero(model.size()));
        }
        PiecewiseConstant e(n, bp, std::move(vals));
        cf.sup_norm = std::max(cf.sup_norm, sup_norm(e));
        cf.groups.push_back(static_cast<int>(g));
        cf.fields.push_back(std::move(e));
    }
    return cf;
}

CorrectionField build_correction_noncompact(const ExpansionProfiles& profiles, double t)
{
    const int nf = profiles.size();
    const auto n = static_cast<std::size_t>(nf);
    std::vector<PiecewiseConstant> sig;
    sig.reserve(n);
    for (int j = 0; j < nf; ++j)
        sig.push_back(profiles.profile_x(j, t));
    const std::vector<double> bp = merged_breaks(sig);

    // left and right values of each profile at each merged breakpoint
    std::vector<double> vals;
    vals.reserve((bp.size() + 1) * n);
    State e = State::Zero(nf);
    vals.insert(vals.end(), e.data(), e.data() + e.size());
    std::vector<double> lo(n), hi(n);
    for (double x : bp) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t pc = sig[j].piece_at(x);
            hi[j] = sig[j].scalar_value(pc);
            lo[j] = (pc > 0 && sig[j].breakpoints()[pc - 1] == x) ? sig[j].scalar_value(pc - 1) : hi[j];
        }
        for (int k = 0; k < nf; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double dk = hi[ku] - lo[ku];
            if (dk == 0.0)
                continue;
            for (int j = 0; j < nf; ++j) {
                if (j == k)
                    continue;
                const auto ju = static_cast<std::size_t>(j);
                e += 0.5 * (lo[ju] + hi[ju]) * dk * profiles.second_order(j, k);
            }
            e += 0.5 * (hi[ku] * hi[ku] - lo[ku] * lo[ku]) * profiles.second_order(k, k);
        }
        vals.insert(vals.end(), e.data(), e.data() + e.size());
    }

    CorrectionField cf;
    cf.kind = CorrectionKind::Noncompact;
    cf.anchor_time = t;
    cf.tail = e;
    cf.fields.emplace_back(n, bp, std::move(vals));
    cf.sup_norm = sup_norm(cf.fields.front());
    return cf;
}

double front_slope_xt(double lambda0, double eps, double sigma_left, double sigma_jump, FieldKind kind)
{
    if (kind == FieldKind::LinearlyDegenerate)
        return lambda0;
    return lambda0 + sigma_left * eps + 0.5 * sigma_jump * eps;
}

double separation_time(const ExpansionProfiles& profiles)
{
    struct Enclosure {
        double lambda;
        double a;
        double b;
        double spread;
    };
    const SystemModel& model = profiles.model();
    std::vector<Enclosure> encl;
    for (const FieldGroup& grp : model.groups()) {
        std::optional<Window> hull;
        double spread = 0.0;
        for (int i = 0; i < grp.size; ++i) {
            const int j = grp.first + i;
            const auto& f = profiles.initial(j);
            if (f.scalar_value(0) != 0.0 || f.scalar_value(f.piece_count() - 1) != 0.0)
                throw Error(ErrorKind::NotCompactSupport, "profile of family " + std::to_string(j) +
                                                              " is not compactly supported");
            const auto h = support_hull(f);
            if (!h)
                continue;
            hull = hull ? Window{std::min(hull->a, h->a), std::max(hull->b, h->b)} : *h;
            if (profiles.family(j).kind == FieldKind::GenuinelyNonlinear)
                spread = std::max(spread, sup_norm(f));
        }
        if (hull)
            encl.push_back({profiles.family(grp.first).lambda0, hull->a, hull->b, spread});
    }

    const double eps = profiles.eps();
    double t0 = 0.0;
    for (std::size_t i = 0; i < encl.size(); ++i) {
        for (std::size_t k = i + 1; k < encl.size(); ++k) {
            const Enclosure& lo = encl[i];
            const Enclosure& hi = encl[k];
            const double kappa = hi.lambda - lo.lambda - (lo.spread + hi.spread) * eps;
            const double gap0 = hi.a - lo.b;
            if (kappa > 0.0) {
                t0 = std::max(t0, std::max(0.0, -gap0 / kappa));
            } else if (kappa < 0.0 || gap0 < 0.0) {
                throw Error(ErrorKind::NoSeparation, "supports of groups " + std::to_string(i) + " and " +
                                                         std::to_string(k) + " never separate");
            }
        }
    }
    return t0;
}

}  // namespace wft
