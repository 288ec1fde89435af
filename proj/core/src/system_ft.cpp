// system_ft.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/system_ft.hpp>
#include <wft/error.hpp>

#include "collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace wft {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct NewFront {
    double speed;
    int family;
    WaveKind kind;
    State left;
    State right;
    std::array<double, max_state_size> beta;
};

double wave_size(const Wave& w)
{
    double s = 0.0;
    for (double b : w.group_strengths)
        s += std::abs(b);
    return s;
}

// Fronts for a solved Riemann problem. Waves below the drop threshold are
// skipped and their jump is carried by the next emitted front, so the outer
// states stay exactly fan.left and fan.right.
std::vector<NewFront> fronts_from_fan(const SystemModel& model, const WaveFan& fan, double max_rarefaction,
                                      const FtOptions& opt)
{
    std::vector<const Wave*> kept;
    const Wave* strongest = nullptr;
    for (const auto& w : fan.waves) {
        if (!strongest || wave_size(w) > wave_size(*strongest))
            strongest = &w;
        if (wave_size(w) >= opt.drop_strength)
            kept.push_back(&w);
    }
    if (kept.empty() && strongest && fan.left != fan.right)
        kept.push_back(strongest);

    std::vector<NewFront> out;
    State cur = fan.left;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const Wave& w = *kept[i];
        const State end = i + 1 == kept.size() ? fan.right : w.right;
        std::array<double, max_state_size> beta{};
        for (std::size_t k = 0; k < w.group_strengths.size(); ++k)
            beta[static_cast<std::size_t>(w.family) + k] = w.group_strengths[k];

        if (w.kind == WaveKind::Rarefaction) {
            const int pieces = std::max(1, static_cast<int>(std::ceil(w.strength / max_rarefaction - 1e-12)));
            for (int k = 1; k <= pieces; ++k) {
                const State r = k == pieces ? end
                                            : lax_curve_point(model, w.left, w.family, w.strength * k / pieces,
                                                              opt.riemann);
                auto b = beta;
                b[static_cast<std::size_t>(w.family)] = w.strength / pieces;
                out.push_back({model.eigenvalue(r, w.family), w.family, w.kind, cur, r, b});
                cur = r;
            }
        } else {
            out.push_back({w.speed_left, w.family, w.kind, cur, end, beta});
            cur = end;
        }
    }
    return out;
}

const char* front_kind_name(WaveKind k)
{
    return k == WaveKind::Rarefaction ? "rarefaction" : wave_kind_name(k);
}

}  // namespace

void SystemTrajectory::check_span(double t) const
{
    if (!(t >= 0.0 && t <= m_t_final))
        throw Error(ErrorKind::OutOfSpan, "time " + std::to_string(t) + " outside [0, t_final]");
}

double SystemTrajectory::max_tv() const
{
    double m = 0.0;
    for (const auto& d : m_diag)
        m = std::max(m, d.tv);
    return m;
}

std::vector<SystemFront> SystemTrajectory::fronts_at(double t) const
{
    check_span(t);
    std::vector<SystemFront> out;
    for (auto id : m_log.live_at(t)) {
        const auto& r = m_log[id];
        double s = 0.0;
        for (double b : r.beta)
            s += b;
        out.push_back({r.position(t), r.speed, r.family, r.kind, r.left, r.right, s});
    }
    return out;
}

PiecewiseConstant SystemTrajectory::snapshot(double t) const
{
    check_span(t);
    const auto ids = m_log.live_at(t);
    const auto n = static_cast<std::size_t>(m_left_end.size());
    std::vector<double> bp;
    std::vector<double> vals(m_left_end.data(), m_left_end.data() + n);
    bp.reserve(ids.size());
    vals.reserve((ids.size() + 1) * n);
    for (auto id : ids) {
        const auto& r = m_log[id];
        const double x = r.position(t);
        bp.push_back(bp.empty() ? x : std::max(bp.back(), x));
        vals.insert(vals.end(), r.right.data(), r.right.data() + n);
    }
    return PiecewiseConstant::collapse(n, std::move(bp), std::move(vals));
}

double SystemTrajectory::total_variation_at(double t) const
{
    check_span(t);
    double tv = 0.0;
    for (auto id : m_log.live_at(t))
        tv += norm1(m_log[id].right - m_log[id].left);
    return tv;
}

double SystemTrajectory::conservation_bound(double t) const
{
    check_span(t);
    double s = 0.0;
    for (std::size_t i = 0; i < m_log.size(); ++i) {
        const auto& r = m_log[static_cast<FrontLog<SystemFrontRecord>::Id>(i)];
        if (r.t0 <= t)
            s += r.rh_defect * (std::min(t, r.t_end) - r.t0);
    }
    return s;
}

SystemTrajectory ft_evolve(const SystemModel& model, const PiecewiseConstant& init, double t_final,
                           const FtOptions& options)
{
    const auto n = static_cast<std::size_t>(model.size());
    if (init.dim() != n)
        throw Error(ErrorKind::DimensionMismatch,
                    model.name() + " needs " + std::to_string(n) + "-vector data, got dim " + std::to_string(init.dim()));
    if (!(t_final >= 0.0))
        throw Error(ErrorKind::OutOfSpan, "t_final must be nonnegative");
    if (!(options.split > 0.0))
        throw Error(ErrorKind::ConfigValidation, "rarefaction splitting threshold must be positive");

    auto state = [&](std::size_t piece) {
        State u(static_cast<Eigen::Index>(n));
        const auto v = init.value(piece);
        for (std::size_t k = 0; k < n; ++k)
            u[static_cast<Eigen::Index>(k)] = v[k];
        return u;
    };
    const double tv0 = total_variation(init);
    if (tv0 > options.tv_threshold)
        throw Error(ErrorKind::InitialTVTooLarge,
                    "TV = " + std::to_string(tv0) + " exceeds " + std::to_string(options.tv_threshold));

    SystemTrajectory traj(model, state(0), t_final);
    model.require_admissible(state(0));
    auto& log = traj.log();
    using Id = FrontLog<SystemFrontRecord>::Id;

    auto record = [&](const NewFront& f, double t, double x) {
        const double defect = norm1(model.flux(f.right) - model.flux(f.left) - f.speed * (f.right - f.left));
        return log.add({t, x, f.speed, f.family, f.kind, f.left, f.right, f.beta, defect, inf});
    };

    std::vector<Id> live;
    double tv = 0.0;
    for (std::size_t i = 0; i < init.jump_count(); ++i) {
        const double x = init.breakpoints()[i];
        const auto fan = riemann_solve(model, state(i), state(i + 1), options.riemann);
        for (const auto& f : fronts_from_fan(model, fan, options.split, options))
            live.push_back(record(f, 0.0, x));
    }
    for (auto id : live)
        tv += norm1(log[id].right - log[id].left);
    log.set_initial(live);
    traj.add_diagnostic({0.0, tv, live.size()});
    if (live.size() > options.front_cap)
        throw Error(ErrorKind::FrontCountExplosion, std::to_string(live.size()) + " fronts at t = 0");
    const double tv_limit = options.tv_factor * tv + 1e-14;

    auto pair_time = [&](std::size_t i, double t_now) {
        if (i + 1 >= live.size())
            return detail::never;
        const auto& a = log[live[i]];
        const auto& b = log[live[i + 1]];
        return detail::meet_time(a.x0, a.speed, a.t0, b.x0, b.speed, b.t0, t_now);
    };
    std::vector<double> times(live.size());
    for (std::size_t i = 0; i < live.size(); ++i)
        times[i] = pair_time(i, 0.0);

    // interaction fans are split more coarsely so weak crossings do not refine
    const double max_rarefaction = 2.0 * options.split;
    std::size_t events = 0;
    while (true) {
        const auto cl = detail::next_cluster(times);
        if (!cl || cl->t > t_final)
            break;
        if (++events % 64 == 0 && std::chrono::steady_clock::now() > options.deadline)
            throw Error(ErrorKind::SweepBudgetExceeded, "front tracking stopped at t = " + std::to_string(cl->t));

        const double t = cl->t;
        const auto& first = log[live[cl->first]];
        const auto& last = log[live[cl->last]];
        const double x = 0.5 * (first.position(t) + last.position(t));

        std::string kind;
        std::array<double, max_state_size> guess{};
        for (std::size_t i = cl->first; i <= cl->last; ++i) {
            auto& r = log[live[i]];
            if (!kind.empty())
                kind += '+';
            kind += front_kind_name(r.kind);
            for (std::size_t k = 0; k < n; ++k)
                guess[k] += r.beta[k];
            r.t_end = t;
            tv -= norm1(r.right - r.left);
        }

        const auto fan = riemann_solve(model, first.left, last.right, options.riemann,
                                       std::span<const double>(guess.data(), n));
        const auto fresh_fronts = fronts_from_fan(model, fan, max_rarefaction, options);
        const auto first_new = static_cast<Id>(log.size());
        std::vector<Id> fresh;
        for (const auto& f : fresh_fronts) {
            fresh.push_back(record(f, t, x));
            tv += norm1(f.right - f.left);
        }

        const std::size_t removed = cl->last - cl->first + 1;
        log.push_step({t, static_cast<Id>(cl->first), static_cast<Id>(removed), first_new,
                       static_cast<Id>(fresh.size())});
        traj.add_event({t, x, kind, static_cast<int>(removed), static_cast<int>(fresh.size())});

        live.erase(live.begin() + static_cast<std::ptrdiff_t>(cl->first),
                   live.begin() + static_cast<std::ptrdiff_t>(cl->last + 1));
        live.insert(live.begin() + static_cast<std::ptrdiff_t>(cl->first), fresh.begin(), fresh.end());
        times.erase(times.begin() + static_cast<std::ptrdiff_t>(cl->first),
                    times.begin() + static_cast<std::ptrdiff_t>(cl->last + 1));
        times.insert(times.begin() + static_cast<std::ptrdiff_t>(cl->first), fresh.size(), detail::never);
        const std::size_t lo = cl->first > 0 ? cl->first - 1 : 0;
        const std::size_t hi = std::min(live.size(), cl->first + fresh.size() + 1);
        for (std::size_t i = lo; i < hi; ++i)
            times[i] = pair_time(i, t);

        traj.add_diagnostic({t, tv, live.size()});
        if (live.size() > options.front_cap)
            throw Error(ErrorKind::FrontCountExplosion,
                        std::to_string(live.size()) + " live fronts at t = " + std::to_string(t));
        if (tv > tv_limit)
            throw Error(ErrorKind::TVBlowup, "TV " + std::to_string(tv) + " exceeds " + std::to_string(tv_limit) +
                                                 " at t = " + std::to_string(t));
    }
    return traj;
}

PiecewiseConstant apply_semigroup(const SystemModel& model, const PiecewiseConstant& w, double h,
                                  const FtOptions& options)
{
    const auto traj = ft_evolve(model, w, h, options);
    if (traj.interaction_count() > 0)
        throw Error(ErrorKind::InteractionWithinH, "fronts interact at t = " + std::to_string(traj.events()[0].t) +
                                                       " < h = " + std::to_string(h));
    return traj.snapshot(h);
}

StabilityPair l1_stability_probe(const SystemModel& model, const PiecewiseConstant& u, const PiecewiseConstant& v,
                                 double t, const FtOptions& options)
{
    const double rhs = l1_distance(u, v);
    const auto su = ft_evolve(model, u, t, options).snapshot(t);
    const auto sv = ft_evolve(model, v, t, options).snapshot(t);
    return {l1_distance(su, sv), rhs};
}

void write_events_csv(std::ostream& os, const std::vector<FrontEvent>& events)
{
    const auto prec = os.precision(17);
    os << "t,x,kind,in,out\n";
    for (const auto& e : events)
        os << e.t << ',' << e.x << ',' << e.kind << ',' << e.in_fronts << ',' << e.out_fronts << '\n';
    os.precision(prec);
}

void write_diagnostics_csv(std::ostream& os, const std::vector<FtDiagnostic>& diag)
{
    const auto prec = os.precision(17);
    os << "t,tv,front_count\n";
    for (const auto& d : diag)
        os << d.t << ',' << d.tv << ',' << d.fronts << '\n';
    os.precision(prec);
}

}  // namespace wft
