// scalar_ft.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/scalar_ft.hpp>
#include <wft/error.hpp>

#include "collision.hpp"

#include <algorithm>
#include <cmath>

namespace wft {

namespace {

struct RawFront {
    std::int64_t left;
    std::int64_t right;
    double speed;
    ScalarFrontKind kind;
};

std::vector<RawFront> riemann_indices(std::int64_t jl, std::int64_t jr, const AffineFlux& flux)
{
    std::vector<RawFront> out;
    if (jl < jr) {
        out.reserve(static_cast<std::size_t>(jr - jl));
        for (std::int64_t j = jl; j < jr; ++j)
            out.push_back({j, j + 1, flux.secant(j), ScalarFrontKind::Rarefaction});
    } else if (jl > jr) {
        out.push_back({jl, jr, flux.shock_speed(jl, jr), ScalarFrontKind::Shock});
    }
    return out;
}

const char* kind_name(ScalarFrontKind k)
{
    return k == ScalarFrontKind::Shock ? "shock" : "rarefaction";
}

}  // namespace

AffineFlux::AffineFlux(const std::function<double(double)>& f, int nu, double u_min, double u_max)
    : m_nu(nu), m_h(std::ldexp(1.0, -nu))
{
    if (nu < 0 || nu > 40)
        throw Error(ErrorKind::RangeNotOnGrid, "grid exponent out of range");
    const double a = std::ldexp(u_min, nu);
    const double b = std::ldexp(u_max, nu);
    if (a != std::floor(a) || b != std::floor(b) || !(u_min <= u_max))
        throw Error(ErrorKind::RangeNotOnGrid, "flux range endpoints must be grid nodes");
    m_jmin = static_cast<std::int64_t>(a);
    const auto jmax = static_cast<std::int64_t>(b);
    m_nodes.reserve(static_cast<std::size_t>(jmax - m_jmin + 1));
    for (std::int64_t j = m_jmin; j <= jmax; ++j) {
        const double v = f(grid_value(j));
        if (!std::isfinite(v))
            throw Error(ErrorKind::RangeNotOnGrid, "flux not finite on range");
        m_nodes.push_back(v);
    }
    for (std::int64_t j = m_jmin + 1; j + 1 <= jmax; ++j)
        if (secant(j) < secant(j - 1))
            throw Error(ErrorKind::InvalidFunction, "flux must be convex (secant slopes nondecreasing)");
}

double AffineFlux::grid_value(std::int64_t j) const
{
    return std::ldexp(static_cast<double>(j), -m_nu);
}

std::int64_t AffineFlux::index_of(double u) const
{
    const double s = std::ldexp(u, m_nu);
    if (s != std::floor(s))
        throw Error(ErrorKind::ValueOffGrid, "value " + std::to_string(u) + " is not on the grid");
    const auto j = static_cast<std::int64_t>(s);
    if (!contains(j))
        throw Error(ErrorKind::ValueOffGrid, "value " + std::to_string(u) + " outside the flux range");
    return j;
}

double AffineFlux::operator()(double u) const
{
    const double s = std::ldexp(u, m_nu);
    auto j = static_cast<std::int64_t>(std::floor(s));
    if (j == last_node() && s == static_cast<double>(j))
        return node(j);
    if (!contains(j) || !contains(j + 1))
        throw Error(ErrorKind::ValueOffGrid, "evaluation outside the flux range");
    const double theta = s - static_cast<double>(j);
    if (theta == 0.0)
        return node(j);
    return (1.0 - theta) * node(j) + theta * node(j + 1);
}

double AffineFlux::shock_speed(std::int64_t jl, std::int64_t jr) const
{
    return (node(jr) - node(jl)) / (grid_value(jr) - grid_value(jl));
}

double AffineFlux::lipschitz() const
{
    double l = 0.0;
    for (std::int64_t j = first_node(); j < last_node(); ++j)
        l = std::max(l, std::abs(secant(j)));
    return l;
}

AffineFlux affine_flux(const std::function<double(double)>& f, int nu, double u_min, double u_max)
{
    return AffineFlux(f, nu, u_min, u_max);
}

AffineFlux burgers_flux(int nu, double bound)
{
    const double h = std::ldexp(1.0, -nu);
    const double b = std::ldexp(std::ceil(std::ldexp(bound, nu)), -nu) + h;
    return AffineFlux([](double u) { return 0.5 * u * u; }, nu, -b, b);
}

std::vector<ScalarFront> scalar_riemann(double u_minus, double u_plus, const AffineFlux& flux)
{
    const std::int64_t jl = flux.index_of(u_minus);
    const std::int64_t jr = flux.index_of(u_plus);
    std::vector<ScalarFront> out;
    for (const auto& f : riemann_indices(jl, jr, flux))
        out.push_back({0.0, f.speed, flux.grid_value(f.left), flux.grid_value(f.right), f.left, f.right, f.kind});
    return out;
}

void ScalarTrajectory::check_span(double t) const
{
    if (!(t >= 0.0 && t <= m_t_final))
        throw Error(ErrorKind::OutOfSpan, "time " + std::to_string(t) + " outside [0, t_final]");
}

std::vector<ScalarFront> ScalarTrajectory::fronts_at(double t) const
{
    check_span(t);
    std::vector<ScalarFront> out;
    for (auto id : m_log.live_at(t)) {
        const auto& r = m_log[id];
        out.push_back({r.position(t), r.speed, m_flux.grid_value(r.left), m_flux.grid_value(r.right), r.left,
                       r.right, r.kind});
    }
    return out;
}

PiecewiseConstant ScalarTrajectory::snapshot(double t) const
{
    const auto fronts = fronts_at(t);
    std::vector<double> bp;
    std::vector<double> vals;
    bp.reserve(fronts.size());
    vals.reserve(fronts.size() + 1);
    vals.push_back(m_flux.grid_value(m_left_end));
    for (const auto& f : fronts) {
        // order is structural; rounding may invert fronts about to meet
        bp.push_back(bp.empty() ? f.position : std::max(bp.back(), f.position));
        vals.push_back(f.right_value);
    }
    return PiecewiseConstant::collapse(1, std::move(bp), std::move(vals));
}

double ScalarTrajectory::total_variation_at(double t) const
{
    check_span(t);
    std::int64_t jumps = 0;
    for (auto id : m_log.live_at(t))
        jumps += std::abs(m_log[id].right - m_log[id].left);
    return static_cast<double>(jumps) * m_flux.step();
}

ScalarTrajectory scalar_evolve(const PiecewiseConstant& init, const AffineFlux& flux, double t_final,
                               const ScalarOptions& options)
{
    if (init.dim() != 1)
        throw Error(ErrorKind::DimensionMismatch, "scalar front tracking needs a scalar function");
    if (!(t_final >= 0.0))
        throw Error(ErrorKind::OutOfSpan, "t_final must be nonnegative");

    std::vector<std::int64_t> idx;
    idx.reserve(init.piece_count());
    for (std::size_t i = 0; i < init.piece_count(); ++i)
        idx.push_back(flux.index_of(init.scalar_value(i)));

    ScalarTrajectory traj(flux, idx.front(), t_final);
    auto& log = traj.log();
    using Id = FrontLog<ScalarFrontRecord>::Id;

    std::vector<Id> live;
    for (std::size_t i = 0; i < init.jump_count(); ++i) {
        const double x = init.breakpoints()[i];
        for (const auto& f : riemann_indices(idx[i], idx[i + 1], flux))
            live.push_back(log.add({0.0, x, f.speed, f.left, f.right, f.kind}));
    }
    log.set_initial(live);
    if (live.size() > options.front_cap)
        throw Error(ErrorKind::FrontCountExplosion, std::to_string(live.size()) + " fronts at t = 0");

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

    while (true) {
        const auto cl = detail::next_cluster(times);
        if (!cl || cl->t > t_final)
            break;
        const double t = cl->t;
        const auto& first = log[live[cl->first]];
        const auto& last = log[live[cl->last]];
        const double x = 0.5 * (first.position(t) + last.position(t));
        const std::int64_t jl = first.left;
        const std::int64_t jr = last.right;

        std::string kind;
        for (std::size_t i = cl->first; i <= cl->last; ++i) {
            if (!kind.empty())
                kind += '+';
            kind += kind_name(log[live[i]].kind);
        }

        const auto fan = riemann_indices(jl, jr, flux);
        const auto first_new = static_cast<Id>(log.size());
        std::vector<Id> fresh;
        for (const auto& f : fan)
            fresh.push_back(log.add({t, x, f.speed, f.left, f.right, f.kind}));

        const std::size_t removed = cl->last - cl->first + 1;
        log.push_step({t, static_cast<Id>(cl->first), static_cast<Id>(removed), first_new,
                       static_cast<Id>(fresh.size())});
        traj.add_event({t, x, kind, static_cast<int>(removed), static_cast<int>(fresh.size())});

        live.erase(live.begin() + cl->first, live.begin() + cl->last + 1);
        live.insert(live.begin() + cl->first, fresh.begin(), fresh.end());
        times.erase(times.begin() + cl->first, times.begin() + cl->last + 1);
        times.insert(times.begin() + cl->first, fresh.size(), detail::never);
        const std::size_t lo = cl->first > 0 ? cl->first - 1 : 0;
        const std::size_t hi = std::min(live.size(), cl->first + fresh.size() + 1);
        for (std::size_t i = lo; i < hi; ++i)
            times[i] = pair_time(i, t);

        if (live.size() > options.front_cap)
            throw Error(ErrorKind::FrontCountExplosion,
                        std::to_string(live.size()) + " live fronts at t = " + std::to_string(t));
    }
    return traj;
}

double lipschitz_time_bound(const ScalarTrajectory& traj, double t, double t2)
{
    return l1_distance(traj.snapshot(t), traj.snapshot(t2));
}

}  // namespace wft
