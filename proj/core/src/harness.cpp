// harness.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/error.hpp>
#include <wft/harness.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <ostream>

namespace wft {

namespace {

using Clock = std::chrono::steady_clock;

State to_state(std::span<const double> v)
{
    State s(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        s[static_cast<Eigen::Index>(i)] = v[i];
    return s;
}

PiecewiseConstant constant_state(const State& u)
{
    return PiecewiseConstant::constant(std::vector<double>(u.data(), u.data() + u.size()));
}

// L1 distance on the union of both supports, padded
double l1_on_support(const PiecewiseConstant& f, const PiecewiseConstant& g)
{
    auto hf = support_hull(f);
    auto hg = support_hull(g);
    Window w{-1.0, 1.0};
    if (hf && hg)
        w = {std::min(hf->a, hg->a), std::max(hf->b, hg->b)};
    else if (hf)
        w = *hf;
    else if (hg)
        w = *hg;
    return l1_distance(f, g, Window{w.a - 1.0, w.b + 1.0});
}

std::vector<State> piece_states(const PiecewiseConstant& f)
{
    std::vector<State> s;
    s.reserve(f.piece_count());
    for (std::size_t i = 0; i < f.piece_count(); ++i)
        s.push_back(to_state(f.value(i)));
    return s;
}

EpsRun run_one(const SystemModel& model, const PiecewiseConstant& u1, double eps, const State& u0, double t0,
               double unit, double tv1, const SweepOptions& options, Clock::time_point deadline)
{
    const auto start = Clock::now();
    EpsRun run;
    run.eps = eps;
    run.nu = options.nu ? *options.nu : coupled_nu(eps, tv1) + options.nu_offset;
    run.delta_r = options.delta_r ? *options.delta_r : options.split_factor * eps * eps;
    const double horizon =
        options.variant == SweepVariant::Noncompact ? unit / eps : options.grid.horizon * unit;
    run.times = grid_times(options.grid, unit, horizon);
    const double t_max = run.times.back();

    const PiecewiseConstant init = add(constant_state(u0), scale(u1, eps));
    FtOptions ft = options.ft;
    ft.split = run.delta_r;
    ft.deadline = deadline;
    const SystemTrajectory traj = ft_evolve(model, init, t_max, ft);
    run.fronts = traj.total_fronts();
    run.interactions = traj.interaction_count();

    const ExpansionProfiles prof = evolve_profiles(project_initial(model, u1, eps, run.nu, u0), eps * t_max);
    std::optional<CorrectionField> corr;
    if (options.variant == SweepVariant::Auxiliary)
        corr = build_correction_compact(prof, t0);

    for (double t : run.times) {
        if (Clock::now() > deadline)
            throw Error(ErrorKind::SweepBudgetExceeded, "sweep budget exhausted at eps = " + std::to_string(eps));
        PiecewiseConstant cmp;
        if (options.variant == SweepVariant::Auxiliary)
            cmp = assemble_auxiliary(prof, t, CorrectionKind::Compact, t >= t0 ? &*corr : nullptr);
        else
            cmp = assemble_expansion(prof, t);
        run.errors.push_back(l1_on_support(traj.snapshot(t), cmp));
    }
    run.sup_error = *std::max_element(run.errors.begin(), run.errors.end());

    double at_unit = 0.0, late = 0.0;
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        if (std::abs(run.times[i] - unit) <= 1e-12 * unit)
            at_unit = run.errors[i];
        if (run.times[i] >= options.uniformity_from * unit * (1.0 - 1e-12))
            late = std::max(late, run.errors[i]);
    }
    if (at_unit > 0.0)
        run.uniformity = late / at_unit;
    else
        run.uniformity = late > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    run.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return run;
}

}  // namespace

double fit_slope(const std::vector<std::pair<double, double>>& points)
{
    if (points.size() < 2)
        throw Error(ErrorKind::InvalidFunction, "slope fit needs at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw Error(ErrorKind::NonPositiveValue, "slope fit needs positive abscissae and values");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0)
        throw Error(ErrorKind::InvalidFunction, "slope fit needs distinct abscissae");
    return (n * sxy - sx * sy) / den;
}

double lambda_hat(const SystemModel& model, std::span<const State> extra)
{
    return 2.0 * speed_bound(model, extra) + 1.0;
}

int coupled_nu(double eps, double tv)
{
    const double target = eps * eps * tv;
    if (!(target > 0.0))
        return 10;
    int nu = std::max(1, static_cast<int>(std::ceil(-std::log2(target))));
    while (std::ldexp(1.0, -nu) > target)
        ++nu;
    return nu;
}

// ---------------------------------------------------------------- Godunov

PiecewiseConstant godunov_reference(const SystemModel& model, const PiecewiseConstant& init, double t_final,
                                    double dx, double cfl, const RiemannOptions& options)
{
    if (!(dx > 0.0) || !(cfl > 0.0 && cfl < 0.5) || !(t_final >= 0.0))
        throw Error(ErrorKind::ConfigValidation, "godunov needs dx > 0, 0 < cfl < 0.5, t_final >= 0");
    if (init.dim() != static_cast<std::size_t>(model.size()))
        throw Error(ErrorKind::DimensionMismatch, "initial data has the wrong dimension");
    const auto states = piece_states(init);
    for (const auto& s : states)
        model.require_admissible(s);
    const auto hull = support_hull(init);
    if (!hull || t_final == 0.0)
        return init;

    const double reach = speed_bound(model, states) * t_final + 4.0 * dx;
    const double xa = std::floor((hull->a - reach) / dx) * dx;
    const auto cells = static_cast<std::size_t>(std::ceil((hull->b + reach - xa) / dx));
    const int n = model.size();

    std::vector<State> u(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = xa + static_cast<double>(i) * dx;
        const auto m = integral(init, Window{a, a + dx});
        u[i] = State(n);
        for (int c = 0; c < n; ++c)
            u[i][c] = m[static_cast<std::size_t>(c)] / dx;
    }

    std::vector<State> flux(cells + 1);
    double t = 0.0;
    while (t < t_final) {
        double smax = 0.0;
        for (const auto& s : u)
            smax = std::max(smax, model.eigenvalues(s).cwiseAbs().maxCoeff());
        const double dt = std::min(cfl * dx / std::max(smax, 1e-12), t_final - t);
        for (std::size_t i = 0; i <= cells; ++i) {
            const State& l = u[i == 0 ? 0 : i - 1];
            const State& r = u[i == cells ? cells - 1 : i];
            if (l == r) {
                flux[i] = model.flux(l);
            } else {
                const WaveFan fan = riemann_solve(model, l, r, options);
                flux[i] = model.flux(fan.sample(model, 0.0));
            }
        }
        for (std::size_t i = 0; i < cells; ++i)
            u[i] -= (dt / dx) * (flux[i + 1] - flux[i]);
        t += dt;
    }

    std::vector<double> bp, vals;
    bp.reserve(cells - 1);
    vals.reserve(cells * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < cells; ++i) {
        if (i > 0)
            bp.push_back(xa + static_cast<double>(i) * dx);
        vals.insert(vals.end(), u[i].data(), u[i].data() + n);
    }
    return PiecewiseConstant(static_cast<std::size_t>(n), std::move(bp), std::move(vals));
}

// ---------------------------------------------------------------- sweeps

const char* variant_name(SweepVariant v)
{
    switch (v) {
    case SweepVariant::Plain: return "plain";
    case SweepVariant::Auxiliary: return "auxiliary";
    case SweepVariant::Noncompact: return "noncompact";
    }
    return "?";
}

SweepVariant variant_from_name(const std::string& name)
{
    for (auto v : {SweepVariant::Plain, SweepVariant::Auxiliary, SweepVariant::Noncompact})
        if (name == variant_name(v))
            return v;
    throw Error(ErrorKind::ConfigValidation, "unknown sweep variant '" + name + "'");
}

std::vector<double> grid_times(const TimeGrid& grid, double unit, double horizon_time)
{
    if (!(unit > 0.0) || !(horizon_time > 0.0))
        throw Error(ErrorKind::ConfigValidation, "time grid needs positive unit and horizon");
    std::vector<double> t;
    double last = 0.0;
    for (double m : grid.multiples) {
        const double v = m * unit;
        if (v > 0.0 && v <= horizon_time * (1.0 + 1e-12)) {
            t.push_back(v);
            last = std::max(last, v);
        }
    }
    if (last > 0.0 && horizon_time > last * (1.0 + 1e-12)) {
        const int n = std::max(1, grid.tail_points);
        for (int i = 1; i <= n; ++i)
            t.push_back(i == n ? horizon_time : last * std::pow(horizon_time / last, static_cast<double>(i) / n));
    }
    t.push_back(horizon_time);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
            t.end());
    return t;
}

ConvergenceRecord convergence_sweep(const SystemModel& model, const PiecewiseConstant& u1,
                                    const std::vector<double>& eps_list, const SweepOptions& options)
{
    if (eps_list.empty())
        throw Error(ErrorKind::ConfigValidation, "empty eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0))
            throw Error(ErrorKind::ConfigValidation, "eps values must lie in (0, 1)");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw Error(ErrorKind::ConfigValidation, "eps list must be strictly decreasing");
    }
    if (options.parallelism < 1)
        throw Error(ErrorKind::ConfigValidation, "parallelism must be at least 1");
    if (options.delta_r && !(*options.delta_r > 0.0))
        throw Error(ErrorKind::ConfigValidation, "delta_r must be positive");
    if (u1.dim() != static_cast<std::size_t>(model.size()))
        throw Error(ErrorKind::DimensionMismatch, "U1 must have the model's dimension");

    const auto deadline = std::isfinite(options.budget_seconds)
                              ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                   std::chrono::duration<double>(options.budget_seconds))
                              : Clock::time_point::max();
    const State u0 = options.u0 ? *options.u0 : model.background();
    const double tv1 = total_variation(u1);

    ConvergenceRecord rec;
    rec.model = model.name();
    rec.variant = options.variant;
    for (double eps : eps_list) {
        const int nu = options.nu ? *options.nu : coupled_nu(eps, tv1) + options.nu_offset;
        rec.t0 = std::max(rec.t0, separation_time(project_initial(model, u1, eps, nu, u0)));
    }
    rec.time_unit = rec.t0 > 0.0 ? rec.t0 : 1.0;

    auto job = [&](double eps) {
        return run_one(model, u1, eps, u0, rec.t0, rec.time_unit, tv1, options, deadline);
    };
    const auto p = static_cast<std::size_t>(options.parallelism);
    for (std::size_t i = 0; i < eps_list.size(); i += p) {
        if (p == 1) {
            rec.runs.push_back(job(eps_list[i]));
            continue;
        }
        std::vector<std::future<EpsRun>> batch;
        for (std::size_t k = i; k < std::min(i + p, eps_list.size()); ++k)
            batch.push_back(std::async(std::launch::async, job, eps_list[k]));
        for (auto& f : batch)
            rec.runs.push_back(f.get());
    }

    for (const auto& r : rec.runs)
        rec.uniformity = std::max(rec.uniformity, r.uniformity);
    bool positive = rec.runs.size() >= 2;
    for (const auto& r : rec.runs)
        positive = positive && r.sup_error > 0.0;
    if (positive) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rec.runs)
            pts.emplace_back(r.eps, r.sup_error);
        rec.slope = fit_slope(pts);
        for (std::size_t i = 0; i + 1 < rec.runs.size(); ++i)
            rec.halving_slopes.push_back(std::log(rec.runs[i].sup_error / rec.runs[i + 1].sup_error) /
                                         std::log(rec.runs[i].eps / rec.runs[i + 1].eps));
    }
    return rec;
}

void write_sweep_csv(std::ostream& os, const ConvergenceRecord& rec)
{
    const auto prec = os.precision(17);
    os << "variant,model,eps,nu,t,l1_error,err_over_eps2,sup_err,slope\n";
    for (const auto& r : rec.runs)
        for (std::size_t i = 0; i < r.times.size(); ++i)
            os << variant_name(rec.variant) << ',' << rec.model << ',' << r.eps << ',' << r.nu << ','
               << r.times[i] << ',' << r.errors[i] << ',' << r.errors[i] / (r.eps * r.eps) << ','
               << r.sup_error << ',' << rec.slope << '\n';
    os.precision(prec);
}

// ---------------------------------------------------------------- probes

const char* probe_kind_name(ProbeKind k)
{
    switch (k) {
    case ProbeKind::Prop31: return "prop31";
    case ProbeKind::Prop32: return "prop32";
    case ProbeKind::Lemma32: return "lemma32";
    case ProbeKind::Lemma34: return "lemma34";
    case ProbeKind::Lemma51: return "lemma51";
    case ProbeKind::Lemma61: return "lemma61";
    case ProbeKind::LocalSemigroup: return "localsemigroup";
    }
    return "?";
}

ProbeKind probe_kind_from_name(const std::string& name)
{
    for (auto k : {ProbeKind::Prop31, ProbeKind::Prop32, ProbeKind::Lemma32, ProbeKind::Lemma34, ProbeKind::Lemma51,
                   ProbeKind::Lemma61, ProbeKind::LocalSemigroup})
        if (name == probe_kind_name(k))
            return k;
    throw Error(ErrorKind::ConfigValidation, "unknown probe kind '" + name + "'");
}

ProbeRecord local_estimate_probe(const ExpansionProfiles& profiles, double x0, double t0, double h,
                                 const LocalProbeOptions& options)
{
    if (!(h > 0.0))
        throw Error(ErrorKind::ConfigValidation, "probe step h must be positive");
    const SystemModel& model = profiles.model();
    const double lhat = options.lambda_hat ? *options.lambda_hat : lambda_hat(model);
    const Window inner{x0 - lhat * h, x0 + lhat * h};
    const Window outer{x0 - 2.0 * lhat * h, x0 + 2.0 * lhat * h};

    int family = -1;
    double xj = x0;
    std::vector<PiecewiseConstant> sig;
    for (int j = 0; j < profiles.size(); ++j) {
        sig.push_back(profiles.profile_x(j, t0));
        for (double b : sig.back().breakpoints()) {
            if (b <= outer.a || b >= outer.b)
                continue;
            if (family >= 0)
                throw Error(ErrorKind::MultipleJumpsInWindow,
                            "more than one profile jump within " + std::to_string(2.0 * lhat * h) + " of x0");
            family = j;
            xj = b;
        }
    }

    ProbeRecord rec{ProbeKind::Prop31, profiles.eps(), h, 0.0, 0.0, 0.0};
    double sigma_minus = 0.0;
    if (family >= 0) {
        rec.kind = profiles.family(family).kind == FieldKind::GenuinelyNonlinear ? ProbeKind::Prop31
                                                                                 : ProbeKind::Prop32;
        const auto& s = sig[static_cast<std::size_t>(family)];
        const std::size_t pc = s.piece_at(xj);
        rec.sigma = s.scalar_value(pc) - s.scalar_value(pc - 1);
        for (std::size_t j = 0; j < sig.size(); ++j) {
            const double left = static_cast<int>(j) == family ? s.scalar_value(pc - 1) : sig[j].scalar_at(xj);
            sigma_minus = std::max(sigma_minus, std::abs(left));
        }
    }

    const PiecewiseConstant local = clip(assemble_expansion(profiles, t0), outer);
    const PiecewiseConstant evolved = apply_semigroup(model, local, h, options.ft);
    const PiecewiseConstant target = assemble_expansion(profiles, t0 + h);
    rec.measured = l1_distance(evolved, target, inner);
    const double eps = profiles.eps();
    const double scale_ = std::abs(rec.sigma) * (std::abs(rec.sigma) + sigma_minus) * h * eps * eps;
    rec.ratio = scale_ > 0.0 ? rec.measured / scale_ : 0.0;
    return rec;
}

ProbeSeries strength_expansion_probe(const SystemModel& model, ProbeKind kind, int k,
                                     const std::vector<double>& sigma_left, double sigma,
                                     const std::vector<double>& eps_list, const RiemannOptions& options)
{
    const int n = model.size();
    if (kind != ProbeKind::Lemma32 && kind != ProbeKind::Lemma34 && kind != ProbeKind::Lemma51 &&
        kind != ProbeKind::Lemma61)
        throw Error(ErrorKind::ConfigValidation, "strength probe kind must be lemma32, lemma34, lemma51 or lemma61");
    if (k < 0 || k >= n)
        throw Error(ErrorKind::ConfigValidation, "family index out of range");
    if (sigma_left.size() != static_cast<std::size_t>(n))
        throw Error(ErrorKind::DimensionMismatch, "sigma_left needs one entry per family");
    if (eps_list.size() < 3)
        throw Error(ErrorKind::ConfigValidation, "strength probe needs at least three eps values");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (std::abs(eps_list[i - 1] / eps_list[i] - 2.0) > 1e-9)
            throw Error(ErrorKind::ConfigValidation, "eps list must be a halving chain");

    const State u0 = model.background();
    const Eigensystem es = eigen_decompose(model, u0);
    auto d2 = [&](int j, int m) { return model.directional_derivative(u0, j, m); };
    const bool cubic = kind == ProbeKind::Lemma51 || kind == ProbeKind::Lemma61;
    const auto ku = static_cast<std::size_t>(k);

    // second-order jump of the noncompact correction across a jump of family k
    State e_plus = State::Zero(n);
    if (kind == ProbeKind::Lemma61) {
        for (int j = 0; j < n; ++j)
            if (j != k)
                e_plus += sigma_left[static_cast<std::size_t>(j)] * sigma * d2(j, k);
        const double sm = sigma_left[ku], sp = sm + sigma;
        e_plus += 0.5 * (sp * sp - sm * sm) * d2(k, k);
    }
    const State dkk = d2(k, k);

    ProbeSeries out;
    std::vector<std::pair<double, double>> pts;
    for (double eps : eps_list) {
        State um = u0, up = u0;
        switch (kind) {
        case ProbeKind::Lemma51: {
            const double sm = sigma_left[ku], sp = sm + sigma;
            um += eps * sm * es.right.col(k) + 0.5 * eps * eps * sm * sm * dkk;
            up += eps * sp * es.right.col(k) + 0.5 * eps * eps * sp * sp * dkk;
            break;
        }
        default:
            for (int j = 0; j < n; ++j)
                um += eps * sigma_left[static_cast<std::size_t>(j)] * es.right.col(j);
            up = um + eps * sigma * es.right.col(k);
            if (kind == ProbeKind::Lemma61)
                up += eps * eps * e_plus;
            break;
        }
        const auto beta = strength_decompose(model, um, up, options);
        double res = 0.0;
        for (int j = 0; j < n; ++j)
            res += std::abs(beta[static_cast<std::size_t>(j)] - (j == k ? sigma * eps : 0.0));
        const double norm = cubic ? eps * eps * eps : eps * eps;
        out.records.push_back({kind, eps, 0.0, sigma, res, res / norm});
        pts.emplace_back(eps, res);
    }
    out.slope = fit_slope(pts);
    double lo = out.records.front().ratio, hi = lo;
    for (const auto& r : out.records) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    out.ratio_spread = hi / lo;
    return out;
}

void write_probe_csv(std::ostream& os, const std::vector<ProbeRecord>& records)
{
    const auto prec = os.precision(17);
    os << "kind,eps,h,sigma,measured,ratio\n";
    for (const auto& r : records)
        os << probe_kind_name(r.kind) << ',' << r.eps << ',' << r.h << ',' << r.sigma << ',' << r.measured << ','
           << r.ratio << '\n';
    os.precision(prec);
}

TvDecayRecord tv_decay_probe(const PiecewiseConstant& init, const std::vector<double>& times, int nu,
                             const ScalarOptions& options)
{
    if (init.dim() != 1)
        throw Error(ErrorKind::DimensionMismatch, "TV decay probe needs scalar data");
    if (init.scalar_value(0) != 0.0 || init.scalar_value(init.piece_count() - 1) != 0.0)
        throw Error(ErrorKind::NotCompactSupport, "TV decay probe needs compactly supported data");
    if (times.empty())
        throw Error(ErrorKind::ConfigValidation, "empty time list");
    const PiecewiseConstant q = quantize_to_grid(init, nu);
    const double t_max = *std::max_element(times.begin(), times.end());
    const ScalarTrajectory traj = scalar_evolve(q, burgers_flux(nu, sup_norm(q)), t_max, options);

    TvDecayRecord rec;
    rec.times = times;
    rec.first_interaction =
        traj.events().empty() ? std::numeric_limits<double>::infinity() : traj.events().front().t;
    std::vector<std::pair<double, double>> pts;
    for (double t : times) {
        rec.tv.push_back(traj.total_variation_at(t));
        if (t >= rec.first_interaction && rec.tv.back() > 0.0)
            pts.emplace_back(t, rec.tv.back());
    }
    if (pts.size() >= 2)
        rec.exponent = fit_slope(pts);
    return rec;
}

double finite_domain_probe(const SystemModel& model, const PiecewiseConstant& u, const PiecewiseConstant& v,
                           Window agree, double t, const FtOptions& options)
{
    std::vector<State> ends = piece_states(u);
    const auto more = piece_states(v);
    ends.insert(ends.end(), more.begin(), more.end());
    const double lhat = lambda_hat(model, ends);
    const Window w{agree.a + lhat * t, agree.b - lhat * t};
    if (!(w.a < w.b))
        throw Error(ErrorKind::OutOfSpan, "agreement window closes before t");
    const auto su = ft_evolve(model, u, t, options).snapshot(t);
    const auto sv = ft_evolve(model, v, t, options).snapshot(t);
    return l1_distance(su, sv, w);
}

}  // namespace wft
