// system_riemann.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/system_riemann.hpp>
#include <wft/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wft {

namespace {

using Bordered = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, max_state_size + 1, max_state_size + 1>;
using BorderedVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, max_state_size + 1, 1>;

constexpr double rk_max_step = 1.0 / 1024.0;
constexpr double tiny_shock = 1e-6;

void check_radius(double beta, const RiemannOptions& opt)
{
    if (std::abs(beta) > opt.curve_radius)
        throw Error(ErrorKind::CurveRadiusExceeded,
                    "|beta| = " + std::to_string(std::abs(beta)) + " exceeds " + std::to_string(opt.curve_radius));
}

// integral curve of r_j, classical RK4
State integral_curve(const SystemModel& model, const State& u, int j, double beta)
{
    if (beta == 0.0)
        return u;
    const int steps = std::clamp(static_cast<int>(std::ceil(std::abs(beta) / rk_max_step)), 1, 32);
    const double h = beta / steps;
    State x = u;
    for (int s = 0; s < steps; ++s) {
        const State k1 = model.right_eigenvector(x, j);
        const State k2 = model.right_eigenvector(x + 0.5 * h * k1, j);
        const State k3 = model.right_eigenvector(x + 0.5 * h * k2, j);
        const State k4 = model.right_eigenvector(x + h * k3, j);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

struct CurveResult {
    State state;
    double speed;  // shock speed, NaN unless a shock
};

// Hugoniot locus point parameterized so that it matches the integral curve
// in the l_j(u) direction; both branches then agree to second order.
CurveResult hugoniot(const SystemModel& model, const State& u, int j, double beta)
{
    const State r = integral_curve(model, u, j, beta);
    if (std::abs(beta) <= tiny_shock)
        return {r, 0.5 * (model.eigenvalue(u, j) + model.eigenvalue(r, j))};

    const int n = model.size();
    const auto e = model.eigensystem(u);
    const Eigen::RowVectorXd l = e.left.row(j);
    const double target = l.dot(r - u);
    const State fu = model.flux(u);

    State s = r;
    double speed = 0.5 * (model.eigenvalue(u, j) + model.eigenvalue(r, j));
    const double scale = 1.0 + norm1(fu);
    for (int it = 0; it < 40; ++it) {
        BorderedVec g(n + 1);
        g.head(n) = model.flux(s) - fu - speed * (s - u);
        g[n] = l.dot(s - u) - target;
        Bordered m = Bordered::Zero(n + 1, n + 1);
        m.topLeftCorner(n, n) = model.jacobian(s) - speed * Matrix::Identity(n, n);
        m.topRightCorner(n, 1) = -(s - u);
        m.bottomLeftCorner(1, n) = l;
        const BorderedVec d = m.partialPivLu().solve(-g);
        s += d.head(n);
        speed += d[n];
        if (d.head(n).cwiseAbs().sum() <= 1e-15 * (1.0 + norm1(s)) || g.cwiseAbs().sum() <= 1e-16 * scale) {
            if (!model.admissible(s))
                break;
            return {s, speed};
        }
    }
    throw Error(ErrorKind::NewtonDivergence, model.name() + ": Hugoniot solve for family " + std::to_string(j) +
                                                 " did not converge (beta = " + std::to_string(beta) + ")");
}

CurveResult curve(const SystemModel& model, const State& u, int j, double beta, const RiemannOptions& opt)
{
    check_radius(beta, opt);
    if (beta == 0.0)
        return {u, std::numeric_limits<double>::quiet_NaN()};
    if (model.field_kind(j) == FieldKind::GenuinelyNonlinear && beta < 0.0)
        return hugoniot(model, u, j, beta);
    return {integral_curve(model, u, j, beta), std::numeric_limits<double>::quiet_NaN()};
}

struct GroupStep {
    State right;
    double speed;  // shock speed when applicable
};

GroupStep apply_group(const SystemModel& model, const State& u, const FieldGroup& g, std::span<const double> beta,
                      const RiemannOptions& opt)
{
    if (g.size == 1) {
        auto c = curve(model, u, g.first, beta[static_cast<std::size_t>(g.first)], opt);
        if (!model.admissible(c.state))
            throw Error(ErrorKind::InadmissibleState, model.name() + ": wave curve left the admissible region");
        return {c.state, c.speed};
    }
    State x = u;
    for (int k = g.first; k < g.first + g.size; ++k) {
        const double b = beta[static_cast<std::size_t>(k)];
        check_radius(b, opt);
        x = integral_curve(model, x, k, b);
    }
    if (!model.admissible(x))
        throw Error(ErrorKind::InadmissibleState, model.name() + ": wave curve left the admissible region");
    return {x, std::numeric_limits<double>::quiet_NaN()};
}

State psi(const SystemModel& model, const State& u, std::span<const double> beta, const RiemannOptions& opt,
          const std::vector<FieldGroup>& groups)
{
    State x = u;
    for (const auto& g : groups)
        x = apply_group(model, x, g, beta, opt).right;
    return x;
}

}  // namespace

RiemannOptions wide_riemann_options()
{
    RiemannOptions r;
    r.small_amplitude = 0.6;
    return r;
}

const char* wave_kind_name(WaveKind kind)
{
    switch (kind) {
        case WaveKind::Shock: return "shock";
        case WaveKind::Rarefaction: return "rarefaction";
        case WaveKind::Contact: return "contact";
    }
    return "?";
}

State lax_curve_point(const SystemModel& model, const State& u, int family, double beta, const RiemannOptions& options)
{
    model.require_admissible(u);
    return curve(model, u, family, beta, options).state;
}

double shock_speed(const SystemModel& model, const State& u, int family, double beta, const RiemannOptions& options)
{
    model.require_admissible(u);
    if (!(beta < 0.0) || model.field_kind(family) != FieldKind::GenuinelyNonlinear)
        throw Error(ErrorKind::KindMismatch, "shock speed needs a GNL family and beta < 0");
    check_radius(beta, options);
    return hugoniot(model, u, family, beta).speed;
}

State group_curve_point(const SystemModel& model, const State& u, int group, std::span<const double> betas,
                        const RiemannOptions& options)
{
    model.require_admissible(u);
    const auto groups = model.groups();
    const auto& g = groups.at(static_cast<std::size_t>(group));
    std::vector<double> full(static_cast<std::size_t>(model.size()), 0.0);
    for (int k = 0; k < g.size; ++k)
        full[static_cast<std::size_t>(g.first + k)] = betas[static_cast<std::size_t>(k)];
    return apply_group(model, u, g, full, options).right;
}

State wave_map(const SystemModel& model, const State& u, std::span<const double> beta, const RiemannOptions& options)
{
    model.require_admissible(u);
    return psi(model, u, beta, options, model.groups());
}

State WaveFan::sample(const SystemModel& model, double xi) const
{
    for (const auto& w : waves) {
        if (xi < w.speed_left)
            return w.left;
        if (w.kind == WaveKind::Rarefaction && xi < w.speed_right) {
            WaveFan single;
            single.waves = {w};
            return rarefaction_sample(model, single, w.family, xi);
        }
    }
    return right;
}

WaveFan riemann_solve(const SystemModel& model, const State& u_minus, const State& u_plus,
                      const RiemannOptions& options, std::span<const double> guess)
{
    model.require_admissible(u_minus);
    model.require_admissible(u_plus);
    const double amplitude = norm1(u_plus - u_minus);
    if (amplitude > options.small_amplitude)
        throw Error(ErrorKind::OutsideSmallAmplitude, "|U+ - U-|_1 = " + std::to_string(amplitude) +
                                                          " exceeds " + std::to_string(options.small_amplitude));
    const int n = model.size();
    const auto groups = model.groups();

    Eigen::VectorXd beta(n);
    if (!guess.empty()) {
        for (int k = 0; k < n; ++k)
            beta[k] = guess[static_cast<std::size_t>(k)];
    } else {
        beta = model.eigensystem(u_minus).left * (u_plus - u_minus);
    }

    auto eval = [&](const Eigen::VectorXd& b) {
        return State(psi(model, u_minus, std::span<const double>(b.data(), static_cast<std::size_t>(n)), options,
                         groups) - u_plus);
    };

    WaveFan fan;
    Matrix jac;
    bool have_jac = false;
    double last_res = std::numeric_limits<double>::infinity();
    State g = amplitude == 0.0 ? State(State::Zero(n)) : eval(beta);
    if (amplitude == 0.0)
        beta.setZero();
    int it = 0;
    for (;; ++it) {
        const double res = norm1(g);
        if (res <= options.newton_tol)
            break;
        if (it >= options.max_iterations || !std::isfinite(res))
            throw Error(ErrorKind::NewtonDivergence,
                        model.name() + ": Riemann solve did not converge, residual " + std::to_string(res));
        // finite-difference Jacobian, reused while the residual keeps dropping fast
        if (!have_jac || res > 0.1 * last_res) {
            const double h = options.fd_step * (1.0 + beta.cwiseAbs().maxCoeff());
            jac.resize(n, n);
            for (int k = 0; k < n; ++k) {
                Eigen::VectorXd bp = beta;
                bp[k] += h;
                jac.col(k) = (eval(bp) - g) / h;
            }
            have_jac = true;
        }
        last_res = res;
        beta -= jac.partialPivLu().solve(g);
        g = eval(beta);
    }
    // polish with the last Jacobian while it still pays off
    if (have_jac) {
        for (int k = 0; k < 3; ++k) {
            const Eigen::VectorXd trial = beta - jac.partialPivLu().solve(g);
            const State gt = eval(trial);
            if (!(norm1(gt) < 0.5 * norm1(g)))
                break;
            beta = trial;
            g = gt;
        }
    }
    fan.residual = norm1(g);
    fan.iterations = it;
    fan.left = u_minus;
    fan.right = u_plus;
    fan.beta.assign(beta.data(), beta.data() + n);
    for (double& b : fan.beta)
        if (std::abs(b) <= options.zero_strength)
            b = 0.0;

    // rebuild the fan along the converged parameters
    const std::span<const double> bspan(fan.beta);
    State x = u_minus;
    fan.states.push_back(x);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& gr = groups[gi];
        const auto step = apply_group(model, x, gr, bspan, options);
        std::vector<double> gb(fan.beta.begin() + gr.first, fan.beta.begin() + gr.first + gr.size);
        bool trivial = true;
        double sum = 0.0;
        for (double b : gb) {
            trivial = trivial && b == 0.0;
            sum += b;
        }
        if (!trivial) {
            Wave w;
            w.family = gr.first;
            w.group = static_cast<int>(gi);
            w.group_strengths = gb;
            w.strength = sum;
            w.left = x;
            w.right = step.right;
            if (model.field_kind(gr.first) == FieldKind::LinearlyDegenerate) {
                w.kind = WaveKind::Contact;
                w.speed_left = w.speed_right = model.eigenvalue(x, gr.first);
            } else if (sum < 0.0) {
                w.kind = WaveKind::Shock;
                w.speed_left = w.speed_right = step.speed;
            } else {
                w.kind = WaveKind::Rarefaction;
                w.speed_left = model.eigenvalue(x, gr.first);
                w.speed_right = model.eigenvalue(step.right, gr.first);
            }
            fan.waves.push_back(std::move(w));
        }
        x = step.right;
        fan.states.push_back(x);
    }
    return fan;
}

std::vector<double> strength_decompose(const SystemModel& model, const State& u_minus, const State& u_plus,
                                       const RiemannOptions& options)
{
    return riemann_solve(model, u_minus, u_plus, options).beta;
}

State rarefaction_sample(const SystemModel& model, const WaveFan& fan, int family, double xi)
{
    for (const auto& w : fan.waves) {
        if (w.family != family)
            continue;
        if (w.kind != WaveKind::Rarefaction || xi < w.speed_left || xi > w.speed_right)
            break;
        if (xi == w.speed_left)
            return w.left;
        if (xi == w.speed_right)
            return w.right;
        // lambda grows with unit rate along the normalized curve
        double theta = std::clamp(xi - w.speed_left, 0.0, w.strength);
        State s = integral_curve(model, w.left, family, theta);
        for (int it = 0; it < 20; ++it) {
            const double f = model.eigenvalue(s, family) - xi;
            if (std::abs(f) <= 1e-13)
                break;
            theta = std::clamp(theta - f, 0.0, w.strength);
            s = integral_curve(model, w.left, family, theta);
        }
        return s;
    }
    throw Error(ErrorKind::XiOutsideFan, "xi = " + std::to_string(xi) + " is not inside a rarefaction of family " +
                                             std::to_string(family));
}

}  // namespace wft
