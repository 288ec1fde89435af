// models.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/models.hpp>
#include <wft/error.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wft {

namespace {

// forward-mode dual number, enough for directional derivatives of lambda
struct Dual {
    double v;
    double d;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
inline Dual operator*(double c, Dual a) { return {c * a.v, c * a.d}; }
inline Dual sqrt(Dual a)
{
    const double s = std::sqrt(a.v);
    return {s, a.d / (2.0 * s)};
}
using std::sqrt;

std::string describe(const State& u)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int i = 0; i < u.size(); ++i)
        os << (i ? ", " : "") << u[i];
    os << ")";
    return os.str();
}

void fix_sign(Eigen::Ref<State> r)
{
    for (int i = 0; i < r.size(); ++i) {
        if (r[i] != 0.0) {
            if (r[i] < 0.0)
                r = -r;
            return;
        }
    }
}

// ---------------------------------------------------------------- Burgers

class Burgers final : public SystemModel {
public:
    std::string name() const override { return "burgers"; }
    int size() const override { return 1; }
    State flux(const State& u) const override { return make_state({0.5 * u[0] * u[0]}); }
    Matrix jacobian(const State& u) const override
    {
        Matrix j(1, 1);
        j(0, 0) = u[0];
        return j;
    }
    State eigenvalues(const State& u) const override { return u; }
    Eigensystem eigensystem(const State& u) const override
    {
        require_admissible(u);
        return {u, Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
    }
    double eigenvalue(const State& u, int) const override { return u[0]; }
    State right_eigenvector(const State&, int) const override { return State::Ones(1); }
    FieldKind field_kind(int) const override { return FieldKind::GenuinelyNonlinear; }
    bool admissible(const State& u) const override { return std::isfinite(u[0]); }
    State background() const override { return State::Zero(1); }
    State sample(std::span<const double> s) const override { return make_state({-1.0 + 2.0 * s[0]}); }
};

// ---------------------------------------------------------------- p-system
//
//   v_t - u_x = 0,  u_t + p(v)_x = 0,  p(v) = k v^{-gamma}

class PSystem final : public SystemModel {
public:
    explicit PSystem(const ModelParams& p) : m_gamma(p.gamma), m_k(p.k)
    {
        if (!(m_gamma > 0.0) || !(m_k > 0.0))
            throw Error(ErrorKind::ConfigValidation, "p-system needs gamma > 0 and k > 0");
    }

    std::string name() const override { return "psystem"; }
    int size() const override { return 2; }

    double pressure(double v) const { return m_k * std::pow(v, -m_gamma); }
    double sound(double v) const { return std::sqrt(m_gamma * m_k * std::pow(v, -m_gamma - 1.0)); }

    State flux(const State& u) const override { return make_state({-u[1], pressure(u[0])}); }
    Matrix jacobian(const State& u) const override
    {
        const double c = sound(u[0]);
        Matrix j(2, 2);
        j << 0.0, -1.0, -c * c, 0.0;
        return j;
    }
    State eigenvalues(const State& u) const override
    {
        const double c = sound(u[0]);
        return make_state({-c, c});
    }
    double eigenvalue(const State& u, int j) const override { return j == 0 ? -sound(u[0]) : sound(u[0]); }
    State right_eigenvector(const State& u, int j) const override
    {
        const double c = sound(u[0]);
        const double a = 2.0 * u[0] / ((m_gamma + 1.0) * c);
        return j == 0 ? make_state({a, a * c}) : make_state({-a, a * c});
    }
    Eigensystem eigensystem(const State& u) const override
    {
        require_admissible(u);
        const double c = sound(u[0]);
        const double a = 2.0 * u[0] / ((m_gamma + 1.0) * c);
        Eigensystem e;
        e.lambda = make_state({-c, c});
        e.right.resize(2, 2);
        e.right << a, -a, a * c, a * c;
        e.left.resize(2, 2);
        e.left << 1.0 / (2.0 * a), 1.0 / (2.0 * a * c), -1.0 / (2.0 * a), 1.0 / (2.0 * a * c);
        return e;
    }
    FieldKind field_kind(int) const override { return FieldKind::GenuinelyNonlinear; }
    bool admissible(const State& u) const override { return u[0] > 0.0 && std::isfinite(u[1]); }
    State background() const override { return make_state({1.0, 0.0}); }
    State sample(std::span<const double> s) const override
    {
        return make_state({0.5 + 1.5 * s[0], -0.5 + s[1]});
    }
    double min_gap() const override { return 2.0 * sound(2.0); }

private:
    double m_gamma;
    double m_k;
};

// ---------------------------------------------------------------- 1D Euler
//
//   U = (rho, rho u, E),  p = (gamma - 1)(E - rho u^2 / 2)

class Euler1D final : public SystemModel {
public:
    explicit Euler1D(const ModelParams& p) : m_gamma(p.gamma)
    {
        if (!(m_gamma > 1.0))
            throw Error(ErrorKind::ConfigValidation, "Euler needs gamma > 1");
    }

    std::string name() const override { return "euler1d"; }
    int size() const override { return 3; }

    struct Prim {
        double rho, u, p, c, H;
    };
    Prim prim(const State& q) const
    {
        const double rho = q[0];
        const double u = q[1] / rho;
        const double p = (m_gamma - 1.0) * (q[2] - 0.5 * q[1] * u);
        const double c = std::sqrt(m_gamma * p / rho);
        return {rho, u, p, c, (q[2] + p) / rho};
    }

    State flux(const State& q) const override
    {
        const auto w = prim(q);
        return make_state({q[1], q[1] * w.u + w.p, (q[2] + w.p) * w.u});
    }
    Matrix jacobian(const State& q) const override
    {
        const auto w = prim(q);
        const double g = m_gamma;
        const double u = w.u;
        Matrix j(3, 3);
        j << 0.0, 1.0, 0.0,
            0.5 * (g - 3.0) * u * u, (3.0 - g) * u, g - 1.0,
            u * (0.5 * (g - 1.0) * u * u - w.H), w.H - (g - 1.0) * u * u, g * u;
        return j;
    }
    State eigenvalues(const State& q) const override
    {
        const auto w = prim(q);
        return make_state({w.u - w.c, w.u, w.u + w.c});
    }
    double eigenvalue(const State& q, int j) const override
    {
        const auto w = prim(q);
        return w.u + (j - 1) * w.c;
    }
    State right_eigenvector(const State& q, int j) const override
    {
        const auto w = prim(q);
        return column(w, j);
    }
    Eigensystem eigensystem(const State& q) const override
    {
        require_admissible(q);
        const auto w = prim(q);
        Eigensystem e;
        e.lambda = make_state({w.u - w.c, w.u, w.u + w.c});
        e.right.resize(3, 3);
        for (int j = 0; j < 3; ++j)
            e.right.col(j) = column(w, j);
        e.left = e.right.inverse();
        return e;
    }
    FieldKind field_kind(int j) const override
    {
        return j == 1 ? FieldKind::LinearlyDegenerate : FieldKind::GenuinelyNonlinear;
    }
    bool admissible(const State& q) const override
    {
        if (!(q[0] > 0.0) || !q.allFinite())
            return false;
        return (q[2] - 0.5 * q[1] * q[1] / q[0]) > 0.0;
    }
    State background() const override { return from_prim(1.0, 0.0, 1.0); }
    State sample(std::span<const double> s) const override
    {
        return from_prim(0.5 + 1.5 * s[0], -0.5 + s[1], 0.5 + 1.5 * s[2]);
    }
    double min_gap() const override { return std::sqrt(m_gamma * 0.5 / 2.0); }

    State from_prim(double rho, double u, double p) const
    {
        return make_state({rho, rho * u, p / (m_gamma - 1.0) + 0.5 * rho * u * u});
    }

private:
    State column(const Prim& w, int j) const
    {
        if (j == 1) {
            State r = make_state({1.0, w.u, 0.5 * w.u * w.u});
            return r / r.norm();
        }
        // d(u -+ c) along (1, u -+ c, H -+ u c) is -+ (gamma + 1) c / (2 rho)
        const double sgn = j == 0 ? -1.0 : 1.0;
        const double a = sgn * 2.0 * w.rho / ((m_gamma + 1.0) * w.c);
        return a * make_state({1.0, w.u + sgn * w.c, w.H + sgn * w.u * w.c});
    }

    double m_gamma;
};

// ---------------------------------------------------------------- steady 2D Euler
//
// Supersonic steady flow with x1 as the evolution variable:
//   U = (rho v1, rho v1^2 + p, rho v1 v2, rho v1 B),
//   F = (rho v2, rho v1 v2, rho v2^2 + p, rho v2 B),
//   B = |v|^2 / 2 + gamma p / ((gamma - 1) rho).
// Fields: lambda_-, lambda_0 (double, streamline direction), lambda_+.

class SteadyEuler2D final : public SystemModel {
public:
    explicit SteadyEuler2D(const ModelParams& p) : m_gamma(p.gamma), m_g(p.gamma / (p.gamma - 1.0))
    {
        if (!(m_gamma > 1.0))
            throw Error(ErrorKind::ConfigValidation, "steady Euler needs gamma > 1");
    }

    std::string name() const override { return "steady-euler2d"; }
    int size() const override { return 4; }

    struct Prim {
        double rho, v1, v2, p;
    };

    // supersonic root of the quadratic for v1
    bool try_prim(const State& q, Prim& w) const
    {
        const double m = q[0];
        if (!(m > 0.0) || !q.allFinite())
            return false;
        const double v2 = q[2] / m;
        const double B = q[3] / m;
        const double a = 0.5 - m_g;
        const double b = m_g * q[1] / m;
        const double c0 = 0.5 * v2 * v2 - B;
        const double disc = b * b - 4.0 * a * c0;
        if (!(disc >= 0.0))
            return false;
        const double v1 = (b + std::sqrt(disc)) / (2.0 * m_g - 1.0);
        if (!(v1 > 0.0))
            return false;
        w = {m / v1, v1, v2, q[1] - m * v1};
        return w.rho > 0.0 && w.p > 0.0 && v1 * v1 > m_gamma * w.p / w.rho;
    }
    Prim prim(const State& q) const
    {
        Prim w{};
        if (!try_prim(q, w))
            throw Error(ErrorKind::InadmissibleState, "steady Euler state " + describe(q) + " is not supersonic");
        return w;
    }

    State from_prim(double rho, double v1, double v2, double p) const
    {
        const double B = 0.5 * (v1 * v1 + v2 * v2) + m_g * p / rho;
        return make_state({rho * v1, rho * v1 * v1 + p, rho * v1 * v2, rho * v1 * B});
    }

    State flux(const State& q) const override
    {
        const auto w = prim(q);
        const double B = 0.5 * (w.v1 * w.v1 + w.v2 * w.v2) + m_g * w.p / w.rho;
        return make_state({w.rho * w.v2, w.rho * w.v1 * w.v2, w.rho * w.v2 * w.v2 + w.p, w.rho * w.v2 * B});
    }

    Matrix dU_dW(const Prim& w) const
    {
        const double q2 = w.v1 * w.v1 + w.v2 * w.v2;
        Matrix a(4, 4);
        a << w.v1, w.rho, 0.0, 0.0,
            w.v1 * w.v1, 2.0 * w.rho * w.v1, 0.0, 1.0,
            w.v1 * w.v2, w.rho * w.v2, w.rho * w.v1, 0.0,
            0.5 * w.v1 * q2, 0.5 * w.rho * q2 + w.rho * w.v1 * w.v1 + m_g * w.p, w.rho * w.v1 * w.v2, m_g * w.v1;
        return a;
    }
    Matrix dF_dW(const Prim& w) const
    {
        const double q2 = w.v1 * w.v1 + w.v2 * w.v2;
        Matrix b(4, 4);
        b << w.v2, 0.0, w.rho, 0.0,
            w.v1 * w.v2, w.rho * w.v2, w.rho * w.v1, 0.0,
            w.v2 * w.v2, 0.0, 2.0 * w.rho * w.v2, 1.0,
            0.5 * w.v2 * q2, w.rho * w.v1 * w.v2, 0.5 * w.rho * q2 + w.rho * w.v2 * w.v2 + m_g * w.p, m_g * w.v2;
        return b;
    }

    Matrix jacobian(const State& q) const override
    {
        const auto w = prim(q);
        return dF_dW(w) * dU_dW(w).inverse();
    }

    template <class T>
    T acoustic(T rho, T v1, T v2, T p, double sgn) const
    {
        const T c2 = (m_gamma * p) / rho;
        return (v1 * v2 + sgn * sqrt(c2 * (v1 * v1 + v2 * v2 - c2))) / (v1 * v1 - c2);
    }

    State eigenvalues(const State& q) const override
    {
        const auto w = prim(q);
        const double l0 = w.v2 / w.v1;
        return make_state({acoustic(w.rho, w.v1, w.v2, w.p, -1.0), l0, l0, acoustic(w.rho, w.v1, w.v2, w.p, 1.0)});
    }
    double eigenvalue(const State& q, int j) const override
    {
        const auto w = prim(q);
        if (j == 1 || j == 2)
            return w.v2 / w.v1;
        return acoustic(w.rho, w.v1, w.v2, w.p, j == 0 ? -1.0 : 1.0);
    }

    State column(const Prim& w, const Matrix& a, int j) const
    {
        State rw(4);
        if (j == 1) {
            rw << 1.0, 0.0, 0.0, 0.0;
        } else if (j == 2) {
            rw << 0.0, w.v1, w.v2, 0.0;
        } else {
            const double sgn = j == 0 ? -1.0 : 1.0;
            const double lam = acoustic(w.rho, w.v1, w.v2, w.p, sgn);
            const double xi = w.v2 - lam * w.v1;
            const double c2 = m_gamma * w.p / w.rho;
            rw << 1.0 / c2, lam / (w.rho * xi), -1.0 / (w.rho * xi), 1.0;
            // exact directional derivative of lambda along rw
            const Dual d = acoustic(Dual{w.rho, rw[0]}, Dual{w.v1, rw[1]}, Dual{w.v2, rw[2]}, Dual{w.p, rw[3]}, sgn);
            return (a * rw) / d.d;
        }
        State r = a * rw;
        r /= r.norm();
        fix_sign(r);
        return r;
    }

    State right_eigenvector(const State& q, int j) const override
    {
        const auto w = prim(q);
        return column(w, dU_dW(w), j);
    }

    Eigensystem eigensystem(const State& q) const override
    {
        const auto w = prim(q);
        const Matrix a = dU_dW(w);
        Eigensystem e;
        const double l0 = w.v2 / w.v1;
        e.lambda = make_state({acoustic(w.rho, w.v1, w.v2, w.p, -1.0), l0, l0, acoustic(w.rho, w.v1, w.v2, w.p, 1.0)});
        e.right.resize(4, 4);
        for (int j = 0; j < 4; ++j)
            e.right.col(j) = column(w, a, j);
        e.left = e.right.inverse();
        return e;
    }

    FieldKind field_kind(int j) const override
    {
        return (j == 1 || j == 2) ? FieldKind::LinearlyDegenerate : FieldKind::GenuinelyNonlinear;
    }
    std::vector<FieldGroup> groups() const override { return {{0, 1}, {1, 2}, {3, 1}}; }
    bool admissible(const State& q) const override
    {
        Prim w{};
        return try_prim(q, w);
    }
    State background() const override { return from_prim(1.0, 2.0, 0.0, 1.0 / m_gamma); }
    State sample(std::span<const double> s) const override
    {
        return from_prim(0.5 + 1.5 * s[0], 2.0 + s[1], -0.5 + s[2], (0.3 + 0.7 * s[3]) / m_gamma);
    }
    double min_gap() const override { return 0.05; }

private:
    double m_gamma;
    double m_g;
};

}  // namespace

State make_state(std::initializer_list<double> values)
{
    State s(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values)
        s[i++] = v;
    return s;
}

double norm1(const State& u)
{
    return u.cwiseAbs().sum();
}

std::vector<FieldGroup> SystemModel::groups() const
{
    std::vector<FieldGroup> g;
    for (int j = 0; j < size(); ++j)
        g.push_back({j, 1});
    return g;
}

int SystemModel::group_of(int j) const
{
    const auto g = groups();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (j >= g[i].first && j < g[i].first + g[i].size)
            return static_cast<int>(i);
    return -1;
}

void SystemModel::require_admissible(const State& u) const
{
    if (u.size() != size())
        throw Error(ErrorKind::DimensionMismatch, name() + " expects states of size " + std::to_string(size()));
    if (!admissible(u))
        throw Error(ErrorKind::InadmissibleState, name() + " state " + describe(u));
}

State SystemModel::directional_derivative(const State& u, int j, int k) const
{
    const double h = 1e-5 * (1.0 + u.cwiseAbs().maxCoeff());
    const State rj = right_eigenvector(u, j);
    return (right_eigenvector(u + h * rj, k) - right_eigenvector(u - h * rj, k)) / (2.0 * h);
}

std::unique_ptr<SystemModel> make_model(const std::string& name, const ModelParams& params)
{
    if (name == "burgers")
        return std::make_unique<Burgers>();
    if (name == "psystem")
        return std::make_unique<PSystem>(params);
    if (name == "euler1d")
        return std::make_unique<Euler1D>(params);
    if (name == "steady-euler2d")
        return std::make_unique<SteadyEuler2D>(params);
    throw Error(ErrorKind::ConfigValidation, "unknown model '" + name + "'");
}

std::vector<std::string> model_names()
{
    return {"burgers", "psystem", "euler1d", "steady-euler2d"};
}

Eigensystem eigen_decompose(const SystemModel& model, const State& u)
{
    model.require_admissible(u);
    return model.eigensystem(u);
}

double b_coefficient(const SystemModel& model, const State& u, int j)
{
    const auto e = eigen_decompose(model, u);
    const State r = e.right.col(j);
    const double h = 1e-4;
    const State d2 = (model.flux(u + h * r) - 2.0 * model.flux(u) + model.flux(u - h * r)) / (h * h);
    return 0.5 * e.left.row(j).dot(d2);
}

double speed_bound(const SystemModel& model, std::span<const State> extra)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> s(static_cast<std::size_t>(model.sample_dim()));
    double m = 0.0;
    for (int i = 0; i < 256; ++i) {
        for (auto& x : s)
            x = unif(rng);
        const State u = model.sample(s);
        if (model.admissible(u))
            m = std::max(m, model.eigenvalues(u).cwiseAbs().maxCoeff());
    }
    for (const auto& u : extra)
        if (model.admissible(u))
            m = std::max(m, model.eigenvalues(u).cwiseAbs().maxCoeff());
    return m;
}

LintReport model_lint(const SystemModel& model, int sample_count, std::uint64_t seed)
{
    LintReport rep;
    rep.model = model.name();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = model.size();
    const auto groups = model.groups();
    std::vector<double> s(static_cast<std::size_t>(model.sample_dim()));

    int attempts = 0;
    while (rep.samples < sample_count && attempts < 20 * sample_count + 100) {
        ++attempts;
        for (auto& x : s)
            x = unif(rng);
        const State u = model.sample(s);
        if (!model.admissible(u))
            continue;
        ++rep.samples;

        const auto e = model.eigensystem(u);
        const Matrix jac = model.jacobian(u);
        const double jnorm = jac.cwiseAbs().colwise().sum().maxCoeff();

        rep.biorthogonality = std::max(rep.biorthogonality,
                                       (e.left * e.right - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
        for (int j = 0; j < n; ++j) {
            const State r = e.right.col(j);
            const double res_r = norm1(jac * r - e.lambda[j] * r);
            const double res_l = (e.left.row(j) * jac - e.lambda[j] * e.left.row(j)).cwiseAbs().sum();
            rep.eigen_residual = std::max(rep.eigen_residual, std::max(res_r, res_l) / (1.0 + jnorm));

            // grad(lambda_j) . r_j by Richardson-extrapolated central differences
            auto dlam = [&](double h) {
                return (model.eigenvalue(u + h * r, j) - model.eigenvalue(u - h * r, j)) / (2.0 * h);
            };
            const double h = 1e-3;
            const double dl = (4.0 * dlam(0.5 * h) - dlam(h)) / 3.0;
            if (model.field_kind(j) == FieldKind::GenuinelyNonlinear)
                rep.gnl_normalization = std::max(rep.gnl_normalization, std::abs(dl - 1.0));
            else
                rep.ld_degeneracy = std::max(rep.ld_degeneracy, std::abs(dl));
        }

        // Jacobian against central differences of the flux
        Matrix fd(n, n);
        for (int k = 0; k < n; ++k) {
            const double h = 1e-6 * (1.0 + std::abs(u[k]));
            State up = u, um = u;
            up[k] += h;
            um[k] -= h;
            fd.col(k) = (model.flux(up) - model.flux(um)) / (2.0 * h);
        }
        rep.jacobian_error = std::max(rep.jacobian_error, (fd - jac).cwiseAbs().maxCoeff() / (1.0 + jac.cwiseAbs().maxCoeff()));

        // ordering, equality inside groups, gaps between groups
        for (const auto& g : groups) {
            for (int j = g.first + 1; j < g.first + g.size; ++j)
                rep.ordering = std::max(rep.ordering, std::abs(e.lambda[j] - e.lambda[g.first]));
        }
        for (std::size_t gi = 0; gi + 1 < groups.size(); ++gi) {
            const double gap = e.lambda[groups[gi + 1].first] - e.lambda[groups[gi].first];
            if (gap < model.min_gap())
                rep.ordering = std::max(rep.ordering, model.min_gap() - gap);
        }
    }
    if (rep.samples == 0)
        throw Error(ErrorKind::NoAdmissibleSamples, model.name() + ": sampling box has no admissible states");

    rep.passed = rep.samples == sample_count && rep.biorthogonality <= LintReport::biorthogonality_tol &&
                 rep.eigen_residual <= LintReport::eigen_residual_tol &&
                 rep.gnl_normalization <= LintReport::normalization_tol &&
                 rep.ld_degeneracy <= LintReport::normalization_tol && rep.jacobian_error <= LintReport::jacobian_tol &&
                 rep.ordering == 0.0;
    return rep;
}

}  // namespace wft
