// test_models.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/models.hpp>

#include "test_util.hpp"

#include <cmath>

using namespace wft;

namespace {

State euler_state(double rho, double u, double p, double gamma = 1.4)
{
    return make_state({rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u});
}

State steady_state(double rho, double v1, double v2, double p, double gamma = 1.4)
{
    const double b = 0.5 * (v1 * v1 + v2 * v2) + gamma * p / ((gamma - 1.0) * rho);
    return make_state({rho * v1, rho * v1 * v1 + p, rho * v1 * v2, rho * v1 * b});
}

Matrix fd_jacobian(const SystemModel& m, const State& u)
{
    const int n = m.size();
    Matrix j(n, n);
    for (int k = 0; k < n; ++k) {
        const double h = 1e-6 * (1.0 + std::abs(u[k]));
        State up = u, dn = u;
        up[k] += h;
        dn[k] -= h;
        j.col(k) = (m.flux(up) - m.flux(dn)) / (2 * h);
    }
    return j;
}

}  // namespace

TEST(Models, Registry)
{
    for (const auto& name : model_names())
        EXPECT_EQ(make_model(name)->name(), name);
    EXPECT_WFT_ERROR(make_model("shallow-water"), ErrorKind::ConfigValidation);
    EXPECT_WFT_ERROR(make_model("euler1d", {0.9, 1.0}), ErrorKind::ConfigValidation);
}

TEST(Models, LintPassesForAllModels)
{
    for (const auto& name : model_names()) {
        auto m = make_model(name);
        auto rep = model_lint(*m, 200, 3);
        EXPECT_TRUE(rep.passed) << name << " biorth " << rep.biorthogonality << " eig " << rep.eigen_residual
                                << " gnl " << rep.gnl_normalization << " ld " << rep.ld_degeneracy << " jac "
                                << rep.jacobian_error << " order " << rep.ordering;
        EXPECT_EQ(rep.samples, 200);
    }
}

TEST(Models, SteadyEulerContactIsDegenerate)
{
    auto m = make_model("steady-euler2d");
    auto rep = model_lint(*m, 100, 5);
    EXPECT_LE(rep.ld_degeneracy, 1e-8);
    ASSERT_EQ(m->groups().size(), 3u);
    EXPECT_EQ(m->groups()[1].size, 2);
}

TEST(Models, PSystemEigenvalues)
{
    auto m = make_model("psystem", {2.0, 1.0});
    auto lam = m->eigenvalues(make_state({1.0, 0.0}));
    EXPECT_NEAR(lam[0], -std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(lam[1], std::sqrt(2.0), 1e-15);
}

TEST(Models, EulerEigenvalues)
{
    auto m = make_model("euler1d");
    auto lam = m->eigenvalues(euler_state(1, 0, 1));
    EXPECT_NEAR(lam[0], -std::sqrt(1.4), 1e-14);
    EXPECT_NEAR(lam[1], 0.0, 1e-14);
    EXPECT_NEAR(lam[2], std::sqrt(1.4), 1e-14);
}

TEST(Models, SteadyEulerEigenvaluesMatchClosedForm)
{
    auto m = make_model("steady-euler2d");
    const double rho = 1.3, v1 = 2.4, v2 = 0.3, p = 0.6;
    const double c = std::sqrt(1.4 * p / rho);
    const double q2 = v1 * v1 + v2 * v2;
    const double root = c * std::sqrt(q2 - c * c);
    const double den = v1 * v1 - c * c;
    auto lam = m->eigenvalues(steady_state(rho, v1, v2, p));
    EXPECT_NEAR(lam[0], (v1 * v2 - root) / den, 1e-13);
    EXPECT_NEAR(lam[1], v2 / v1, 1e-13);
    EXPECT_NEAR(lam[2], v2 / v1, 1e-13);
    EXPECT_NEAR(lam[3], (v1 * v2 + root) / den, 1e-13);
}

TEST(Models, JacobianMatchesFiniteDifferences)
{
    const State states[] = {make_state({0.3}), make_state({1.2, 0.1}), euler_state(0.8, 0.2, 1.1),
                            steady_state(0.9, 2.2, -0.1, 0.5)};
    int i = 0;
    for (const auto& name : model_names()) {
        auto m = make_model(name);
        const State& u = states[i++];
        const Matrix a = m->jacobian(u);
        const Matrix b = fd_jacobian(*m, u);
        EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-6 * (1 + a.cwiseAbs().maxCoeff())) << name;
    }
}

TEST(Models, GenuinelyNonlinearCoefficientIsOneHalf)
{
    // l . D2F(r, r) = grad(lambda) . r under the normalization
    for (const auto& name : model_names()) {
        auto m = make_model(name);
        const State u0 = m->background();
        for (int j = 0; j < m->size(); ++j) {
            if (m->field_kind(j) == FieldKind::GenuinelyNonlinear)
                EXPECT_NEAR(b_coefficient(*m, u0, j), 0.5, 1e-6) << name << " field " << j;
            else
                EXPECT_NEAR(b_coefficient(*m, u0, j), 0.0, 1e-6) << name << " field " << j;
        }
    }
}

TEST(Models, InadmissibleStates)
{
    auto steady = make_model("steady-euler2d");
    // a subsonic state shares its conserved vector with a supersonic one, so
    // only vectors without a real velocity root are rejected
    EXPECT_WFT_ERROR(eigen_decompose(*steady, make_state({1.0, 1.0, 0.0, 5.0})), ErrorKind::InadmissibleState);
    EXPECT_WFT_ERROR(eigen_decompose(*steady, make_state({-1.0, 4.0, 0.0, 5.0})), ErrorKind::InadmissibleState);
    auto euler = make_model("euler1d");
    EXPECT_WFT_ERROR(eigen_decompose(*euler, make_state({0.0, 0.0, 1.0})), ErrorKind::InadmissibleState);
    EXPECT_WFT_ERROR(eigen_decompose(*euler, make_state({1.0, 0.0})), ErrorKind::DimensionMismatch);
}

TEST(Models, LeftRightBiorthonormalAtBackground)
{
    for (const auto& name : model_names()) {
        auto m = make_model(name);
        auto e = eigen_decompose(*m, m->background());
        const Matrix id = e.left * e.right;
        EXPECT_LE((id - Matrix::Identity(m->size(), m->size())).cwiseAbs().maxCoeff(), 1e-12) << name;
    }
}
