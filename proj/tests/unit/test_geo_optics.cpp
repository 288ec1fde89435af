// test_geo_optics.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/geo_optics.hpp>

#include "test_util.hpp"

#include <cmath>

using namespace wft;

namespace {

// two uncoupled Burgers-type fields with speeds u and 1 + v
class SplitBurgers final : public SystemModel {
public:
    std::string name() const override { return "split-burgers"; }
    int size() const override { return 2; }
    State flux(const State& u) const override
    {
        return make_state({0.5 * u[0] * u[0], u[1] + 0.5 * u[1] * u[1]});
    }
    Matrix jacobian(const State& u) const override
    {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = u[0];
        a(1, 1) = 1.0 + u[1];
        return a;
    }
    State eigenvalues(const State& u) const override { return make_state({u[0], 1.0 + u[1]}); }
    Eigensystem eigensystem(const State& u) const override
    {
        return {eigenvalues(u), Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    }
    FieldKind field_kind(int) const override { return FieldKind::GenuinelyNonlinear; }
    bool admissible(const State& u) const override { return std::abs(u[0]) < 0.4 && std::abs(u[1]) < 0.4; }
    State background() const override { return State::Zero(2); }
    State sample(std::span<const double> s) const override
    {
        return make_state({-0.3 + 0.6 * s[0], -0.3 + 0.6 * s[1]});
    }
};

PiecewiseConstant box(double a, double b, const State& v)
{
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<double> vals(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        vals[n + i] = v[static_cast<Eigen::Index>(i)];
    return PiecewiseConstant(n, {a, b}, vals);
}

State to_state(std::span<const double> v)
{
    State s(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        s[static_cast<Eigen::Index>(i)] = v[i];
    return s;
}

double q(double v, int nu) { return std::ldexp(std::round(std::ldexp(v, nu)), -nu); }

// exact Burgers solution from 1_[0,1] for tau >= 2
double burgers_nwave(double y, double tau)
{
    const double s = std::sqrt(2.0 * tau);
    return (y > 0.0 && y < s) ? y / tau : 0.0;
}

}  // namespace

TEST(ProjectInitial, SingleFamilyBox)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const Eigensystem es = m->eigensystem(m->background());
    const auto p = project_initial(*m, box(0.0, 1.0, 0.1 * es.right.col(0)), 0.1, 10);
    EXPECT_EQ(p.initial(0), PiecewiseConstant::scalar({0.0, 1.0}, {0.0, q(0.1, 10), 0.0}));
    EXPECT_EQ(p.initial(1), PiecewiseConstant::constant({0.0}));
}

TEST(ProjectInitial, ZeroData)
{
    auto m = make_model("euler1d");
    const auto p = project_initial(*m, PiecewiseConstant::constant({0.0, 0.0, 0.0}), 0.1, 8);
    for (int j = 0; j < 3; ++j)
        EXPECT_EQ(p.initial(j), PiecewiseConstant::constant({0.0}));
}

TEST(ProjectInitial, EulerAcousticPair)
{
    auto m = make_model("euler1d");
    const State u0 = m->background();
    const Eigensystem es = m->eigensystem(u0);
    // closed form at rho=1, u=0, p=1: r_1,3 parallel to (1, -+c, H), r_2 to (1, 0, 0)
    const double c = std::sqrt(1.4);
    const double h = 1.0 / 0.4 + 1.0;
    const State r1 = es.right.col(0), r2 = es.right.col(1), r3 = es.right.col(2);
    EXPECT_NEAR(r1[1] / r1[0], -c, 1e-12);
    EXPECT_NEAR(r1[2] / r1[0], h, 1e-12);
    EXPECT_NEAR(r3[1] / r3[0], c, 1e-12);
    EXPECT_NEAR(r3[2] / r3[0], h, 1e-12);
    EXPECT_NEAR(std::abs(r2[1]) + std::abs(r2[2]), 0.0, 1e-12);

    const int nu = 12;
    const auto p = project_initial(*m, box(0.0, 1.0, 0.2 * (r1 + r3)), 0.1, nu);
    const auto expected = PiecewiseConstant::scalar({0.0, 1.0}, {0.0, q(0.2, nu), 0.0});
    EXPECT_EQ(p.initial(0), expected);
    EXPECT_EQ(p.initial(2), expected);
    EXPECT_EQ(p.initial(1), PiecewiseConstant::constant({0.0}));
    EXPECT_GE(p.quantization_slack(), 0.0);
}

TEST(ProjectInitial, WrongDimension)
{
    auto m = make_model("psystem");
    EXPECT_WFT_ERROR(project_initial(*m, PiecewiseConstant::constant({0.0}), 0.1, 8), ErrorKind::DimensionMismatch);
}

TEST(EvolveProfiles, LinearlyDegenerateIsFrozen)
{
    auto m = make_model("euler1d");
    const Eigensystem es = m->eigensystem(m->background());
    auto p = project_initial(*m, box(0.0, 1.0, 0.3 * es.right.col(1)), 0.1, 8);
    p = evolve_profiles(std::move(p), 5.0);
    EXPECT_EQ(p.profile(1, 0.0), p.initial(1));
    EXPECT_EQ(p.profile(1, 5.0), p.initial(1));
    EXPECT_EQ(p.profile(1, 50.0), p.initial(1));
}

TEST(EvolveProfiles, DecreasingStepIsShock)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const Eigensystem es = m->eigensystem(m->background());
    const State r = es.right.col(0);
    const auto u1 = PiecewiseConstant(2, {0.0}, {0.5 * r[0], 0.5 * r[1], 0.0, 0.0});
    auto p = evolve_profiles(project_initial(*m, u1, 0.1, 8), 2.0);
    const auto s = p.profile(0, 2.0);
    ASSERT_EQ(s.jump_count(), 1u);
    EXPECT_NEAR(s.breakpoints()[0], 0.5, 1e-12);
    EXPECT_WFT_ERROR(p.profile(0, 2.5), ErrorKind::SpanExceeded);
}

TEST(EvolveProfiles, BoxBecomesNWave)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const Eigensystem es = m->eigensystem(m->background());
    for (int nu : {6, 8}) {
        auto p = evolve_profiles(project_initial(*m, box(0.0, 1.0, es.right.col(0)), 0.1, nu), 4.0);
        const auto s = p.profile(0, 4.0);
        const int cells = 200000;
        const double a = -1.0, b = 4.0, dy = (b - a) / cells;
        double err = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double y = a + (i + 0.5) * dy;
            err += std::abs(s.scalar_at(y) - burgers_nwave(y, 4.0)) * dy;
        }
        EXPECT_LE(err, 4.0 * std::ldexp(1.0, -nu)) << "nu=" << nu;
        EXPECT_LE(total_variation(s), total_variation(p.initial(0)) + 1e-12);
    }
}

TEST(AssembleExpansion, ZeroEpsIsBackground)
{
    auto m = make_model("euler1d");
    const Eigensystem es = m->eigensystem(m->background());
    auto p = evolve_profiles(project_initial(*m, box(0.0, 1.0, 0.2 * es.right.col(0)), 0.0, 8), 1.0);
    const auto u = assemble_expansion(p, 3.0);
    ASSERT_TRUE(u.is_constant());
    EXPECT_EQ(to_state(u.left_value()), m->background());
}

TEST(AssembleExpansion, SingleFamilyPointwise)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const State u0 = m->background();
    const Eigensystem es = m->eigensystem(u0);
    const double eps = 0.1, t = 2.0;
    auto p = evolve_profiles(project_initial(*m, box(0.0, 1.0, 0.2 * es.right.col(1)), eps, 10), eps * t);
    const auto u = assemble_expansion(p, t);
    const auto s = p.profile_x(1, t);
    for (double x = -2.0; x < 6.0; x += 0.01) {
        const State expect = u0 + eps * s.scalar_at(x) * es.right.col(1);
        EXPECT_NEAR(norm1(to_state(u.at(x)) - expect), 0.0, 1e-15) << x;
    }
    EXPECT_WFT_ERROR(assemble_expansion(p, 2.5), ErrorKind::SpanExceeded);
}

TEST(AssembleExpansion, DoublingLinearlyDegenerateProfileDoublesSummand)
{
    auto m = make_model("euler1d");
    const State u0 = m->background();
    const State r2 = m->eigensystem(u0).right.col(1);
    auto p1 = project_initial(*m, box(0.0, 1.0, 0.25 * r2), 0.1, 8);
    auto p2 = project_initial(*m, box(0.0, 1.0, 0.5 * r2), 0.1, 8);
    const auto d1 = subtract(assemble_expansion(p1, 3.0), PiecewiseConstant::constant({u0[0], u0[1], u0[2]}));
    const auto d2 = subtract(assemble_expansion(p2, 3.0), PiecewiseConstant::constant({u0[0], u0[1], u0[2]}));
    EXPECT_EQ(d1.breakpoints(), d2.breakpoints());
    EXPECT_LE(sup_distance(scale(d1, 2.0), d2), 1e-15);
}

TEST(FrontSlope, Examples)
{
    EXPECT_NEAR(front_slope_xt(1.0, 0.1, 0.5, -0.2, FieldKind::GenuinelyNonlinear), 1.04, 1e-15);
    EXPECT_EQ(front_slope_xt(0.7, 0.1, 0.5, -0.2, FieldKind::LinearlyDegenerate), 0.7);
    EXPECT_EQ(front_slope_xt(0.7, 0.0, 0.5, -0.2, FieldKind::GenuinelyNonlinear), 0.7);
}

TEST(SeparationTime, TwoFamiliesIntervalArithmetic)
{
    SplitBurgers m;
    auto p = project_initial(m, box(0.0, 1.0, make_state({0.2, 0.2})), 0.1, 10);
    p.set_initial(0, PiecewiseConstant::scalar({0.0, 1.0}, {0.0, 0.2, 0.0}));
    p.set_initial(1, PiecewiseConstant::scalar({0.0, 1.0}, {0.0, 0.2, 0.0}));
    EXPECT_NEAR(separation_time(p), 1.0 / 0.96, 1e-12);
}

TEST(SeparationTime, TrivialCases)
{
    SplitBurgers m;
    auto single = project_initial(m, box(0.0, 1.0, make_state({0.25, 0.0})), 0.1, 10);
    EXPECT_EQ(separation_time(single), 0.0);
    const auto crossing = PiecewiseConstant(2, {0.0, 1.0, 2.0, 3.0}, {0, 0, 0, 0.25, 0, 0, 0.25, 0, 0, 0});
    // family 1 starts behind family 0 and overtakes it
    EXPECT_NEAR(separation_time(project_initial(m, crossing, 0.1, 10)), 3.0 / 0.95, 1e-12);
    // spreading faster than the speed gap
    EXPECT_WFT_ERROR(separation_time(project_initial(m, crossing, 4.0, 10)), ErrorKind::NoSeparation);
    auto receding = project_initial(m, PiecewiseConstant(2, {0.0, 1.0, 2.0, 3.0},
                                                         {0, 0, 0.25, 0, 0, 0, 0, 0.25, 0, 0}),
                                    0.1, 10);
    EXPECT_EQ(separation_time(receding), 0.0);
    auto step = project_initial(m, PiecewiseConstant(2, {0.0}, {0, 0, 0.25, 0}), 0.1, 10);
    EXPECT_WFT_ERROR(separation_time(step), ErrorKind::NotCompactSupport);
}

TEST(CompactCorrection, ZeroProfilesGiveZero)
{
    auto m = make_model("euler1d");
    auto p = project_initial(*m, PiecewiseConstant::constant({0.0, 0.0, 0.0}), 0.1, 8);
    const auto cf = build_correction_compact(p, 0.0);
    ASSERT_EQ(cf.fields.size(), 1u);
    EXPECT_EQ(cf.groups[0], 1);
    EXPECT_TRUE(cf.fields[0].is_constant());
    EXPECT_EQ(cf.sup_norm, 0.0);
}

TEST(CompactCorrection, ValuesStayOnContactSurface)
{
    for (const char* name : {"euler1d", "steady-euler2d"}) {
        auto m = make_model(name);
        const State u0 = m->background();
        const Eigensystem es = m->eigensystem(u0);
        const double eps = 0.1;
        const int ld = 1;
        const auto u1 = add(box(0.0, 1.0, 0.2 * es.right.col(ld)), box(0.5, 2.0, -0.1 * es.right.col(ld)));
        auto p = project_initial(*m, u1, eps, 10);
        const auto cf = build_correction_compact(p, 0.0);
        ASSERT_EQ(cf.fields.size(), 1u);
        const auto& e = cf.fields[0];
        const auto sig = p.profile_x(ld, 0.0);
        std::vector<State> w;
        for (std::size_t i = 0; i < e.piece_count(); ++i) {
            const double x = i == 0 ? -1e9 : e.breakpoints()[i - 1];
            w.push_back(u0 + eps * sig.scalar_at(x) * es.right.col(ld) + eps * eps * to_state(e.value(i)));
        }
        EXPECT_EQ(w.front(), u0);
        EXPECT_LE(norm1(w.back() - u0), 1e-15);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            const auto beta = strength_decompose(*m, w[i], w[i + 1], wide_riemann_options());
            for (int j = 0; j < m->size(); ++j)
                if (m->group_of(j) != m->group_of(ld)) EXPECT_LE(std::abs(beta[static_cast<std::size_t>(j)]), 1e-8) << name;
        }
    }
}

TEST(CompactCorrection, BoundedAsEpsHalves)
{
    for (const char* name : {"euler1d", "steady-euler2d"}) {
        auto m = make_model(name);
        const State r = m->eigensystem(m->background()).right.col(1);
        std::vector<double> sup;
        for (double eps : {1e-2, 5e-3, 2.5e-3}) {
            auto p = project_initial(*m, box(0.0, 1.0, 0.5 * r), eps, 10);
            sup.push_back(build_correction_compact(p, 0.0).sup_norm);
        }
        EXPECT_LE(sup[1], sup[0] * (1.0 + 1e-3) + 1e-5) << name;
        EXPECT_LE(sup[2], sup[1] * (1.0 + 1e-3) + 1e-5) << name;
        EXPECT_LE(sup[0], 10.0) << name;
    }
}

TEST(CompactCorrection, RequiresSeparatedSupports)
{
    auto m = make_model("euler1d");
    const Eigensystem es = m->eigensystem(m->background());
    auto p = evolve_profiles(project_initial(*m, box(0.0, 1.0, 0.2 * (es.right.col(0) + es.right.col(1))), 0.1, 8),
                             1.0);
    EXPECT_WFT_ERROR(build_correction_compact(p, 0.0), ErrorKind::SupportsNotSeparated);
    const double t0 = separation_time(p);
    EXPECT_GT(t0, 0.0);
    const auto cf = build_correction_compact(p, t0);
    EXPECT_NO_THROW(assemble_auxiliary(p, t0 + 1.0, CorrectionKind::Compact, &cf));
    EXPECT_WFT_ERROR(assemble_auxiliary(p, 0.5 * t0, CorrectionKind::Compact, &cf), ErrorKind::SpanExceeded);
    EXPECT_WFT_ERROR(assemble_auxiliary(p, t0, CorrectionKind::Noncompact, &cf), ErrorKind::KindMismatch);
}

TEST(NoncompactCorrection, SingleJump)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const State u0 = m->background();
    const State r = m->eigensystem(u0).right.col(0);
    const auto u1 = PiecewiseConstant(2, {0.0}, {0.0, 0.0, 0.3 * r[0], 0.3 * r[1]});
    const auto p = project_initial(*m, u1, 0.1, 10);
    const auto cf = build_correction_noncompact(p, 0.0);
    const auto& e = cf.fields[0];
    ASSERT_EQ(e.jump_count(), 1u);
    const double s = q(0.3, 10);
    const State expect = 0.5 * s * s * m->directional_derivative(u0, 0, 0);
    EXPECT_LE(norm1(to_state(e.right_value()) - expect), 1e-14);
    EXPECT_EQ(to_state(e.left_value()), State::Zero(2));
    EXPECT_LE(norm1(cf.tail - expect), 1e-14);
}

TEST(NoncompactCorrection, ConstantProfilesGiveZero)
{
    auto m = make_model("euler1d");
    const auto p = project_initial(*m, PiecewiseConstant::constant({0.0, 0.0, 0.0}), 0.1, 8);
    const auto cf = build_correction_noncompact(p, 0.0);
    EXPECT_TRUE(cf.fields[0].is_constant());
    EXPECT_EQ(cf.sup_norm, 0.0);
}

TEST(NoncompactCorrection, SingleFamilyBoxReturnsToZero)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const State r = m->eigensystem(m->background()).right.col(0);
    auto p = evolve_profiles(project_initial(*m, box(0.0, 1.0, 0.25 * r), 0.1, 8), 0.3);
    const auto cf = build_correction_noncompact(p, 3.0);
    EXPECT_LE(norm1(cf.tail), 1e-14);
}

TEST(NoncompactCorrection, LipschitzInTime)
{
    auto m = make_model("euler1d");
    const Eigensystem es = m->eigensystem(m->background());
    const auto u1 = add(box(0.0, 1.0, 0.3 * es.right.col(0)), box(0.5, 1.5, 0.2 * es.right.col(2)));
    auto p = evolve_profiles(project_initial(*m, u1, 0.1, 8), 0.5);
    double worst = 0.0;
    for (double t = 0.0; t < 4.9; t += 0.5) {
        const auto a = build_correction_noncompact(p, t).fields[0];
        const auto b = build_correction_noncompact(p, t + 0.1).fields[0];
        // the tail is nonzero while the families overlap, so compare on a window
        worst = std::max(worst, l1_distance(a, b, Window{-10.0, 15.0}) / 0.1);
    }
    EXPECT_LT(worst, 10.0);
}

TEST(AssembleAuxiliary, NoCorrectionsLinearlyDegenerateOnly)
{
    auto m = make_model("euler1d");
    const State r2 = m->eigensystem(m->background()).right.col(1);
    auto p = project_initial(*m, box(0.0, 1.0, 0.3 * r2), 0.1, 8);
    EXPECT_EQ(assemble_auxiliary(p, 2.0, CorrectionKind::Compact), assemble_expansion(p, 2.0));
}

TEST(AssembleAuxiliary, QuadraticTermL1Mass)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const State u0 = m->background();
    const State r = m->eigensystem(u0).right.col(0);
    const double eps = 0.1;
    auto p = project_initial(*m, box(0.0, 1.0, 0.4 * r), eps, 10);
    const auto v = assemble_auxiliary(p, 0.0, CorrectionKind::Compact);
    const auto w = assemble_expansion(p, 0.0);
    const double s = q(0.4, 10);
    const double expect = 0.5 * eps * eps * s * s * 1.0 * norm1(m->directional_derivative(u0, 0, 0));
    EXPECT_NEAR(l1_distance(v, w), expect, 1e-14);
}

TEST(AssembleAuxiliary, AllZeroIsBackground)
{
    auto m = make_model("steady-euler2d");
    const State u0 = m->background();
    auto p = project_initial(*m, PiecewiseConstant::constant({0.0, 0.0, 0.0, 0.0}), 0.1, 8);
    const auto v = assemble_auxiliary(p, 1.0, CorrectionKind::Noncompact);
    ASSERT_TRUE(v.is_constant());
    EXPECT_EQ(to_state(v.left_value()), u0);
}
