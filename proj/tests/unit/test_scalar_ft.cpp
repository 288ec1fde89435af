// test_scalar_ft.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/scalar_ft.hpp>

#include "test_util.hpp"

#include <cmath>

using namespace wft;

namespace {

PiecewiseConstant unit_box()
{
    return PiecewiseConstant::scalar({0, 1}, {0.0, 1.0, 0.0});
}

double mass(const PiecewiseConstant& f)
{
    return integral(f, Window{-100, 100})[0];
}

}  // namespace

TEST(AffineFlux, Interpolates)
{
    auto f = affine_flux([](double u) { return 0.5 * u * u; }, 1, -2, 2);
    EXPECT_EQ(f(0.25), 0.0625);
    EXPECT_EQ(f(1.5), 1.125);
    EXPECT_EQ(f.secant(f.index_of(0.0)), 0.25);
    EXPECT_WFT_ERROR(affine_flux([](double u) { return u; }, 2, 0.1, 1), ErrorKind::RangeNotOnGrid);
    EXPECT_WFT_ERROR(f.index_of(0.3), ErrorKind::ValueOffGrid);
}

TEST(AffineFlux, RejectsConcave)
{
    EXPECT_WFT_ERROR(affine_flux([](double u) { return -u * u; }, 2, -1, 1), ErrorKind::InvalidFunction);
}

TEST(ScalarRiemann, Examples)
{
    auto flux = burgers_flux(3, 1.0);
    auto shock = scalar_riemann(1.0, 0.0, flux);
    ASSERT_EQ(shock.size(), 1u);
    EXPECT_EQ(shock[0].kind, ScalarFrontKind::Shock);
    EXPECT_EQ(shock[0].speed, 0.5);

    auto fan = scalar_riemann(0.0, 1.0, burgers_flux(1, 1.0));
    ASSERT_EQ(fan.size(), 2u);
    EXPECT_EQ(fan[0].speed, 0.25);
    EXPECT_EQ(fan[1].speed, 0.75);
    EXPECT_EQ(fan[1].right_value - fan[1].left_value, 0.5);

    EXPECT_TRUE(scalar_riemann(0.5, 0.5, flux).empty());
    EXPECT_WFT_ERROR(scalar_riemann(0.1, 0.0, flux), ErrorKind::ValueOffGrid);
}

TEST(ScalarEvolve, FirstInteraction)
{
    const int nu = 6;
    const double h = std::ldexp(1.0, -nu);
    auto traj = scalar_evolve(unit_box(), burgers_flux(nu, 1.0), 3.0);
    ASSERT_FALSE(traj.events().empty());
    // head of the discrete fan moves at 1 - h/2, the shock at 1/2
    const double t1 = 2.0 / (1.0 - h);
    EXPECT_NEAR(traj.events()[0].t, t1, 1e-12);
    EXPECT_NEAR(traj.events()[0].x, t1 * (1.0 - h / 2), 1e-12);
    EXPECT_EQ(traj.events()[0].kind, "rarefaction+shock");
}

TEST(ScalarEvolve, ConservationAndMaximumPrinciple)
{
    auto init = PiecewiseConstant::scalar({-1, 0, 0.5, 2}, {0.0, 0.75, -0.5, 1.0, 0.0});
    auto traj = scalar_evolve(init, burgers_flux(5, 1.0), 6.0);
    const double m0 = mass(init);
    double tv_prev = total_variation(init);
    for (double t : {0.0, 0.3, 1.0, 2.5, 4.0, 6.0}) {
        auto s = traj.snapshot(t);
        EXPECT_LE(std::abs(mass(s) - m0), 1e-10 * (1 + t)) << t;
        EXPECT_LE(total_variation(s), tv_prev + 1e-15);
        EXPECT_DOUBLE_EQ(total_variation(s), traj.total_variation_at(t));
        tv_prev = total_variation(s);
        EXPECT_LE(sup_norm(s), sup_norm(init));
        for (double v : s.raw_values())
            EXPECT_EQ(std::ldexp(v, 5), std::round(std::ldexp(v, 5)));
    }
}

TEST(ScalarEvolve, ShockPositionMatchesExactSolution)
{
    // exact Burgers solution for the unit box: shock at sqrt(2 t) after t = 2
    auto traj = scalar_evolve(unit_box(), burgers_flux(8, 1.0), 8.0);
    auto s = traj.snapshot(8.0);
    EXPECT_NEAR(s.breakpoints().back(), 4.0, 0.05);
    EXPECT_NEAR(mass(s), 1.0, 1e-12);
}

TEST(ScalarEvolve, RiemannDataReproducesFan)
{
    auto flux = burgers_flux(4, 1.0);
    auto init = PiecewiseConstant::scalar({0}, {-0.5, 0.75});
    auto traj = scalar_evolve(init, flux, 2.0);
    EXPECT_EQ(traj.interaction_count(), 0u);
    auto fan = scalar_riemann(-0.5, 0.75, flux);
    auto fronts = traj.fronts_at(2.0);
    ASSERT_EQ(fronts.size(), fan.size());
    for (std::size_t i = 0; i < fan.size(); ++i)
        EXPECT_DOUBLE_EQ(fronts[i].position, 2.0 * fan[i].speed);
}

TEST(ScalarEvolve, FinitePropagation)
{
    auto init = PiecewiseConstant::scalar({0, 1}, {0.0, 0.5, -0.25});
    auto flux = burgers_flux(4, 0.5);
    auto traj = scalar_evolve(init, flux, 3.0);
    auto s = traj.snapshot(3.0);
    const double reach = 3.0 * flux.lipschitz();
    EXPECT_EQ(s.scalar_at(-reach - 1e-9), 0.0);
    EXPECT_EQ(s.scalar_at(1 + reach + 1e-9), -0.25);
}

TEST(ScalarEvolve, LipschitzInTime)
{
    auto flux = burgers_flux(5, 1.0);
    auto traj = scalar_evolve(unit_box(), flux, 1.0);
    EXPECT_EQ(lipschitz_time_bound(traj, 0.4, 0.4), 0.0);
    const double d = lipschitz_time_bound(traj, 0.0, 0.5);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, flux.lipschitz() * 2.0 * 0.5);
    EXPECT_WFT_ERROR(traj.snapshot(1.5), ErrorKind::OutOfSpan);

    auto flat = scalar_evolve(PiecewiseConstant::constant({0.5}), flux, 1.0);
    EXPECT_EQ(lipschitz_time_bound(flat, 0.0, 1.0), 0.0);
}

TEST(ScalarEvolve, FrontCap)
{
    ScalarOptions opt;
    opt.front_cap = 10;
    EXPECT_WFT_ERROR(scalar_evolve(unit_box(), burgers_flux(6, 1.0), 1.0, opt), ErrorKind::FrontCountExplosion);
}

TEST(ScalarEvolve, SimultaneousCollisionIsOneEvent)
{
    // two shocks hitting a resting state symmetrically meet at the same point
    auto init = PiecewiseConstant::scalar({-1, 1}, {0.5, 0.0, -0.5});
    auto traj = scalar_evolve(init, burgers_flux(3, 0.5), 4.0);
    ASSERT_EQ(traj.events().size(), 1u);
    EXPECT_EQ(traj.events()[0].in_fronts, 2);
    EXPECT_NEAR(traj.events()[0].t, 4.0, 1e-12);
    EXPECT_NEAR(traj.events()[0].x, 0.0, 1e-12);
}
