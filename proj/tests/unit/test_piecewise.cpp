// test_piecewise.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/piecewise.hpp>

#include "test_util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace wft;

namespace {

PiecewiseConstant box(double a, double b, double h)
{
    return PiecewiseConstant::scalar({a, b}, {0.0, h, 0.0});
}

// midpoint rule on a grid much finer than any piece; exact for breakpoints on the grid
double brute_l1(const PiecewiseConstant& f, const PiecewiseConstant& g, double a, double b, int cells)
{
    const double dx = (b - a) / cells;
    double s = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x = a + (i + 0.5) * dx;
        auto u = f.at(x);
        auto v = g.at(x);
        for (std::size_t k = 0; k < u.size(); ++k)
            s += std::abs(u[k] - v[k]) * dx;
    }
    return s;
}

PiecewiseConstant random_scalar(std::mt19937_64& rng, int jumps)
{
    std::uniform_int_distribution<int> pos(-64, 64);
    std::uniform_int_distribution<int> val(-8, 8);
    std::vector<double> bp;
    for (int i = 0; i < jumps; ++i)
        bp.push_back(pos(rng) / 16.0);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> vals{0.0};
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        vals.push_back(val(rng) / 4.0);
    vals.push_back(0.0);
    return PiecewiseConstant::scalar(bp, vals);
}

}  // namespace

TEST(Piecewise, TotalVariationOfBox)
{
    EXPECT_DOUBLE_EQ(total_variation(box(0, 1, -0.7)), 1.4);
    EXPECT_EQ(total_variation(PiecewiseConstant::constant({3.0, 1.0})), 0.0);
    EXPECT_DOUBLE_EQ(total_variation(PiecewiseConstant::scalar({0, 1}, {0, 0.25, 0.5})), 0.5);
}

TEST(Piecewise, VectorTotalVariationUsesOneNorm)
{
    PiecewiseConstant f(2, {0.0}, {0.0, 0.0, 1.0, -2.0});
    EXPECT_DOUBLE_EQ(total_variation(f), 3.0);
}

TEST(Piecewise, CanonicalMergesEqualNeighbours)
{
    auto f = PiecewiseConstant::scalar({0, 1, 2}, {0, 1, 1, 0});
    EXPECT_EQ(f.jump_count(), 2u);
    EXPECT_EQ(f.breakpoints(), (std::vector<double>{0, 2}));
    auto g = PiecewiseConstant(1, f.breakpoints(), f.raw_values());
    EXPECT_EQ(f, g);
}

TEST(Piecewise, RejectsBadInput)
{
    EXPECT_WFT_ERROR(PiecewiseConstant::scalar({1, 0}, {0, 1, 0}), ErrorKind::InvalidFunction);
    EXPECT_WFT_ERROR(PiecewiseConstant::scalar({0}, {0, NAN}), ErrorKind::InvalidFunction);
    EXPECT_WFT_ERROR(PiecewiseConstant::scalar({0}, {0}), ErrorKind::InvalidFunction);
}

TEST(Piecewise, RightContinuous)
{
    auto f = box(0, 1, 2.0);
    EXPECT_EQ(f.scalar_at(0.0), 2.0);
    EXPECT_EQ(f.scalar_at(1.0), 0.0);
    EXPECT_EQ(f.scalar_at(-1e-300), 0.0);
}

TEST(Piecewise, L1Examples)
{
    EXPECT_EQ(l1_distance(box(0, 1, 1), box(0, 1, 1)), 0.0);
    EXPECT_DOUBLE_EQ(l1_distance(box(0, 1, 1), PiecewiseConstant::constant({0.0})), 1.0);
    EXPECT_DOUBLE_EQ(l1_distance(box(0, 1, 1), box(0.5, 1.5, 1)), 1.0);
}

TEST(Piecewise, L1NeedsCompactDifference)
{
    auto step = PiecewiseConstant::scalar({0}, {0, 1});
    auto zero = PiecewiseConstant::constant({0.0});
    EXPECT_WFT_ERROR(l1_distance(step, zero), ErrorKind::NonIntegrableDifference);
    EXPECT_DOUBLE_EQ(l1_distance(step, zero, Window{-1, 3}), 3.0);
}

TEST(Piecewise, L1MatchesFineGridAndTriangle)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_scalar(rng, 6);
        auto g = random_scalar(rng, 6);
        auto h = random_scalar(rng, 6);
        // breakpoints lie on multiples of 1/16, so 16 cells per unit is exact
        EXPECT_NEAR(l1_distance(f, g), brute_l1(f, g, -5, 5, 160 * 16), 1e-12);
        EXPECT_EQ(l1_distance(f, g), l1_distance(g, f));
        EXPECT_LE(l1_distance(f, h), l1_distance(f, g) + l1_distance(g, h));
    }
}

TEST(Piecewise, QuantizeExamples)
{
    auto q = [](double v, int nu) {
        return quantize_to_grid(PiecewiseConstant::scalar({0}, {0.0, v}), nu).scalar_at(1.0);
    };
    EXPECT_EQ(q(0.3, 2), 0.25);
    EXPECT_EQ(q(0.125, 2), 0.25);
    EXPECT_EQ(q(-0.125, 2), -0.25);
    EXPECT_EQ(q(0.75, 2), 0.75);
}

TEST(Piecewise, QuantizeBounds)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-1, 1);
    for (int nu = 1; nu <= 10; ++nu) {
        std::vector<double> bp{0, 1, 2, 3, 4};
        std::vector<double> vals{0, val(rng), val(rng), val(rng), val(rng), 0};
        auto f = PiecewiseConstant::scalar(bp, vals);
        auto q = quantize_to_grid(f, nu);
        EXPECT_LE(total_variation(q), total_variation(f) + std::ldexp(2.0, -nu) * f.jump_count());
        EXPECT_LE(sup_distance(f, q), std::ldexp(1.0, -nu - 1));
        for (double v : q.raw_values())
            EXPECT_EQ(std::ldexp(v, nu), std::round(std::ldexp(v, nu)));
    }
}

TEST(Piecewise, ShiftAddClip)
{
    auto f = shift(box(0, 1, 1), 2.0);
    EXPECT_EQ(f.breakpoints(), (std::vector<double>{2, 3}));
    auto s = add(box(0, 2, 1), box(1, 3, 1));
    EXPECT_EQ(s.raw_values(), (std::vector<double>{0, 1, 2, 1, 0}));
    auto d = subtract(s, s);
    EXPECT_TRUE(d.is_constant());
    auto c = clip(s, Window{0.5, 1.5});
    EXPECT_EQ(c.breakpoints(), (std::vector<double>{1}));
    EXPECT_DOUBLE_EQ(integral(s, Window{-1, 4})[0], 4.0);
}

TEST(Piecewise, JsonRoundTrip)
{
    PiecewiseConstant f(2, {-1.0, 0.5}, {0, 0, 1, 2, 0.1, 0.2});
    auto j = to_json(f);
    EXPECT_EQ(j["dim"], 2);
    EXPECT_EQ(piecewise_from_json(j), f);
    auto s = piecewise_from_json(nlohmann::json::parse(R"({"dim":1,"breakpoints":[0,1],"values":[0,1,0]})"));
    EXPECT_EQ(s, box(0, 1, 1));
}
