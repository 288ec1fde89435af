// piecewise.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/piecewise.hpp>
#include <wft/error.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wft {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool same_value(const double* a, const double* b, std::size_t dim)
{
    for (std::size_t k = 0; k < dim; ++k)
        if (a[k] != b[k])
            return false;
    return true;
}

double diff_norm1(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += std::abs(a[k] - b[k]);
    return s;
}

// Walk the merged breakpoint set, calling fn(x0, x1, piece_f, piece_g) for
// every maximal interval on which both functions are constant.
template <class Fn>
void sweep(const PiecewiseConstant& f, const PiecewiseConstant& g, Fn&& fn)
{
    const auto& bf = f.breakpoints();
    const auto& bg = g.breakpoints();
    std::size_t i = 0, j = 0;
    double x0 = -inf;
    while (i < bf.size() || j < bg.size()) {
        double x1;
        if (j >= bg.size() || (i < bf.size() && bf[i] < bg[j]))
            x1 = bf[i];
        else
            x1 = bg[j];
        fn(x0, x1, i, j);
        if (i < bf.size() && bf[i] == x1)
            ++i;
        if (j < bg.size() && bg[j] == x1)
            ++j;
        x0 = x1;
    }
    fn(x0, inf, i, j);
}

void check_dims(const PiecewiseConstant& f, const PiecewiseConstant& g)
{
    if (f.dim() != g.dim())
        throw Error(ErrorKind::DimensionMismatch,
                    "dimensions " + std::to_string(f.dim()) + " and " + std::to_string(g.dim()));
}

}  // namespace

PiecewiseConstant::PiecewiseConstant(std::size_t dim, std::vector<double> breakpoints,
                                     std::vector<double> values)
    : m_dim(dim)
{
    if (dim == 0)
        throw Error(ErrorKind::InvalidFunction, "dim must be positive");
    if (values.size() != (breakpoints.size() + 1) * dim)
        throw Error(ErrorKind::InvalidFunction, "value count does not match breakpoints");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]))
            throw Error(ErrorKind::InvalidFunction, "non-finite breakpoint");
        if (i > 0 && !(breakpoints[i - 1] < breakpoints[i]))
            throw Error(ErrorKind::InvalidFunction, "breakpoints must be strictly increasing");
    }
    for (double v : values)
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidFunction, "non-finite value");

    m_breaks.reserve(breakpoints.size());
    m_values.reserve(values.size());
    m_values.insert(m_values.end(), values.begin(), values.begin() + dim);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const double* next = values.data() + (i + 1) * dim;
        const double* last = m_values.data() + m_values.size() - dim;
        if (same_value(last, next, dim))
            continue;
        m_breaks.push_back(breakpoints[i]);
        m_values.insert(m_values.end(), next, next + dim);
    }
}

PiecewiseConstant PiecewiseConstant::constant(std::vector<double> value)
{
    const std::size_t d = value.size();
    return PiecewiseConstant(d, {}, std::move(value));
}

PiecewiseConstant PiecewiseConstant::scalar(std::vector<double> breakpoints, std::vector<double> values)
{
    return PiecewiseConstant(1, std::move(breakpoints), std::move(values));
}

PiecewiseConstant PiecewiseConstant::collapse(std::size_t dim, std::vector<double> breakpoints,
                                              std::vector<double> values)
{
    if (dim == 0 || values.size() != (breakpoints.size() + 1) * dim)
        throw Error(ErrorKind::InvalidFunction, "value count does not match breakpoints");
    std::vector<double> bp;
    std::vector<double> vals(values.begin(), values.begin() + dim);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!bp.empty() && breakpoints[i] < bp.back())
            throw Error(ErrorKind::InvalidFunction, "breakpoints must be nondecreasing");
        const double* next = values.data() + (i + 1) * dim;
        if (!bp.empty() && breakpoints[i] == bp.back()) {
            // zero-width piece: overwrite it with the value to its right
            std::copy(next, next + dim, vals.end() - dim);
            continue;
        }
        bp.push_back(breakpoints[i]);
        vals.insert(vals.end(), next, next + dim);
    }
    return PiecewiseConstant(dim, std::move(bp), std::move(vals));
}

std::size_t PiecewiseConstant::piece_at(double x) const
{
    return static_cast<std::size_t>(std::upper_bound(m_breaks.begin(), m_breaks.end(), x) - m_breaks.begin());
}

double total_variation(const PiecewiseConstant& f)
{
    double tv = 0.0;
    for (std::size_t i = 0; i < f.jump_count(); ++i)
        tv += diff_norm1(f.value(i), f.value(i + 1));
    return tv;
}

double l1_distance(const PiecewiseConstant& f, const PiecewiseConstant& g, std::optional<Window> window)
{
    check_dims(f, g);
    if (!window && diff_norm1(f.left_value(), g.left_value()) + diff_norm1(f.right_value(), g.right_value()) != 0.0)
        throw Error(ErrorKind::NonIntegrableDifference, "end values differ on an unbounded domain");
    const double a = window ? window->a : -inf;
    const double b = window ? window->b : inf;
    double total = 0.0;
    sweep(f, g, [&](double x0, double x1, std::size_t i, std::size_t j) {
        const double lo = std::max(x0, a);
        const double hi = std::min(x1, b);
        if (!(hi > lo))
            return;
        const double d = diff_norm1(f.value(i), g.value(j));
        if (d != 0.0)
            total += d * (hi - lo);
    });
    return total;
}

double sup_distance(const PiecewiseConstant& f, const PiecewiseConstant& g, std::optional<Window> window)
{
    check_dims(f, g);
    const double a = window ? window->a : -inf;
    const double b = window ? window->b : inf;
    double best = 0.0;
    sweep(f, g, [&](double x0, double x1, std::size_t i, std::size_t j) {
        if (!(std::min(x1, b) > std::max(x0, a)))
            return;
        for (std::size_t k = 0; k < f.dim(); ++k)
            best = std::max(best, std::abs(f.value(i)[k] - g.value(j)[k]));
    });
    return best;
}

std::vector<double> integral(const PiecewiseConstant& f, Window window)
{
    std::vector<double> out(f.dim(), 0.0);
    double x0 = -inf;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const double x1 = i < f.jump_count() ? f.breakpoints()[i] : inf;
        const double lo = std::max(x0, window.a);
        const double hi = std::min(x1, window.b);
        if (hi > lo)
            for (std::size_t k = 0; k < f.dim(); ++k)
                out[k] += f.value(i)[k] * (hi - lo);
        x0 = x1;
    }
    return out;
}

PiecewiseConstant quantize_to_grid(const PiecewiseConstant& f, int nu)
{
    if (f.dim() != 1)
        throw Error(ErrorKind::DimensionMismatch, "quantization needs a scalar function");
    std::vector<double> vals(f.raw_values());
    for (double& v : vals)
        v = std::ldexp(std::round(std::ldexp(v, nu)), -nu);  // std::round: half away from zero
    return PiecewiseConstant(1, f.breakpoints(), std::move(vals));
}

PiecewiseConstant combine(const PiecewiseConstant& f, const PiecewiseConstant& g, std::size_t out_dim,
                          const PieceOp& op)
{
    std::vector<double> bp;
    std::vector<double> vals;
    bp.reserve(f.jump_count() + g.jump_count());
    vals.reserve((f.jump_count() + g.jump_count() + 1) * out_dim);
    std::vector<double> buf(out_dim);
    sweep(f, g, [&](double x0, double, std::size_t i, std::size_t j) {
        if (x0 != -inf)
            bp.push_back(x0);
        op(f.value(i), g.value(j), buf);
        vals.insert(vals.end(), buf.begin(), buf.end());
    });
    return PiecewiseConstant(out_dim, std::move(bp), std::move(vals));
}

PiecewiseConstant map_values(const PiecewiseConstant& f, std::size_t out_dim, const MapOp& op)
{
    std::vector<double> vals(f.piece_count() * out_dim);
    for (std::size_t i = 0; i < f.piece_count(); ++i)
        op(f.value(i), std::span<double>(vals.data() + i * out_dim, out_dim));
    return PiecewiseConstant(out_dim, f.breakpoints(), std::move(vals));
}

PiecewiseConstant add(const PiecewiseConstant& f, const PiecewiseConstant& g)
{
    check_dims(f, g);
    return combine(f, g, f.dim(), [](auto a, auto b, auto out) {
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = a[k] + b[k];
    });
}

PiecewiseConstant subtract(const PiecewiseConstant& f, const PiecewiseConstant& g)
{
    check_dims(f, g);
    return combine(f, g, f.dim(), [](auto a, auto b, auto out) {
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = a[k] - b[k];
    });
}

PiecewiseConstant scale(const PiecewiseConstant& f, double c)
{
    return map_values(f, f.dim(), [c](auto a, auto out) {
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = c * a[k];
    });
}

PiecewiseConstant shift(const PiecewiseConstant& f, double dx)
{
    std::vector<double> bp(f.breakpoints());
    for (double& x : bp)
        x += dx;
    // shifting may merge neighbouring breakpoints after rounding
    return PiecewiseConstant::collapse(f.dim(), std::move(bp), f.raw_values());
}

PiecewiseConstant clip(const PiecewiseConstant& f, Window window)
{
    const auto& br = f.breakpoints();
    const std::size_t first = f.piece_at(window.a);
    // piece holding points just left of b
    const std::size_t last = static_cast<std::size_t>(
        std::lower_bound(br.begin(), br.end(), window.b) - br.begin());
    std::vector<double> bp;
    std::vector<double> vals;
    for (std::size_t i = first; i <= last && i < f.piece_count(); ++i) {
        if (i > first)
            bp.push_back(br[i - 1]);
        auto v = f.value(i);
        vals.insert(vals.end(), v.begin(), v.end());
    }
    if (vals.empty()) {
        auto v = f.value(first);
        vals.assign(v.begin(), v.end());
    }
    return PiecewiseConstant(f.dim(), std::move(bp), std::move(vals));
}

std::optional<Window> support_hull(const PiecewiseConstant& f)
{
    if (f.is_constant())
        return std::nullopt;
    return Window{f.breakpoints().front(), f.breakpoints().back()};
}

double sup_norm(const PiecewiseConstant& f)
{
    double m = 0.0;
    for (double v : f.raw_values())
        m = std::max(m, std::abs(v));
    return m;
}

nlohmann::json to_json(const PiecewiseConstant& f)
{
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        auto v = f.value(i);
        values.push_back(std::vector<double>(v.begin(), v.end()));
    }
    return {{"dim", f.dim()}, {"breakpoints", f.breakpoints()}, {"values", values}};
}

PiecewiseConstant piecewise_from_json(const nlohmann::json& j)
{
    try {
        const std::size_t dim = j.at("dim").get<std::size_t>();
        auto bp = j.at("breakpoints").get<std::vector<double>>();
        std::vector<double> vals;
        for (const auto& v : j.at("values")) {
            if (v.is_number()) {
                vals.push_back(v.get<double>());
            } else {
                auto row = v.get<std::vector<double>>();
                if (row.size() != dim)
                    throw Error(ErrorKind::InvalidFunction, "value of wrong dimension");
                vals.insert(vals.end(), row.begin(), row.end());
            }
        }
        return PiecewiseConstant(dim, std::move(bp), std::move(vals));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidFunction, e.what());
    }
}

}  // namespace wft
