// piecewise.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace wft {

struct Window {
    double a;
    double b;
};

/// Right-continuous step function on the real line with values in R^d.
/// Piece i holds on [x_{i-1}, x_i), with x_{-1} = -inf and x_{N} = +inf.
/// Always stored in canonical form: strictly increasing breakpoints and
/// no two adjacent pieces with bit-identical values.
class PiecewiseConstant {
public:
    PiecewiseConstant() : m_dim(1), m_values{0.0} {}

    /// `values` is flat, piece-major: (breakpoints.size() + 1) * dim entries.
    PiecewiseConstant(std::size_t dim, std::vector<double> breakpoints, std::vector<double> values);

    static PiecewiseConstant constant(std::vector<double> value);
    static PiecewiseConstant scalar(std::vector<double> breakpoints, std::vector<double> values);

    /// Like the constructor but tolerates repeated breakpoints; zero-width
    /// pieces are dropped (the outer values win).
    static PiecewiseConstant collapse(std::size_t dim, std::vector<double> breakpoints,
                                      std::vector<double> values);

    std::size_t dim() const { return m_dim; }
    std::size_t jump_count() const { return m_breaks.size(); }
    std::size_t piece_count() const { return m_breaks.size() + 1; }
    bool is_constant() const { return m_breaks.empty(); }

    const std::vector<double>& breakpoints() const { return m_breaks; }
    const std::vector<double>& raw_values() const { return m_values; }

    std::span<const double> value(std::size_t piece) const
    {
        return {m_values.data() + piece * m_dim, m_dim};
    }
    double scalar_value(std::size_t piece) const { return m_values[piece * m_dim]; }
    std::span<const double> left_value() const { return value(0); }
    std::span<const double> right_value() const { return value(m_breaks.size()); }

    std::size_t piece_at(double x) const;
    std::span<const double> at(double x) const { return value(piece_at(x)); }
    double scalar_at(double x) const { return m_values[piece_at(x) * m_dim]; }

    bool operator==(const PiecewiseConstant& other) const = default;

private:
    std::size_t m_dim;
    std::vector<double> m_breaks;
    std::vector<double> m_values;
};

using PieceOp = std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;
using MapOp = std::function<void(std::span<const double>, std::span<double>)>;

double total_variation(const PiecewiseConstant& f);

double l1_distance(const PiecewiseConstant& f, const PiecewiseConstant& g,
                   std::optional<Window> window = std::nullopt);

double sup_distance(const PiecewiseConstant& f, const PiecewiseConstant& g,
                    std::optional<Window> window = std::nullopt);

/// Signed integral of each component over the window.
std::vector<double> integral(const PiecewiseConstant& f, Window window);

PiecewiseConstant quantize_to_grid(const PiecewiseConstant& f, int nu);

/// Pointwise binary operation on the merged breakpoint set.
PiecewiseConstant combine(const PiecewiseConstant& f, const PiecewiseConstant& g, std::size_t out_dim,
                          const PieceOp& op);

PiecewiseConstant map_values(const PiecewiseConstant& f, std::size_t out_dim, const MapOp& op);

PiecewiseConstant add(const PiecewiseConstant& f, const PiecewiseConstant& g);
PiecewiseConstant subtract(const PiecewiseConstant& f, const PiecewiseConstant& g);
PiecewiseConstant scale(const PiecewiseConstant& f, double c);
PiecewiseConstant shift(const PiecewiseConstant& f, double dx);

/// Keep only the breakpoints strictly inside (a, b); the function is
/// extended by its values at a and just left of b.
PiecewiseConstant clip(const PiecewiseConstant& f, Window window);

/// Smallest interval containing all breakpoints (empty optional if constant).
std::optional<Window> support_hull(const PiecewiseConstant& f);

double sup_norm(const PiecewiseConstant& f);

nlohmann::json to_json(const PiecewiseConstant& f);
PiecewiseConstant piecewise_from_json(const nlohmann::json& j);

}  // namespace wft
