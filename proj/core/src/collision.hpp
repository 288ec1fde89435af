// collision.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace wft::detail {

constexpr double simultaneous_tol = 1e-12;
constexpr double never = std::numeric_limits<double>::infinity();

/// Time at which a front (x0a, sa, t0a) is caught by its right neighbour
/// (x0b, sb, t0b); `never` if they do not approach.
inline double meet_time(double x0a, double sa, double t0a, double x0b, double sb, double t0b, double t_now)
{
    if (!(sa > sb))
        return never;
    const double t = ((x0b - sb * t0b) - (x0a - sa * t0a)) / (sa - sb);
    return std::max(t, t_now);
}

struct Cluster {
    double t;
    std::size_t first;  // leftmost front involved
    std::size_t last;   // rightmost front involved (inclusive)
};

/// pair_time[i] holds the meeting time of fronts i and i+1.
/// Earliest time wins, ties (within simultaneous_tol) go to the leftmost
/// pair; a chain of consecutive pairs meeting at that time forms one cluster.
inline std::optional<Cluster> next_cluster(const std::vector<double>& pair_time)
{
    double t_min = never;
    for (double t : pair_time)
        t_min = std::min(t_min, t);
    if (t_min == never)
        return std::nullopt;
    std::size_t p = 0;
    while (pair_time[p] > t_min + simultaneous_tol)
        ++p;
    std::size_t q = p;
    while (q + 1 < pair_time.size() && pair_time[q + 1] <= t_min + simultaneous_tol)
        ++q;
    return Cluster{pair_time[p], p, q + 1};
}

}  // namespace wft::detail
