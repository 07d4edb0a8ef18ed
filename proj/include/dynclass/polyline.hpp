#pragma once

#include <vector>

#include "dynclass/core.hpp"

namespace dynclass {

/// Distance from a point to the segment [a, b].
inline double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

/// Distance from a point to a piecewise-linear curve.
inline double point_polyline_distance(const Vec& p, const std::vector<Vec>& line) {
    if (line.empty()) return std::numeric_limits<double>::infinity();
    if (line.size() == 1) return (p - line.front()).norm();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < line.size(); ++i)
        best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
    return best;
}

/// Distance from a point to a closed sampled curve (the segment from the
/// last point back to the first is included).
inline double point_closed_polyline_distance(const Vec& p,
                                             const std::vector<Vec>& loop) {
    double best = point_polyline_distance(p, loop);
    if (loop.size() > 2)
        best = std::min(best, point_segment_distance(p, loop.back(), loop.front()));
    return best;
}

/// Symmetric Hausdorff-style distance between two sampled curves: the larger
/// of the two one-sided max point-to-polyline distances.
inline double polyline_hausdorff(const std::vector<Vec>& a,
                                 const std::vector<Vec>& b) {
    double d = 0.0;
    for (const Vec& p : a) d = std::max(d, point_polyline_distance(p, b));
    for (const Vec& p : b) d = std::max(d, point_polyline_distance(p, a));
    return d;
}

/// Hausdorff-style distance between two closed sampled curves.
inline double closed_polyline_hausdorff(const std::vector<Vec>& a,
                                        const std::vector<Vec>& b) {
    double d = 0.0;
    for (const Vec& p : a) d = std::max(d, point_closed_polyline_distance(p, b));
    for (const Vec& p : b) d = std::max(d, point_closed_polyline_distance(p, a));
    return d;
}

/// Resample a polyline to `n_points` points equally spaced in arc length,
/// truncated at `max_length` when the curve is longer. Endpoints are kept.
inline std::vector<Vec> resample_by_arc_length(const std::vector<Vec>& line,
                                               int n_points, double max_length) {
    if (line.empty() || n_points < 2) return line;

    std::vector<double> cum(line.size(), 0.0);
    for (size_t i = 1; i < line.size(); ++i)
        cum[i] = cum[i - 1] + (line[i] - line[i - 1]).norm();
    const double total = std::min(cum.back(), max_length);
    if (total <= 0.0) return {line.front()};

    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(n_points));
    size_t seg = 0;
    for (int j = 0; j < n_points; ++j) {
        const double target =
            total * static_cast<double>(j) / static_cast<double>(n_points - 1);
        while (seg + 1 < cum.size() && cum[seg + 1] < target) ++seg;
        if (seg + 1 >= line.size()) {
            out.push_back(line.back());
            continue;
        }
        const double seg_len = cum[seg + 1] - cum[seg];
        const double alpha = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
        out.push_back(line[seg] + alpha * (line[seg + 1] - line[seg]));
    }
    return out;
}

} // namespace dynclass
