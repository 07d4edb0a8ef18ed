#include "dynclass/manifolds.hpp"

#include <algorithm>
#include <cmath>

#include "dynclass/numerics.hpp"
#include "dynclass/polyline.hpp"

namespace dynclass {

const char* to_string(TransversalityOutcome outcome) {
    switch (outcome) {
        case TransversalityOutcome::transverse: return "transverse";
        case TransversalityOutcome::tangency: return "tangency";
        case TransversalityOutcome::no_intersections: return "no_intersections";
        case TransversalityOutcome::not_checked: return "not_checked";
    }
    return "unknown";
}

namespace {

constexpr double kHyperTol = 1e-8;

/// Unit directions spanning the requested invariant subspace; a complex
/// conjugate pair contributes one direction (real part of the eigenvector).
std::vector<Vec> eigendirections(const Mat& j, bool unstable) {
    const EigenSet es = eigen(j);
    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        max_mag = std::max(max_mag, std::abs(es.values[i]));
    const double zero_tol = kHyperTol * std::max(1.0, max_mag);

    std::vector<bool> consumed(static_cast<size_t>(es.values.size()), false);
    std::vector<Vec> dirs;
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        if (consumed[static_cast<size_t>(i)]) continue;
        const auto lambda = es.values[i];
        const bool qualifies =
            unstable ? lambda.real() > zero_tol : lambda.real() < -zero_tol;
        if (!qualifies) continue;

        if (std::abs(lambda.imag()) > zero_tol) {
            for (Eigen::Index k = i + 1; k < es.values.size(); ++k) {
                if (consumed[static_cast<size_t>(k)]) continue;
                if (std::abs(es.values[k] - std::conj(lambda)) <=
                    1e-9 * std::max(1.0, max_mag)) {
                    consumed[static_cast<size_t>(k)] = true;
                    break;
                }
            }
        }

        Vec dir = es.vectors.col(i).real();
        if (dir.norm() < 1e-12) dir = es.vectors.col(i).imag();
        const double norm = dir.norm();
        if (norm < 1e-12) continue;
        dirs.push_back(dir / norm);
    }
    return dirs;
}

std::vector<ManifoldBranch> trace_manifold(const VectorField& field,
                                           const FixedPointRecord& saddle,
                                           ManifoldKind kind, int n_points,
                                           double extent, const Box* bounds) {
    if (saddle.type != FixedPointType::SADDLE)
        throw NotASaddleError("manifolds are traced from saddle points; got " +
                              std::string(to_string(saddle.type)));
    if (n_points < 2 || !(extent > 0.0))
        throw DimensionError("manifold tracing needs n_points >= 2 and extent > 0");

    const bool unstable = kind == ManifoldKind::unstable;
    const Mat j = jacobian(field, saddle.location);
    const auto dirs = eigendirections(j, unstable);
    if (dirs.empty())
        throw NotASaddleError(std::string("saddle has no ") +
                              (unstable ? "unstable" : "stable") + " direction");

    const double delta = 1e-5 * std::max(1.0, saddle.location.norm());
    const double sign_of_time = unstable ? 1.0 : -1.0;
    const detail::Rhs rhs = [&field, sign_of_time](const Vec& y) {
        return Vec(sign_of_time * field(y));
    };

    IntegrationSettings integ;
    integ.t_end = 1e5; // arc-length target is the real stopping rule

    std::vector<ManifoldBranch> branches;
    for (const Vec& dir : dirs) {
        for (const int sign : {+1, -1}) {
            const Vec x0 = saddle.location + sign * delta * dir;

            std::vector<Vec> raw{x0};
            double arc = 0.0;
            const auto grow = [&](double, double, const Vec& y1,
                                  const detail::DenseOut&) {
                arc += (y1 - raw.back()).norm();
                raw.push_back(y1);
                return arc >= extent ? detail::StepAction::stop
                                     : detail::StepAction::proceed;
            };
            try {
                detail::integrate_core(rhs, x0, integ, bounds, grow);
            } catch (const Error&) {
                // blow-up or stiffness past the traced region: keep what we have
            }

            ManifoldBranch branch;
            branch.saddle = saddle;
            branch.kind = kind;
            branch.eigvec = dir;
            branch.sign = sign;
            branch.points = resample_by_arc_length(raw, n_points, extent);
            branches.push_back(std::move(branch));
        }
    }
    return branches;
}

Vec tangent_at(const std::vector<Vec>& line, size_t i) {
    const size_t lo = i == 0 ? 0 : i - 1;
    const size_t hi = i + 1 < line.size() ? i + 1 : i;
    Vec t = line[hi] - line[lo];
    const double n = t.norm();
    return n > 0.0 ? Vec(t / n) : t;
}

} // namespace

std::vector<ManifoldBranch> unstable_manifold(const VectorField& field,
                                              const FixedPointRecord& saddle,
                                              int n_points, double extent,
                                              const Box* bounds) {
    return trace_manifold(field, saddle, ManifoldKind::unstable, n_points, extent,
                          bounds);
}

std::vector<ManifoldBranch> stable_manifold(const VectorField& field,
                                            const FixedPointRecord& saddle,
                                            int n_points, double extent,
                                            const Box* bounds) {
    return trace_manifold(field, saddle, ManifoldKind::stable, n_points, extent,
                          bounds);
}

bool detect_homoclinic(const VectorField& field, const FixedPointRecord& saddle,
                       double tol) {
    if (saddle.type != FixedPointType::SADDLE)
        throw NotASaddleError("homoclinic detection requires a saddle point");
    if (!(tol > 0.0)) throw DimensionError("tol must be positive");

    const Mat j = jacobian(field, saddle.location);
    const auto dirs = eigendirections(j, /*unstable=*/true);
    if (dirs.empty()) throw NotASaddleError("saddle has no unstable direction");

    const Vec& center = saddle.location;
    const double delta = 1e-5 * std::max(1.0, center.norm());
    const double escape_radius = 1e4 * std::max(1.0, center.norm());
    const detail::Rhs rhs = [&field](const Vec& y) { return field(y); };

    for (const Vec& dir : dirs) {
        for (const int sign : {+1, -1}) {
            const Vec x0 = center + sign * delta * dir;
            bool left_ball = false;
            bool returned = false;
            const auto watch = [&](double t0, double t1, const Vec&,
                                   const detail::DenseOut& dense) {
                // check a few interior samples per step so fast passes
                // through the ball are not hopped over
                for (int q = 1; q <= 4; ++q) {
                    const Vec y = dense.at(t0 + (t1 - t0) * q / 4.0);
                    const double r = (y - center).norm();
                    if (!left_ball) {
                        if (r >= 2.0 * tol) left_ball = true;
                    } else if (r <= tol) {
                        returned = true;
                        return detail::StepAction::stop;
                    }
                    if (r > escape_radius) return detail::StepAction::stop;
                }
                return detail::StepAction::proceed;
            };

            IntegrationSettings integ;
            integ.t_end = 200.0;
            try {
                detail::integrate_core(rhs, x0, integ, nullptr, watch);
            } catch (const Error&) {
                continue; // branch blew up; certainly not a return
            }
            if (returned) return true;
        }
    }
    return false;
}

TransversalityVerdict check_transversality(const VectorField& field,
                                           const std::vector<FixedPointRecord>& saddles,
                                           const Box& bounds, double tol) {
    bounds.validate();
    TransversalityVerdict verdict;
    if (saddles.empty()) {
        verdict.verdict = TransversalityOutcome::no_intersections;
        return verdict;
    }

    const double diam = bounds.diameter();
    const double hit_radius = tol * diam;
    const double self_exclusion = 2.0 * tol * diam;
    constexpr double kTangencyAngle = 0.0873; // 5 degrees, in radians
    constexpr int kPointsPerBranch = 100;

    struct Traced {
        std::vector<ManifoldBranch> unstable, stable;
    };
    std::vector<Traced> traced(saddles.size());
    for (size_t s = 0; s < saddles.size(); ++s) {
        try {
            traced[s].unstable = unstable_manifold(field, saddles[s],
                                                   kPointsPerBranch, diam, &bounds);
            traced[s].stable =
                stable_manifold(field, saddles[s], kPointsPerBranch, diam, &bounds);
        } catch (const NotASaddleError&) {
            // degenerate entry; contributes no pairs
        }
    }

    bool any_intersection = false;
    bool any_tangency = false;

    for (size_t s1 = 0; s1 < saddles.size(); ++s1) {
        for (size_t s2 = 0; s2 < saddles.size(); ++s2) {
            const bool self = s1 == s2;
            const Vec& center = saddles[s1].location;
            for (const auto& ub : traced[s1].unstable) {
                for (const auto& sb : traced[s2].stable) {
                    ++verdict.checked_pairs;

                    // minimal point-to-point distance between the two
                    // sampled polylines; for a saddle against itself the
                    // shared neighbourhood is excluded
                    double best = std::numeric_limits<double>::infinity();
                    size_t best_i = 0, best_j = 0;
                    for (size_t i = 0; i < ub.points.size(); ++i) {
                        if (self && (ub.points[i] - center).norm() < self_exclusion)
                            continue;
                        for (size_t k = 0; k < sb.points.size(); ++k) {
                            if (self &&
                                (sb.points[k] - center).norm() < self_exclusion)
                                continue;
                            const double d = (ub.points[i] - sb.points[k]).norm();
                            if (d < best) {
                                best = d;
                                best_i = i;
                                best_j = k;
                            }
                        }
                    }
                    if (!(best <= hit_radius)) continue;

                    any_intersection = true;
                    const Vec tu = tangent_at(ub.points, best_i);
                    const Vec tv = tangent_at(sb.points, best_j);
                    const double c = std::clamp(std::abs(tu.dot(tv)), 0.0, 1.0);
                    const double angle = std::acos(c);
                    if (!verdict.min_angle || angle < *verdict.min_angle)
                        verdict.min_angle = angle;
                    if (angle < kTangencyAngle) any_tangency = true;
                }
            }
        }
    }

    if (any_tangency)
        verdict.verdict = TransversalityOutcome::tangency;
    else if (any_intersection)
        verdict.verdict = TransversalityOutcome::transverse;
    else
        verdict.verdict = TransversalityOutcome::no_intersections;
    return verdict;
}

} // namespace dynclass
