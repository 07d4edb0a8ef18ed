#pragma once

#include <optional>
#include <vector>

#include "dynclass/fixedpoints.hpp"
#include "dynclass/odeint.hpp"

namespace dynclass {

enum class ManifoldKind { stable, unstable };

/// One traced branch of a saddle's invariant manifold: points start at the
/// saddle offset by sign * delta along the (unit) eigendirection, with
/// delta = 1e-5 * max(1, ||location||), and are resampled uniformly in arc
/// length up to the requested extent.
struct ManifoldBranch {
    FixedPointRecord saddle;
    ManifoldKind kind = ManifoldKind::unstable;
    Vec eigvec;
    int sign = +1;
    std::vector<Vec> points;
};

enum class TransversalityOutcome { transverse, tangency, no_intersections, not_checked };

const char* to_string(TransversalityOutcome outcome);

struct TransversalityVerdict {
    int checked_pairs = 0;
    std::optional<double> min_angle; // radians, present when pairs intersect
    TransversalityOutcome verdict = TransversalityOutcome::not_checked;
};

/// Trace the unstable manifold branches of a saddle (one per real unstable
/// eigendirection and sign; a complex pair contributes a single direction via
/// the real part of its eigenvector). Stops at `extent` arc length or on
/// bounds exit when bounds are given.
std::vector<ManifoldBranch> unstable_manifold(const VectorField& field,
                                              const FixedPointRecord& saddle,
                                              int n_points = 100,
                                              double extent = 1.0,
                                              const Box* bounds = nullptr);

/// Same with time reversed: integrates the negated field from perturbations
/// along the stable eigendirections.
std::vector<ManifoldBranch> stable_manifold(const VectorField& field,
                                            const FixedPointRecord& saddle,
                                            int n_points = 100, double extent = 1.0,
                                            const Box* bounds = nullptr);

/// True when some unstable branch, after first leaving the ball of radius
/// 2*tol around the saddle, re-enters the ball of radius tol.
bool detect_homoclinic(const VectorField& field, const FixedPointRecord& saddle,
                       double tol = 0.1);

/// Pairwise test of unstable-vs-stable branch intersections over all ordered
/// saddle pairs (including a saddle against itself, with a neighbourhood of
/// the shared saddle excluded). Branch polylines closer than
/// tol * diameter(bounds) count as intersecting; intersections whose local
/// tangents are within 5 degrees of parallel are tangencies.
TransversalityVerdict check_transversality(const VectorField& field,
                                           const std::vector<FixedPointRecord>& saddles,
                                           const Box& bounds, double tol = 0.01);

} // namespace dynclass
