#include "dynclass/orbits.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "dynclass/numerics.hpp"
#include "dynclass/parallel.hpp"
#include "dynclass/polyline.hpp"
#include "dynclass/rng.hpp"

namespace dynclass {

OrbitStability floquet_stability(const CVec& multipliers) {
    if (multipliers.size() == 0)
        throw InvalidOrbitError("empty multiplier set");

    Eigen::Index trivial = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < multipliers.size(); ++i) {
        const double d = std::abs(multipliers[i] - std::complex<double>(1.0, 0.0));
        if (d < best) {
            best = d;
            trivial = i;
        }
    }
    if (best > 1e-2)
        throw InvalidOrbitError(
            "no trivial Floquet multiplier within 1e-2 of 1; not a periodic orbit");

    bool any_expanding = false, all_contracting = true;
    for (Eigen::Index i = 0; i < multipliers.size(); ++i) {
        if (i == trivial) continue;
        const double mod = std::abs(multipliers[i]);
        if (mod > 1.0 + 1e-6) any_expanding = true;
        if (mod >= 1.0 - 1e-6) all_contracting = false;
    }
    if (any_expanding) return OrbitStability::unstable;
    if (all_contracting) return OrbitStability::stable;
    return OrbitStability::non_hyperbolic;
}

namespace {

struct Candidate {
    OrbitRecord orbit;
    long trajectory;
};

// One trajectory of the recurrence search; nullopt when nothing validates.
std::optional<OrbitRecord> search_from(
    const VectorField& field, const Box& bounds, const Vec& x0,
    const OrbitSearchSettings& settings,
    const std::vector<FixedPointRecord>& fixed_points) {
    const double diam = bounds.diameter();
    IntegrationSettings integ = settings.integration;

    // transient, then bail out if we have settled onto a known equilibrium
    const auto transient = flow(field, x0, settings.max_period / 2.0, integ, &bounds);
    if (transient.reason != TerminalReason::reached_t_end) return std::nullopt;
    const Vec p = transient.state;
    for (const auto& fp : fixed_points)
        if ((p - fp.location).norm() <= 10.0 * settings.fixed_point_tol)
            return std::nullopt;

    const Vec v = field(p);
    if (v.norm() < 1e-12) return std::nullopt; // resting on an unknown equilibrium

    // same-direction returns to the section through p
    integ.t_end = settings.max_period;
    const auto crossings = detect_crossings(field, p, {p, v}, integ, 64, &bounds);
    const CrossingEvent* hit = nullptr;
    for (const auto& ev : crossings) {
        if (ev.direction != +1) continue;
        if ((ev.state - p).norm() <= 1e-4 * diam) {
            hit = &ev;
            break;
        }
    }
    if (!hit) return std::nullopt;

    // refine the period with one more pass from the returned point
    const Vec anchor = hit->state;
    const Vec va = field(anchor);
    if (va.norm() < 1e-12) return std::nullopt;
    integ.t_end = std::min(settings.max_period, 1.5 * hit->t + 1.0);
    const auto refined =
        detect_crossings(field, anchor, {anchor, va}, integ, 8, &bounds);
    double period = 0.0;
    for (const auto& ev : refined) {
        if (ev.direction == +1) {
            period = ev.t;
            break;
        }
    }
    if (!(period > 0.0) || period > settings.max_period) return std::nullopt;

    // closure check and uniform-time sampling over one period
    const int n_samples = std::max(64, settings.n_samples);
    std::vector<Vec> points;
    points.reserve(static_cast<size_t>(n_samples));
    points.push_back(anchor);
    int next_sample = 1;
    integ.t_end = period;
    const detail::Rhs rhs = [&field](const Vec& y) { return field(y); };
    const auto sampler = [&](double, double t1, const Vec&,
                             const detail::DenseOut& dense) {
        while (next_sample < n_samples &&
               period * next_sample / n_samples <= t1) {
            points.push_back(dense.at(period * next_sample / n_samples));
            ++next_sample;
        }
        return detail::StepAction::proceed;
    };
    const auto closing = detail::integrate_core(rhs, anchor, integ, nullptr, sampler);
    if (closing.reason != TerminalReason::reached_t_end) return std::nullopt;
    const double closure = (closing.state - anchor).norm();
    if (closure > 1e-5 * diam) return std::nullopt;

    OrbitRecord orbit;
    orbit.points = std::move(points);
    orbit.period = period;
    orbit.closure_error = closure;
    orbit.multipliers = eigen(monodromy(field, anchor, period, settings.integration)).values;
    try {
        orbit.is_stable = floquet_stability(orbit.multipliers) == OrbitStability::stable;
    } catch (const InvalidOrbitError&) {
        return std::nullopt; // no trivial multiplier: a converging spiral, not an orbit
    }
    return orbit;
}

std::vector<OrbitRecord> dedup(std::vector<std::optional<OrbitRecord>>& found,
                               double diam) {
    std::vector<OrbitRecord> out;
    for (auto& cand : found) {
        if (!cand) continue;
        bool merged = false;
        for (auto& kept : out) {
            if (closed_polyline_hausdorff(kept.points, cand->points) <= 1e-3 * diam) {
                if (cand->closure_error < kept.closure_error) kept = std::move(*cand);
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(*cand));
    }
    return out;
}

std::vector<Vec> draw_starts(const Box& bounds, int n, std::uint64_t seed) {
    // one sequential stream: the starts for trajectory i do not depend on
    // how many trajectories are requested
    Rng rng(seed);
    std::vector<Vec> starts(static_cast<size_t>(n));
    for (auto& s : starts) s = rng.point_in(bounds);
    return starts;
}

} // namespace

std::vector<OrbitRecord> find_periodic_orbits(
    const VectorField& field, const Box& bounds,
    const OrbitSearchSettings& settings,
    const std::vector<FixedPointRecord>& known_fixed_points) {
    bounds.validate();
    if (bounds.dim() != field.dimension())
        throw DimensionError("bounds arity does not match field dimension");

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(settings.timeout_seconds);
    const auto starts =
        draw_starts(bounds, settings.n_trajectories, settings.seed);

    std::vector<std::optional<OrbitRecord>> found(starts.size());
    parallel_for(static_cast<long>(starts.size()), settings.threads, [&](long i) {
        // timeout is only consulted between trajectories; work that has
        // started runs to completion
        if (std::chrono::steady_clock::now() >= deadline) return;
        try {
            found[static_cast<size_t>(i)] = search_from(
                field, bounds, starts[static_cast<size_t>(i)], settings,
                known_fixed_points);
        } catch (const Error&) {
            // integration failure on this trajectory: skip it
        }
    });

    return dedup(found, bounds.diameter());
}

std::vector<OrbitRecord> find_periodic_orbits(const VectorField& field,
                                              const Box& bounds,
                                              const OrbitSearchSettings& settings) {
    FixedPointSearchSettings fp_settings;
    fp_settings.seed = derive_seed(settings.seed, 0x0f1d);
    fp_settings.tol = settings.fixed_point_tol;
    fp_settings.threads = settings.threads;
    const auto fps = find_fixed_points(field, bounds, fp_settings);
    return find_periodic_orbits(field, bounds, settings, fps);
}

bool has_periodic_orbits(const VectorField& field, const Box& bounds,
                         const OrbitSearchSettings& settings) {
    bounds.validate();
    FixedPointSearchSettings fp_settings;
    fp_settings.seed = derive_seed(settings.seed, 0x0f1d);
    fp_settings.tol = settings.fixed_point_tol;
    fp_settings.threads = settings.threads;
    const auto fps = find_fixed_points(field, bounds, fp_settings);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(settings.timeout_seconds);
    const auto starts =
        draw_starts(bounds, settings.n_trajectories, settings.seed);
    for (const auto& x0 : starts) {
        if (std::chrono::steady_clock::now() >= deadline) break;
        try {
            if (search_from(field, bounds, x0, settings, fps)) return true;
        } catch (const Error&) {
        }
    }
    return false;
}

} // namespace dynclass
