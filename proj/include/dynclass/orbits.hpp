#pragma once

#include <cstdint>
#include <vector>

#include "dynclass/fixedpoints.hpp"
#include "dynclass/odeint.hpp"

namespace dynclass {

/// A validated periodic orbit. Points are sampled at uniform times over one
/// period; the list closes on itself within 1e-5 of the bounds diameter.
struct OrbitRecord {
    std::vector<Vec> points;
    double period = 0.0;
    CVec multipliers;        // Floquet multipliers, eigen() ordering
    bool is_stable = false;  // all non-trivial multiplier moduli < 1 - 1e-6
    double closure_error = 0.0;
};

enum class OrbitStability { stable, unstable, non_hyperbolic };

struct OrbitSearchSettings {
    int n_trajectories = 50;
    double max_period = 100.0;
    std::uint64_t seed = 0;
    double timeout_seconds = 10.0;
    double fixed_point_tol = 1e-8;
    int n_samples = 512; // points stored per orbit
    int threads = 1;
    IntegrationSettings integration{};
};

/// Stability from the multiplier set. One multiplier must lie within 1e-2
/// of 1 (the trivial multiplier along the flow); classification uses the
/// remaining ones.
OrbitStability floquet_stability(const CVec& multipliers);

/// Recurrence search: integrate seeded trajectories past a transient of
/// max_period/2, place a Poincare section through each endpoint with the
/// local flow direction as normal, and accept a period when a same-direction
/// crossing returns to the section point. Candidates are refined by a second
/// section pass, validated for closure, characterised by Floquet multipliers,
/// and deduplicated. Trajectories that fail to integrate are skipped; hitting
/// the wall-clock timeout returns whatever has been found.
///
/// known_fixed_points lets the search skip trajectories that have settled
/// onto an equilibrium; pass the result of find_fixed_points when available,
/// otherwise it is computed internally.
std::vector<OrbitRecord> find_periodic_orbits(
    const VectorField& field, const Box& bounds,
    const OrbitSearchSettings& settings,
    const std::vector<FixedPointRecord>& known_fixed_points);

std::vector<OrbitRecord> find_periodic_orbits(
    const VectorField& field, const Box& bounds,
    const OrbitSearchSettings& settings = {});

/// True as soon as one validated orbit is found (short-circuits).
bool has_periodic_orbits(const VectorField& field, const Box& bounds,
                         const OrbitSearchSettings& settings = {});

} // namespace dynclass
