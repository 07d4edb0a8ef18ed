#pragma once

#include <cstdint>
#include <vector>

#include "dynclass/core.hpp"
#include "dynclass/vectorfield.hpp"

namespace dynclass {

enum class FixedPointType {
    STABLE_NODE,    // all real parts negative, no imaginary parts
    UNSTABLE_NODE,  // all real parts positive, no imaginary parts
    SADDLE,         // mixed signs of real parts
    STABLE_FOCUS,   // negative real parts with imaginary components
    UNSTABLE_FOCUS, // positive real parts with imaginary components
    CENTER,         // purely imaginary spectrum
    NON_HYPERBOLIC, // some eigenvalue on the imaginary axis
};

const char* to_string(FixedPointType type);

struct FixedPointRecord {
    Vec location;
    CVec eigenvalues; // ordered as numerics::eigen orders them
    FixedPointType type = FixedPointType::NON_HYPERBOLIC;
    double residual = 0.0; // ||F(location)||
};

struct FixedPointSearchSettings {
    int n_starts = 100;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Classify a spectrum. Real parts within hyper_tol * max(1, max |lambda|)
/// of zero count as zero; the same scale decides whether imaginary parts are
/// present. Total: every list maps to exactly one type.
FixedPointType classify_eigenvalues(const CVec& eigenvalues,
                                    double hyper_tol = 1e-8);

bool is_hyperbolic(const CVec& eigenvalues, double hyper_tol = 1e-8);
bool is_hyperbolic(const FixedPointRecord& record, double hyper_tol = 1e-8);

/// Build the record for a point assumed to be (near) a fixed point; a large
/// residual is recorded rather than rejected.
FixedPointRecord classify_at(const VectorField& field, const Vec& x);

/// Multi-start damped Newton search within bounds. Converged roots within
/// the bounds expanded by 1% per axis are kept, merged when within
/// 1e-6 * axis span on every axis, and returned sorted lexicographically by
/// location. Singular starts are abandoned silently; an empty result is valid.
std::vector<FixedPointRecord> find_fixed_points(
    const VectorField& field, const Box& bounds,
    const FixedPointSearchSettings& settings = {});

} // namespace dynclass
