#pragma once

#include <map>
#include <string>

#include "dynclass/manifolds.hpp"
#include "dynclass/orbits.hpp"

namespace dynclass {

/// Structural classes, most restrictive first.
enum class SystemClass {
    GRADIENT,
    GRADIENT_LIKE,
    MORSE_SMALE,
    STRUCTURALLY_STABLE,
    GENERAL,
};

const char* to_string(SystemClass cls);

enum class Tristate { yes, no, unknown };

struct ClassifyThresholds {
    double gradient_sym = 1e-8;      // mean relative symmetry error, GRADIENT
    double gradient_curl = 1e-8;     // pointwise curl bound for the region test
    double gradient_like_sym = 0.1;  // "nearly symmetric" cut for GRADIENT_LIKE
    double hyper_tol = 1e-8;
};

struct ClassifySettings {
    int n_samples = 100;  // points for Jacobian/curl statistics
    int n_starts = 100;   // fixed-point search starts
    bool check_manifolds = true;
    double orbit_timeout = 10.0; // seconds
    std::uint64_t seed = 0;
    ClassifyThresholds thresholds{};
    int threads = 1;
    int n_fate_trajectories = 20;
    int orbit_trajectories = 50;
    double orbit_max_period = 100.0;
};

struct FateCounts {
    int to_fixed_point = 0;
    int to_orbit = 0;
    int escaped = 0;
    int wandering = 0;
};

struct ClassificationReport {
    SystemClass system_class = SystemClass::GENERAL;
    std::vector<FixedPointRecord> fixed_points;
    std::vector<OrbitRecord> periodic_orbits;
    double jacobian_symmetry = 0.0;    // mean relative symmetry error
    double curl_gradient_ratio = 0.0;  // mean ||curl|| / ||F||
    Tristate has_transverse_manifolds = Tristate::unknown;
    double confidence = 0.0;
    std::map<std::string, std::string> details;
};

/// Full pipeline: sample symmetry/curl statistics, find fixed points and
/// periodic orbits, analyse trajectory fates, check manifold transversality
/// where possible, then walk the decision rules from GRADIENT down to
/// GENERAL. Deterministic for a fixed seed regardless of thread count.
ClassificationReport classify_system(const VectorField& field, const Box& bounds,
                                     const ClassifySettings& settings = {});

/// Endpoint census of seeded trajectories: settled at a fixed point, on an
/// orbit, escaped the expanded bounds, or still wandering. Wandering fates
/// are the operational evidence of recurrence beyond fixed points and orbits.
FateCounts trajectory_fates(const VectorField& field, const Box& bounds,
                            const std::vector<FixedPointRecord>& fixed_points,
                            const std::vector<OrbitRecord>& orbits,
                            const ClassifySettings& settings = {});

/// Reduced budgets, no manifold analysis, confidence capped at 0.8.
ClassificationReport quick_classify(const VectorField& field, const Box& bounds);
ClassificationReport quick_classify(const VectorField& field, const Box& bounds,
                                    std::uint64_t seed, int threads);

SystemClass get_system_class(const VectorField& field, const Box& bounds);

bool is_gradient(const ClassificationReport& report);
bool is_gradient_like(const ClassificationReport& report);
bool is_morse_smale(const ClassificationReport& report);
bool allows_periodic_orbits(const ClassificationReport& report);

struct LandscapeInterpretation {
    bool can_represent = false;
    std::string landscape_type;
    std::string description;
};

LandscapeInterpretation landscape_interpretation(const ClassificationReport& report);

} // namespace dynclass
