#include "dynclass/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dynclass/numerics.hpp"
#include "dynclass/parallel.hpp"
#include "dynclass/polyline.hpp"
#include "dynclass/rng.hpp"
#include "dynclass/structure.hpp"

namespace dynclass {

const char* to_string(SystemClass cls) {
    switch (cls) {
        case SystemClass::GRADIENT: return "GRADIENT";
        case SystemClass::GRADIENT_LIKE: return "GRADIENT_LIKE";
        case SystemClass::MORSE_SMALE: return "MORSE_SMALE";
        case SystemClass::STRUCTURALLY_STABLE: return "STRUCTURALLY_STABLE";
        case SystemClass::GENERAL: return "GENERAL";
    }
    return "UNKNOWN";
}

namespace {

// stage tags for substream seeding
constexpr std::uint64_t kSampleStage = 1;
constexpr std::uint64_t kFixedPointStage = 2;
constexpr std::uint64_t kOrbitStage = 3;
constexpr std::uint64_t kFateStage = 4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double curl_from_jacobian(const Mat& j) {
    const Eigen::Index n = j.rows();
    if (n == 1) return 0.0;
    if (n == 2) return std::abs(j(1, 0) - j(0, 1));
    if (n == 3) {
        const Vec curl{{j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)}};
        return curl.norm();
    }
    return symmetry_error(j);
}

struct SampleStats {
    double mean_symmetry = 0.0;
    double mean_ratio = 0.0;
    double max_curl = 0.0;
    int symmetry_used = 0;
    int ratio_used = 0;
};

SampleStats sample_statistics(const VectorField& field, const Box& bounds,
                              const ClassifySettings& settings,
                              std::vector<std::string>& warnings) {
    SampleStats stats;
    Rng rng(derive_seed(settings.seed, kSampleStage));
    double sym_sum = 0.0, ratio_sum = 0.0;
    for (int i = 0; i < settings.n_samples; ++i) {
        const Vec x = rng.point_in(bounds);
        try {
            const Mat j = jacobian(field, x);
            sym_sum += relative_symmetry_error(j);
            ++stats.symmetry_used;
            const double curl = curl_from_jacobian(j);
            stats.max_curl = std::max(stats.max_curl, curl);
            const double speed = field(x).norm();
            if (speed >= 1e-12) {
                ratio_sum += curl / speed;
                ++stats.ratio_used;
            }
        } catch (const Error& e) {
            warnings.push_back(std::string("sample failed: ") + e.what());
        }
    }
    if (stats.symmetry_used > 0) stats.mean_symmetry = sym_sum / stats.symmetry_used;
    if (stats.ratio_used > 0) stats.mean_ratio = ratio_sum / stats.ratio_used;
    return stats;
}

FateCounts fates_impl(const VectorField& field, const Box& bounds,
                      const std::vector<FixedPointRecord>& fixed_points,
                      const std::vector<OrbitRecord>& orbits,
                      const ClassifySettings& settings,
                      std::vector<std::string>* warnings) {
    bounds.validate();
    double max_period = 0.0;
    for (const auto& orbit : orbits) max_period = std::max(max_period, orbit.period);
    const double horizon = std::max(50.0, 10.0 * max_period);
    const double diam = bounds.diameter();

    Rng rng(derive_seed(settings.seed, kFateStage));
    std::vector<Vec> starts(static_cast<size_t>(settings.n_fate_trajectories));
    for (auto& s : starts) s = rng.point_in(bounds);

    enum class Fate { fixed_point, orbit, escaped, wandering, failed };
    std::vector<Fate> fates(starts.size(), Fate::failed);
    std::vector<std::string> local_warnings(starts.size());

    parallel_for(static_cast<long>(starts.size()), settings.threads, [&](long i) {
        const auto idx = static_cast<size_t>(i);
        try {
            IntegrationSettings integ;
            const auto end = flow(field, starts[idx], horizon, integ, &bounds);

            double fp_dist = std::numeric_limits<double>::infinity();
            for (const auto& fp : fixed_points)
                fp_dist = std::min(fp_dist, (end.state - fp.location).norm());
            if (fp_dist <= 1e-4 * diam) {
                fates[idx] = Fate::fixed_point;
                return;
            }
            double orbit_dist = std::numeric_limits<double>::infinity();
            for (const auto& orbit : orbits)
                orbit_dist = std::min(
                    orbit_dist, point_closed_polyline_distance(end.state, orbit.points));
            if (orbit_dist <= 1e-2 * diam) {
                fates[idx] = Fate::orbit;
                return;
            }
            if (end.reason == TerminalReason::left_bounds) {
                fates[idx] = Fate::escaped;
                return;
            }
            fates[idx] = Fate::wandering;
        } catch (const Error& e) {
            local_warnings[idx] = std::string("fate trajectory failed: ") + e.what();
        }
    });

    FateCounts counts;
    for (size_t i = 0; i < fates.size(); ++i) {
        switch (fates[i]) {
            case Fate::fixed_point: ++counts.to_fixed_point; break;
            case Fate::orbit: ++counts.to_orbit; break;
            case Fate::escaped: ++counts.escaped; break;
            case Fate::wandering: ++counts.wandering; break;
            case Fate::failed:
                if (warnings && !local_warnings[i].empty())
                    warnings->push_back(local_warnings[i]);
                break;
        }
    }
    return counts;
}

double log_margin(double stat, double threshold) {
    const double s = std::max(stat, 1e-30);
    const double t = std::max(threshold, 1e-30);
    return std::clamp(std::abs(std::log10(s) - std::log10(t)), 0.5, 1.0);
}

} // namespace

FateCounts trajectory_fates(const VectorField& field, const Box& bounds,
                            const std::vector<FixedPointRecord>& fixed_points,
                            const std::vector<OrbitRecord>& orbits,
                            const ClassifySettings& settings) {
    return fates_impl(field, bounds, fixed_points, orbits, settings, nullptr);
}

ClassificationReport classify_system(const VectorField& field, const Box& bounds,
                                     const ClassifySettings& settings) {
    bounds.validate();
    if (bounds.dim() != field.dimension())
        throw DimensionError("bounds arity does not match field dimension");

    ClassificationReport report;
    std::vector<std::string> warnings;
    const auto& thresholds = settings.thresholds;

    // (1) region statistics
    const SampleStats stats = sample_statistics(field, bounds, settings, warnings);
    report.jacobian_symmetry = stats.mean_symmetry;
    report.curl_gradient_ratio = stats.mean_ratio;
    const bool region_curl_free = stats.symmetry_used == settings.n_samples &&
                                  stats.max_curl <= thresholds.gradient_curl;

    // (2) fixed points
    try {
        FixedPointSearchSettings fp_settings;
        fp_settings.n_starts = settings.n_starts;
        fp_settings.seed = derive_seed(settings.seed, kFixedPointStage);
        fp_settings.threads = settings.threads;
        report.fixed_points = find_fixed_points(field, bounds, fp_settings);
    } catch (const Error& e) {
        warnings.push_back(std::string("fixed point search failed: ") + e.what());
    }

    // (3) periodic orbits
    try {
        OrbitSearchSettings orbit_settings;
        orbit_settings.n_trajectories = settings.orbit_trajectories;
        orbit_settings.max_period = settings.orbit_max_period;
        orbit_settings.seed = derive_seed(settings.seed, kOrbitStage);
        orbit_settings.timeout_seconds = settings.orbit_timeout;
        orbit_settings.threads = settings.threads;
        report.periodic_orbits =
            find_periodic_orbits(field, bounds, orbit_settings, report.fixed_points);
    } catch (const Error& e) {
        warnings.push_back(std::string("orbit search failed: ") + e.what());
    }

    // (4) trajectory fates
    const FateCounts fates = fates_impl(field, bounds, report.fixed_points,
                                        report.periodic_orbits, settings, &warnings);

    // (5) manifold transversality (2D only: traced branches are curves, and
    // curve-curve intersections are meaningful only in the plane)
    std::vector<FixedPointRecord> saddles;
    for (const auto& fp : report.fixed_points)
        if (fp.type == FixedPointType::SADDLE) saddles.push_back(fp);

    TransversalityVerdict transversality;
    if (saddles.empty()) {
        transversality.verdict = TransversalityOutcome::no_intersections; // vacuous
        report.has_transverse_manifolds = Tristate::yes;
    } else if (!settings.check_manifolds || field.dimension() != 2) {
        transversality.verdict = TransversalityOutcome::not_checked;
        report.has_transverse_manifolds = Tristate::unknown;
    } else {
        try {
            transversality = check_transversality(field, saddles, bounds);
            report.has_transverse_manifolds =
                transversality.verdict == TransversalityOutcome::tangency
                    ? Tristate::no
                    : Tristate::yes;
        } catch (const Error& e) {
            warnings.push_back(std::string("transversality check failed: ") + e.what());
            transversality.verdict = TransversalityOutcome::not_checked;
            report.has_transverse_manifolds = Tristate::unknown;
        }
    }

    // (6) decision rules, first match wins
    bool any_degenerate_fp = false;
    for (const auto& fp : report.fixed_points)
        if (fp.type == FixedPointType::NON_HYPERBOLIC ||
            fp.type == FixedPointType::CENTER)
            any_degenerate_fp = true;
    bool any_nonhyperbolic_orbit = false;
    for (const auto& orbit : report.periodic_orbits) {
        try {
            if (floquet_stability(orbit.multipliers) == OrbitStability::non_hyperbolic)
                any_nonhyperbolic_orbit = true;
        } catch (const Error& e) {
            warnings.push_back(std::string("orbit stability check failed: ") + e.what());
        }
    }
    const bool no_orbits = report.periodic_orbits.empty();

    std::string rule;
    if (any_degenerate_fp || any_nonhyperbolic_orbit || fates.wandering > 0) {
        report.system_class = SystemClass::GENERAL;
        rule = "a";
    } else if (no_orbits && report.jacobian_symmetry < thresholds.gradient_sym &&
               region_curl_free) {
        report.system_class = SystemClass::GRADIENT;
        rule = "b";
    } else if (no_orbits && report.jacobian_symmetry < thresholds.gradient_like_sym) {
        report.system_class = SystemClass::GRADIENT_LIKE;
        rule = "c";
    } else if (saddles.empty() ||
               transversality.verdict == TransversalityOutcome::transverse ||
               transversality.verdict == TransversalityOutcome::no_intersections) {
        report.system_class = SystemClass::MORSE_SMALE;
        rule = "d";
    } else if (transversality.verdict == TransversalityOutcome::not_checked) {
        report.system_class = SystemClass::STRUCTURALLY_STABLE;
        rule = "e";
    } else {
        report.system_class = SystemClass::GENERAL; // tangency
        rule = "f";
    }

    // (7) confidence: margin of each measured statistic from the threshold
    // it was judged against, in decades, clamped to [0.5, 1]
    double confidence = 1.0;
    switch (report.system_class) {
        case SystemClass::GRADIENT:
            confidence *= log_margin(report.jacobian_symmetry, thresholds.gradient_sym);
            confidence *= log_margin(stats.max_curl, thresholds.gradient_curl);
            break;
        case SystemClass::GRADIENT_LIKE:
            confidence *= std::min(
                log_margin(report.jacobian_symmetry, thresholds.gradient_sym),
                log_margin(report.jacobian_symmetry, thresholds.gradient_like_sym));
            break;
        default:
            confidence *=
                log_margin(report.jacobian_symmetry, thresholds.gradient_like_sym);
            break;
    }
    if (report.has_transverse_manifolds == Tristate::unknown) confidence *= 0.9;
    if (!warnings.empty()) {
        confidence *= std::pow(0.8, static_cast<double>(warnings.size()));
        confidence = std::min(confidence, 0.5);
    }
    report.confidence = std::max(confidence, 0.05);

    // (8) details
    auto& d = report.details;
    d["seed"] = std::to_string(settings.seed);
    d["n_samples"] = std::to_string(settings.n_samples);
    d["n_starts"] = std::to_string(settings.n_starts);
    d["orbit_timeout"] = fmt(settings.orbit_timeout);
    d["check_manifolds"] = settings.check_manifolds ? "true" : "false";
    d["decision_rule"] = rule;
    d["samples.symmetry_used"] = std::to_string(stats.symmetry_used);
    d["samples.ratio_used"] = std::to_string(stats.ratio_used);
    d["samples.max_curl"] = fmt(stats.max_curl);
    d["region_curl_free"] = region_curl_free ? "true" : "false";
    d["thresholds.gradient_sym"] = fmt(thresholds.gradient_sym);
    d["thresholds.gradient_curl"] = fmt(thresholds.gradient_curl);
    d["thresholds.gradient_like_sym"] = fmt(thresholds.gradient_like_sym);
    d["thresholds.hyper_tol"] = fmt(thresholds.hyper_tol);
    d["fates.to_fixed_point"] = std::to_string(fates.to_fixed_point);
    d["fates.to_orbit"] = std::to_string(fates.to_orbit);
    d["fates.escaped"] = std::to_string(fates.escaped);
    d["fates.wandering"] = std::to_string(fates.wandering);
    d["counts.fixed_points"] = std::to_string(report.fixed_points.size());
    d["counts.saddles"] = std::to_string(saddles.size());
    int stable_states = 0;
    for (const auto& fp : report.fixed_points)
        if (fp.type == FixedPointType::STABLE_NODE ||
            fp.type == FixedPointType::STABLE_FOCUS)
            ++stable_states;
    d["counts.stable_fixed_points"] = std::to_string(stable_states);
    d["counts.periodic_orbits"] = std::to_string(report.periodic_orbits.size());
    d["transversality.verdict"] = to_string(transversality.verdict);
    d["transversality.checked_pairs"] = std::to_string(transversality.checked_pairs);
    if (transversality.min_angle)
        d["transversality.min_angle_rad"] = fmt(*transversality.min_angle);
    if (!warnings.empty()) {
        std::string joined;
        for (const auto& w : warnings) {
            if (!joined.empty()) joined += " | ";
            joined += w;
        }
        d["warnings"] = joined;
    }
    return report;
}

ClassificationReport quick_classify(const VectorField& field, const Box& bounds) {
    return quick_classify(field, bounds, 0, 1);
}

ClassificationReport quick_classify(const VectorField& field, const Box& bounds,
                                    std::uint64_t seed, int threads) {
    ClassifySettings settings;
    settings.n_samples = 20;
    settings.n_starts = 25;
    settings.check_manifolds = false;
    settings.orbit_timeout = 2.0;
    settings.seed = seed;
    settings.threads = threads;
    ClassificationReport report = classify_system(field, bounds, settings);
    report.confidence = std::min(report.confidence, 0.8);
    return report;
}

SystemClass get_system_class(const VectorField& field, const Box& bounds) {
    return classify_system(field, bounds).system_class;
}

bool is_gradient(const ClassificationReport& report) {
    return report.system_class == SystemClass::GRADIENT;
}

bool is_gradient_like(const ClassificationReport& report) {
    return report.system_class == SystemClass::GRADIENT ||
           report.system_class == SystemClass::GRADIENT_LIKE;
}

bool is_morse_smale(const ClassificationReport& report) {
    return is_gradient_like(report) ||
           report.system_class == SystemClass::MORSE_SMALE;
}

bool allows_periodic_orbits(const ClassificationReport& report) {
    return !is_gradient_like(report);
}

LandscapeInterpretation landscape_interpretation(const ClassificationReport& report) {
    switch (report.system_class) {
        case SystemClass::GRADIENT:
            return {true, "potential",
                    "True potential landscape; elevation = -log(probability)"};
        case SystemClass::GRADIENT_LIKE:
            return {true, "quasi-potential",
                    "Quasi-potential exists; landscape approximation valid"};
        case SystemClass::MORSE_SMALE:
        case SystemClass::STRUCTURALLY_STABLE:
            return {true, "local",
                    "Local potentials around attractors; limit cycles as valleys"};
        case SystemClass::GENERAL:
            return {false, "none",
                    "Landscape metaphor breaks down; curl dynamics dominate"};
    }
    return {false, "none", ""};
}

} // namespace dynclass
