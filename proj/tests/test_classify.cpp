#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynclass/models.hpp"
#include "dynclass/report.hpp"

using namespace dynclass;

namespace {

const Box square2(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}});
const Box vdp_box(Vec{{-3.0, -3.0}}, Vec{{3.0, 3.0}});
const Box lorenz_box(Vec{{-20.0, -30.0, 0.0}}, Vec{{20.0, 30.0, 50.0}});

} // namespace

TEST_CASE("gradient paraboloid classifies as GRADIENT") {
    const ClassificationReport rep = classify_system(builtin("gradient2d"), square2);
    CHECK(rep.system_class == SystemClass::GRADIENT);
    CHECK(rep.jacobian_symmetry < 1e-10);
    CHECK(rep.curl_gradient_ratio < 1e-10);
    CHECK(rep.confidence >= 0.9);
    REQUIRE(rep.fixed_points.size() == 1);
    CHECK(rep.fixed_points[0].type == FixedPointType::STABLE_NODE);
    CHECK(rep.fixed_points[0].location.norm() < 1e-8);
    CHECK(rep.periodic_orbits.empty());
    CHECK(rep.details.at("fates.to_fixed_point") == "20");
    CHECK(rep.details.at("fates.wandering") == "0");
}

TEST_CASE("damped rotation classifies as MORSE_SMALE") {
    const ClassificationReport rep = classify_system(builtin("rotation"), square2);
    CHECK(rep.system_class == SystemClass::MORSE_SMALE);
    // constant Jacobian [[-1,1],[-1,-1]] has relative asymmetry sqrt(2)/2
    CHECK(rep.jacobian_symmetry == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(rep.periodic_orbits.empty());
    CHECK(get_system_class(builtin("rotation"), square2) ==
          SystemClass::MORSE_SMALE);
}

TEST_CASE("van der Pol classifies as MORSE_SMALE with one stable orbit") {
    const ClassificationReport rep = classify_system(builtin("vanderpol"), vdp_box);
    CHECK(rep.system_class == SystemClass::MORSE_SMALE);
    REQUIRE(rep.periodic_orbits.size() == 1);
    CHECK(rep.periodic_orbits[0].is_stable);
    REQUIRE(rep.fixed_points.size() == 1);
    CHECK(rep.fixed_points[0].type == FixedPointType::UNSTABLE_FOCUS);
    CHECK(std::stoi(rep.details.at("fates.to_orbit")) > 0);
    CHECK(rep.details.at("fates.wandering") == "0");
}

TEST_CASE("Lorenz classifies as GENERAL through wandering fates") {
    const ClassificationReport rep = quick_classify(builtin("lorenz"), lorenz_box);
    CHECK(rep.system_class == SystemClass::GENERAL);
    CHECK(std::stoi(rep.details.at("fates.wandering")) > 0);
    CHECK(rep.confidence <= 0.8);
}

TEST_CASE("trajectory fates census") {
    const auto fps = find_fixed_points(builtin("gradient2d"), square2);
    const FateCounts counts =
        trajectory_fates(builtin("gradient2d"), square2, fps, {});
    CHECK(counts.to_fixed_point == 20);
    CHECK(counts.wandering == 0);
    CHECK(counts.escaped == 0);
    CHECK(counts.to_orbit == 0);
}

TEST_CASE("quick_classify matches the full pipeline on clean cases") {
    CHECK(quick_classify(builtin("gradient2d"), square2).system_class ==
          SystemClass::GRADIENT);
    const ClassificationReport rep = quick_classify(builtin("vanderpol"), vdp_box);
    // manifold check skipped, but with no saddles the transversality rule
    // still fires vacuously
    CHECK(rep.system_class == SystemClass::MORSE_SMALE);
    CHECK(rep.confidence <= 0.8);
}

TEST_CASE("classification predicates and their monotonicity") {
    ClassificationReport rep;
    rep.system_class = SystemClass::GRADIENT;
    CHECK(is_gradient(rep));
    CHECK(is_gradient_like(rep));
    CHECK(is_morse_smale(rep));
    CHECK_FALSE(allows_periodic_orbits(rep));

    rep.system_class = SystemClass::MORSE_SMALE;
    CHECK_FALSE(is_gradient(rep));
    CHECK_FALSE(is_gradient_like(rep));
    CHECK(is_morse_smale(rep));
    CHECK(allows_periodic_orbits(rep));

    rep.system_class = SystemClass::GENERAL;
    CHECK_FALSE(is_morse_smale(rep));
    CHECK(allows_periodic_orbits(rep));

    for (const SystemClass cls :
         {SystemClass::GRADIENT, SystemClass::GRADIENT_LIKE, SystemClass::MORSE_SMALE,
          SystemClass::STRUCTURALLY_STABLE, SystemClass::GENERAL}) {
        rep.system_class = cls;
        if (is_gradient(rep)) CHECK(is_gradient_like(rep));
        if (is_gradient_like(rep)) CHECK(is_morse_smale(rep));
    }
}

TEST_CASE("landscape interpretation per class") {
    ClassificationReport rep;
    rep.system_class = SystemClass::GRADIENT;
    auto land = landscape_interpretation(rep);
    CHECK(land.can_represent);
    CHECK(land.landscape_type == "potential");
    CHECK(land.description ==
          "True potential landscape; elevation = -log(probability)");

    rep.system_class = SystemClass::GRADIENT_LIKE;
    land = landscape_interpretation(rep);
    CHECK(land.can_represent);
    CHECK(land.landscape_type == "quasi-potential");
    CHECK(land.description == "Quasi-potential exists; landscape approximation valid");

    rep.system_class = SystemClass::MORSE_SMALE;
    land = landscape_interpretation(rep);
    CHECK(land.landscape_type == "local");
    CHECK(land.description ==
          "Local potentials around attractors; limit cycles as valleys");

    rep.system_class = SystemClass::STRUCTURALLY_STABLE;
    CHECK(landscape_interpretation(rep).description ==
          "Local potentials around attractors; limit cycles as valleys");

    rep.system_class = SystemClass::GENERAL;
    land = landscape_interpretation(rep);
    CHECK_FALSE(land.can_represent);
    CHECK(land.landscape_type == "none");
    CHECK(land.description == "Landscape metaphor breaks down; curl dynamics dominate");
}

TEST_CASE("reports are deterministic across runs and thread counts") {
    ClassifySettings serial;
    serial.seed = 3;
    ClassifySettings threaded = serial;
    threaded.threads = 4;

    const auto a = classify_system(builtin("vanderpol"), vdp_box, serial);
    const auto b = classify_system(builtin("vanderpol"), vdp_box, serial);
    const auto c = classify_system(builtin("vanderpol"), vdp_box, threaded);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(to_json(a).dump() == to_json(c).dump());
}

TEST_CASE("class is invariant under positive rescaling of the field") {
    struct Case {
        const char* name;
        Box bounds;
    };
    const Case cases[] = {
        {"gradient2d", square2},
        {"rotation", square2},
        {"toggle", Box(Vec{{0.0, 0.0}}, Vec{{2.0, 2.0}})},
    };
    for (const auto& c : cases) {
        const SystemClass base = classify_system(builtin(c.name), c.bounds).system_class;
        // the symmetry and curl statistics are scale-free by construction;
        // scales are kept moderate so the fixed fate horizon still resolves
        // convergence of the slowed dynamics
        for (const double scale : {0.75, 3.0}) {
            const std::string name = c.name;
            const VectorField scaled = make_field(
                [name, scale](const auto& x) {
                    using T = std::decay_t<decltype(x[0])>;
                    const VecT<T> v = [&] {
                        if (name == "gradient2d") return models::Gradient2D{}(x);
                        if (name == "rotation") return models::DampedRotation{}(x);
                        return models::ToggleSwitch{}(x);
                    }();
                    return (scale * v).eval();
                },
                2);
            CHECK(classify_system(scaled, c.bounds).system_class == base);
        }
    }
}

TEST_CASE("reports with orbits are never gradient-like") {
    const ClassificationReport rep = classify_system(builtin("vanderpol"), vdp_box);
    REQUIRE(!rep.periodic_orbits.empty());
    CHECK_FALSE(is_gradient_like(rep));
}

TEST_CASE("empty bounds are rejected") {
    CHECK_THROWS_AS(classify_system(builtin("gradient2d"),
                                    Box(Vec{{2.0, 2.0}}, Vec{{-2.0, -2.0}})),
                    DimensionError);
    CHECK_THROWS_AS(classify_system(builtin("lorenz"), square2), DimensionError);
}

TEST_CASE("details expose counts, thresholds and the decision rule") {
    const ClassificationReport rep = classify_system(builtin("gradient2d"), square2);
    CHECK(rep.details.at("decision_rule") == "b");
    CHECK(rep.details.at("counts.fixed_points") == "1");
    CHECK(rep.details.at("counts.stable_fixed_points") == "1");
    CHECK(rep.details.at("region_curl_free") == "true");
    CHECK(rep.details.at("thresholds.gradient_like_sym") ==
          std::string("0.10000000000000001"));
}
