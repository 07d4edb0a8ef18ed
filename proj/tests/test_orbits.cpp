#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynclass/models.hpp"
#include "dynclass/numerics.hpp"
#include "dynclass/orbits.hpp"
#include "test_util.hpp"

using namespace dynclass;

namespace {

CVec multipliers(std::initializer_list<std::complex<double>> values) {
    CVec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const auto& z : values) v[i++] = z;
    return v;
}

const Box vdp_bounds(Vec{{-3.0, -3.0}}, Vec{{3.0, 3.0}});

} // namespace

TEST_CASE("floquet stability classification") {
    CHECK(floquet_stability(multipliers({1.0, 0.001})) == OrbitStability::stable);
    CHECK(floquet_stability(multipliers({1.0, 1.0})) ==
          OrbitStability::non_hyperbolic);
    CHECK(floquet_stability(multipliers({1.0, 1.7})) == OrbitStability::unstable);
    CHECK_THROWS_AS(floquet_stability(multipliers({0.5, 0.2})), InvalidOrbitError);
}

TEST_CASE("van der Pol has exactly one stable limit cycle") {
    const VectorField vdp = builtin("vanderpol");
    const auto orbits = find_periodic_orbits(vdp, vdp_bounds);
    REQUIRE(orbits.size() == 1);
    const OrbitRecord& orbit = orbits[0];

    CHECK(orbit.period == doctest::Approx(6.663).epsilon(0.0075)); // +- 0.05
    CHECK(orbit.period <= 100.0);
    CHECK(orbit.is_stable);
    CHECK(orbit.points.size() >= 64);

    // exactly one trivial multiplier near 1, the rest contracting
    int near_one = 0;
    for (Eigen::Index i = 0; i < orbit.multipliers.size(); ++i)
        if (std::abs(orbit.multipliers[i] - std::complex<double>(1.0, 0.0)) <= 1e-2)
            ++near_one;
    CHECK(near_one == 1);

    // closure re-checked at ten times tighter tolerance
    IntegrationSettings tight;
    tight.rel_tol = 1e-9;
    tight.abs_tol = 1e-11;
    const auto back = flow(vdp, orbit.points[0], orbit.period, tight);
    CHECK((back.state - orbit.points[0]).norm() <= 1e-5 * vdp_bounds.diameter());
}

TEST_CASE("Abel-Liouville: multiplier product equals the integrated divergence") {
    const VectorField vdp = builtin("vanderpol");
    const auto orbits = find_periodic_orbits(vdp, vdp_bounds);
    REQUIRE(orbits.size() == 1);
    const OrbitRecord& orbit = orbits[0];

    std::complex<double> product = 1.0;
    for (Eigen::Index i = 0; i < orbit.multipliers.size(); ++i)
        product *= orbit.multipliers[i];

    // trapezoid in time over the uniformly sampled stored points (periodic)
    double divergence_integral = 0.0;
    const double dt = orbit.period / static_cast<double>(orbit.points.size());
    for (const Vec& p : orbit.points)
        divergence_integral += jacobian(vdp, p).trace() * dt;

    const double expected = std::exp(divergence_integral);
    CHECK(std::abs(std::abs(product) - expected) / expected < 0.05);
}

TEST_CASE("gradient and damped-rotation systems have no periodic orbits") {
    CHECK(find_periodic_orbits(builtin("gradient2d"),
                               Box(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}))
              .empty());
    CHECK(find_periodic_orbits(builtin("rotation"),
                               Box(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}))
              .empty());
}

TEST_CASE("has_periodic_orbits short-circuits correctly") {
    CHECK(has_periodic_orbits(builtin("vanderpol"), vdp_bounds));
    CHECK_FALSE(has_periodic_orbits(builtin("gradient2d"),
                                    Box(Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}})));
    CHECK_FALSE(
        has_periodic_orbits(builtin("toggle"), Box(Vec{{0.0, 0.0}}, Vec{{2.0, 2.0}})));
}

TEST_CASE("doubling n_trajectories keeps previously found orbits") {
    OrbitSearchSettings base;
    OrbitSearchSettings doubled;
    doubled.n_trajectories = 100;
    doubled.timeout_seconds = 30.0;
    const auto few = find_periodic_orbits(builtin("vanderpol"), vdp_bounds, base);
    const auto many = find_periodic_orbits(builtin("vanderpol"), vdp_bounds, doubled);
    REQUIRE(few.size() == 1);
    REQUIRE(many.size() == 1);
    CHECK(std::abs(few[0].period - many[0].period) < 1e-4);
}

TEST_CASE("search results are identical across thread counts") {
    OrbitSearchSettings serial;
    OrbitSearchSettings threaded;
    threaded.threads = 4;
    const auto a = find_periodic_orbits(builtin("vanderpol"), vdp_bounds, serial);
    const auto b = find_periodic_orbits(builtin("vanderpol"), vdp_bounds, threaded);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].period == b[i].period);
        CHECK((a[i].multipliers - b[i].multipliers).norm() == 0.0);
    }
}
