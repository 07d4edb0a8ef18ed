#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynclass/models.hpp"
#include "dynclass/numerics.hpp"
#include "dynclass/odeint.hpp"
#include "dynclass/rng.hpp"
#include "test_util.hpp"

using namespace dynclass;

namespace {

VectorField decay_field() {
    return make_field([](const auto& x) { return (-x).eval(); }, 1);
}

VectorField pure_rotation() {
    return make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = -x[1];
            v[1] = x[0];
            return v;
        },
        2);
}

} // namespace

TEST_CASE("exponential decay reaches exp(-1) after unit time") {
    IntegrationSettings settings;
    settings.t_end = 1.0;
    const Trajectory traj = integrate(decay_field(), Vec{{1.0}}, settings);
    CHECK(traj.terminal_reason == TerminalReason::reached_t_end);
    CHECK(traj.times.back() == doctest::Approx(1.0));
    CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-7);
}

TEST_CASE("a zero field yields a constant trajectory") {
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            return VecT<T>(VecT<T>::Zero(x.size()));
        },
        2);
    IntegrationSettings settings;
    settings.t_end = 10.0;
    const Trajectory traj = integrate(f, Vec{{1.0, -2.0}}, settings);
    for (const auto& s : traj.states) CHECK((s - Vec{{1.0, -2.0}}).norm() == 0.0);
}

TEST_CASE("rotation returns to the start after one turn") {
    IntegrationSettings settings;
    settings.t_end = 2.0 * M_PI;
    const Trajectory traj = integrate(pure_rotation(), Vec{{1.0, 0.0}}, settings);
    CHECK((traj.states.back() - Vec{{1.0, 0.0}}).norm() < 1e-6);
    // times strictly increasing
    for (size_t i = 1; i < traj.times.size(); ++i)
        CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("halving the tolerances improves the terminal state") {
    IntegrationSettings loose;
    loose.t_end = 1.0;
    IntegrationSettings tight = loose;
    tight.rel_tol /= 2.0;
    tight.abs_tol /= 2.0;

    const double exact = std::exp(-1.0);
    const double err_loose =
        std::abs(integrate(decay_field(), Vec{{1.0}}, loose).states.back()[0] - exact);
    const double err_tight =
        std::abs(integrate(decay_field(), Vec{{1.0}}, tight).states.back()[0] - exact);
    CHECK(err_tight <= err_loose + 1e-13);

    IntegrationSettings loose_rot;
    loose_rot.t_end = 2.0 * M_PI;
    IntegrationSettings tight_rot = loose_rot;
    tight_rot.rel_tol /= 2.0;
    tight_rot.abs_tol /= 2.0;
    const Vec start{{1.0, 0.0}};
    const double rot_loose =
        (integrate(pure_rotation(), start, loose_rot).states.back() - start).norm();
    const double rot_tight =
        (integrate(pure_rotation(), start, tight_rot).states.back() - start).norm();
    CHECK(rot_tight <= rot_loose + 1e-13);
}

TEST_CASE("bounds exit stops with a margin of ten percent") {
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(1);
            v[0] = T(1.0); // constant drift to the right
            return v;
        },
        1);
    IntegrationSettings settings;
    settings.t_end = 100.0;
    settings.max_step = 0.05;
    const Box box(Vec{{-1.0}}, Vec{{1.0}});
    const Trajectory traj = integrate(f, Vec{{0.0}}, settings, &box);
    CHECK(traj.terminal_reason == TerminalReason::left_bounds);
    // margin = 0.1 * span = 0.2, so the exit happens just past 1.2
    CHECK(traj.states.back()[0] > 1.2);
    CHECK(traj.states.back()[0] < 1.4);
}

TEST_CASE("step limit is reported, not thrown") {
    IntegrationSettings settings;
    settings.t_end = 1e6;
    settings.max_steps = 50;
    const Trajectory traj = integrate(pure_rotation(), Vec{{1.0, 0.0}}, settings);
    CHECK(traj.terminal_reason == TerminalReason::step_limit);
}

TEST_CASE("finite-time blow-up surfaces as a stiffness error") {
    // dx/dt = x^2 from 1 blows up at t = 1
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(1);
            v[0] = x[0] * x[0];
            return v;
        },
        1);
    IntegrationSettings settings;
    settings.t_end = 2.0;
    try {
        integrate(f, Vec{{1.0}}, settings);
        FAIL("expected StiffnessError");
    } catch (const StiffnessError& e) {
        CHECK(e.time() == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("crossings of a rotation are spaced one period apart") {
    IntegrationSettings settings;
    settings.t_end = 25.0;
    const Section section{Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}};
    const auto events =
        detect_crossings(pure_rotation(), Vec{{1.0, 0.0}}, section, settings, 16);

    std::vector<double> up_times;
    for (const auto& ev : events) {
        CHECK(std::abs((ev.state - section.point).dot(section.normal)) <=
              1e-10 * section.normal.norm());
        if (ev.direction == +1) up_times.push_back(ev.t);
    }
    REQUIRE(up_times.size() >= 2);
    for (size_t i = 1; i < up_times.size(); ++i)
        CHECK(std::abs(up_times[i] - up_times[i - 1] - 2.0 * M_PI) < 1e-6);
}

TEST_CASE("grazing crossings are de-chattered") {
    // the unit circle barely dips across the plane x = 0.999; the entry/exit
    // pair sits well inside ten local steps and collapses to one event
    IntegrationSettings settings;
    settings.t_end = 15.5; // just under 2.5 revolutions
    const Section graze{Vec{{0.999, 0.0}}, Vec{{1.0, 0.0}}};
    const auto events =
        detect_crossings(pure_rotation(), Vec{{-1.0, 0.0}}, graze, settings, 16);
    REQUIRE(!events.empty());
    CHECK(events.size() <= 3);
    for (size_t i = 1; i < events.size(); ++i)
        CHECK(events[i].t - events[i - 1].t > 1.0);
}

TEST_CASE("a zero section normal is rejected") {
    IntegrationSettings settings;
    settings.t_end = 1.0;
    CHECK_THROWS_AS(detect_crossings(pure_rotation(), Vec{{1.0, 0.0}},
                                     {Vec{{0.0, 0.0}}, Vec{{0.0, 0.0}}}, settings, 4),
                    DimensionError);
}

TEST_CASE("a flow parallel to the section never crosses it") {
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            VecT<T> v(2);
            v[0] = T(0.0);
            v[1] = T(1.0);
            return v;
        },
        2);
    IntegrationSettings settings;
    settings.t_end = 10.0;
    const Section section{Vec{{1.0, 0.0}}, Vec{{1.0, 0.0}}};
    CHECK(detect_crossings(f, Vec{{0.0, 0.0}}, section, settings, 8).empty());
}

TEST_CASE("van der Pol return time approaches the reference period") {
    const VectorField vdp = builtin("vanderpol");

    // reference period from a high-accuracy run
    IntegrationSettings tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    tight.t_end = 60.0;
    const Vec start{{2.0, 0.0}};
    const Section section{start, vdp(start)};
    const auto ref_events = detect_crossings(vdp, start, section, tight, 16);
    std::vector<double> ref_up;
    for (const auto& ev : ref_events)
        if (ev.direction == +1) ref_up.push_back(ev.t);
    REQUIRE(ref_up.size() >= 4);
    const double reference = ref_up.back() - ref_up[ref_up.size() - 2];
    CHECK(reference == doctest::Approx(6.663).epsilon(0.002));

    IntegrationSettings settings;
    settings.t_end = 60.0;
    const auto events = detect_crossings(vdp, start, section, settings, 16);
    std::vector<double> up;
    for (const auto& ev : events)
        if (ev.direction == +1) up.push_back(ev.t);
    REQUIRE(up.size() >= 4);
    // discard the transient, compare the settled return time
    const double returned = up.back() - up[up.size() - 2];
    CHECK(std::abs(returned - reference) < 0.01);
}

TEST_CASE("monodromy of a linear system is the matrix exponential") {
    dynclass::Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform(0.0, 1.999));
        const Mat a = testutil::random_matrix(rng, n);
        const VectorField f = make_field(testutil::LinearField{a}, n);
        const double horizon = 1.5;
        IntegrationSettings settings;
        const Mat phi = monodromy(f, Vec::Zero(n), horizon, settings);
        const Mat expected = testutil::expm(a * horizon);
        CHECK((phi - expected).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("monodromy of a zero field is the identity") {
    const VectorField f = make_field(
        [](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            return VecT<T>(VecT<T>::Zero(x.size()));
        },
        2);
    IntegrationSettings settings;
    const Mat phi = monodromy(f, Vec{{0.3, 0.4}}, 2.0, settings);
    CHECK((phi - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("van der Pol monodromy has the trivial Floquet multiplier") {
    const VectorField vdp = builtin("vanderpol");
    // land on the cycle, then measure the return time
    IntegrationSettings settings;
    settings.t_end = 60.0;
    const Vec start{{2.0, 0.0}};
    const Section section{start, vdp(start)};
    const auto events = detect_crossings(vdp, start, section, settings, 16);
    std::vector<CrossingEvent> up;
    for (const auto& ev : events)
        if (ev.direction == +1) up.push_back(ev);
    REQUIRE(up.size() >= 3);
    const Vec on_cycle = up[up.size() - 2].state;
    const double period = up.back().t - up[up.size() - 2].t;

    const EigenSet mult = eigen(monodromy(vdp, on_cycle, period, settings));
    double closest = 1e9;
    for (Eigen::Index i = 0; i < mult.values.size(); ++i)
        closest = std::min(closest,
                           std::abs(mult.values[i] - std::complex<double>(1.0, 0.0)));
    CHECK(closest < 1e-3);
}
