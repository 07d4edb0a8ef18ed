#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "dynclass/core.hpp"
#include "dynclass/vectorfield.hpp"

namespace dynclass {

struct IntegrationSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 1'000'000;
    double t_end = 0.0;
};

enum class TerminalReason { reached_t_end, left_bounds, step_limit, event };

struct Trajectory {
    std::vector<double> times;  // strictly increasing, starts at 0
    std::vector<Vec> states;
    TerminalReason terminal_reason = TerminalReason::reached_t_end;
};

/// Hyperplane through `point` with the given (not necessarily unit) normal.
struct Section {
    Vec point;
    Vec normal;
};

struct CrossingEvent {
    double t = 0.0;
    Vec state;
    int direction = 0; // +1: signed distance goes - to +, -1: the reverse
};

namespace detail {

using Rhs = std::function<Vec(const Vec&)>;

/// Quartic interpolant over one accepted step [t0, t0+h].
struct DenseOut {
    double t0 = 0.0;
    double h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec at(double t) const {
        const double th = (t - t0) / h;
        const double mth = 1.0 - th;
        return r1 + th * (r2 + mth * (r3 + th * (r4 + mth * r5)));
    }
};

enum class StepAction { proceed, stop };

/// Called after every accepted step with the step interval and its dense
/// interpolant; returning stop ends the integration with reason `event`.
using StepCallback =
    std::function<StepAction(double t0, double t1, const Vec& y1, const DenseOut&)>;

struct CoreResult {
    double t = 0.0;
    Vec state;
    TerminalReason reason = TerminalReason::reached_t_end;
};

/// Adaptive embedded 5(4) pair; bounds exit uses a 10% per-axis margin.
CoreResult integrate_core(const Rhs& rhs, const Vec& x0,
                          const IntegrationSettings& settings, const Box* bounds,
                          const StepCallback& cb);

} // namespace detail

/// Integrate dx/dt = F(x) from x0 over [0, settings.t_end], recording every
/// accepted step. With bounds given, stops once the state leaves the bounds
/// expanded by 10% of each axis span.
Trajectory integrate(const VectorField& field, const Vec& x0,
                     const IntegrationSettings& settings,
                     const Box* bounds = nullptr);

/// Terminal state only (no per-step storage).
detail::CoreResult flow(const VectorField& field, const Vec& x0, double t_end,
                        IntegrationSettings settings, const Box* bounds = nullptr);

/// Detect transversal crossings of the section plane along the trajectory
/// from x0. Crossing times are refined on the dense output until the signed
/// distance drops below 1e-10 * ||normal||. Events closer than ten local
/// steps to the previous reported event are dropped (de-chattering).
std::vector<CrossingEvent> detect_crossings(const VectorField& field, const Vec& x0,
                                            const Section& section,
                                            const IntegrationSettings& settings,
                                            int max_crossings,
                                            const Box* bounds = nullptr);

/// Fundamental solution Phi(period) of the variational equation
/// dPhi/dt = J(x(t)) Phi, Phi(0) = I, integrated jointly with the state.
Mat monodromy(const VectorField& field, const Vec& orbit_start, double period,
              IntegrationSettings settings);

} // namespace dynclass
