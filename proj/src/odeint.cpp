#include "dynclass/odeint.hpp"

#include <algorithm>
#include <cmath>

#include "dynclass/numerics.hpp"

namespace dynclass {
namespace detail {

namespace {

// Dormand-Prince 5(4) tableau, FSAL form.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// 5th-minus-4th order error weights
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
// dense-output weights
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

double initial_step(const Vec& y0, const Vec& f0, const IntegrationSettings& s) {
    const double d0 = y0.norm();
    const double d1 = f0.norm();
    double h = (d0 < 1e-8 || d1 < 1e-8) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, s.max_step, s.t_end});
    return std::max(h, 1e-12 * s.t_end);
}

} // namespace

CoreResult integrate_core(const Rhs& rhs, const Vec& x0,
                          const IntegrationSettings& settings, const Box* bounds,
                          const StepCallback& cb) {
    if (!(settings.t_end > 0.0))
        throw DimensionError("integration horizon t_end must be positive");
    if (!(settings.rel_tol > 0.0) || !(settings.abs_tol > 0.0))
        throw DimensionError("integration tolerances must be positive");

    const Eigen::Index n = x0.size();
    double t = 0.0;
    Vec y = x0;
    Vec k1 = rhs(y);
    double h = initial_step(y, k1, settings);

    Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), err(n);
    DenseOut dense;

    long steps = 0;
    while (t < settings.t_end) {
        if (h < 1e-14 * settings.t_end)
            throw StiffnessError("step size underflow at t = " + std::to_string(t) +
                                     " (problem appears stiff)",
                                 t);
        if (steps >= settings.max_steps)
            return {t, y, TerminalReason::step_limit};
        ++steps;

        const bool last = t + h >= settings.t_end;
        if (last) h = settings.t_end - t;

        k2 = rhs(y + h * (A21 * k1));
        k3 = rhs(y + h * (A31 * k1 + A32 * k2));
        k4 = rhs(y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        k5 = rhs(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        k6 = rhs(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        k7 = rhs(y5);

        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        double err_norm = err.norm();
        if (!std::isfinite(err_norm) || !y5.allFinite())
            err_norm = std::numeric_limits<double>::infinity();
        const double tol =
            settings.abs_tol + settings.rel_tol * std::max(y.norm(), y5.norm());

        if (err_norm <= tol) {
            // land on t_end exactly; t + h can miss it by an ulp
            const double t1 = last ? settings.t_end : t + h;
            dense.t0 = t;
            dense.h = h;
            dense.r1 = y;
            dense.r2 = y5 - y;
            dense.r3 = h * k1 - dense.r2;
            dense.r4 = dense.r2 - h * k7 - dense.r3;
            dense.r5 =
                h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);

            if (cb && cb(t, t1, y5, dense) == StepAction::stop)
                return {t1, y5, TerminalReason::event};

            t = t1;
            y = y5;
            k1 = k7;

            if (bounds && !bounds->contains(y, 0.1))
                return {t, y, TerminalReason::left_bounds};
            if (last) break;

            const double grow =
                err_norm == 0.0
                    ? 5.0
                    : std::clamp(0.9 * std::pow(tol / err_norm, 0.2), 0.2, 5.0);
            h = std::min({h * grow, settings.max_step, settings.t_end - t});
        } else {
            h *= std::clamp(0.9 * std::pow(tol / err_norm, 0.2), 0.1, 0.9);
        }
    }
    return {t, y, TerminalReason::reached_t_end};
}

} // namespace detail

Trajectory integrate(const VectorField& field, const Vec& x0,
                     const IntegrationSettings& settings, const Box* bounds) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    const detail::Rhs rhs = [&field](const Vec& y) { return field(y); };
    const auto record = [&traj](double, double t1, const Vec& y1,
                                const detail::DenseOut&) {
        traj.times.push_back(t1);
        traj.states.push_back(y1);
        return detail::StepAction::proceed;
    };
    const auto result = detail::integrate_core(rhs, x0, settings, bounds, record);
    traj.terminal_reason = result.reason;
    return traj;
}

detail::CoreResult flow(const VectorField& field, const Vec& x0, double t_end,
                        IntegrationSettings settings, const Box* bounds) {
    settings.t_end = t_end;
    const detail::Rhs rhs = [&field](const Vec& y) { return field(y); };
    return detail::integrate_core(rhs, x0, settings, bounds, nullptr);
}

std::vector<CrossingEvent> detect_crossings(const VectorField& field, const Vec& x0,
                                            const Section& section,
                                            const IntegrationSettings& settings,
                                            int max_crossings, const Box* bounds) {
    const double nnorm = section.normal.norm();
    if (!(nnorm > 0.0))
        throw DimensionError("section normal must be non-zero");
    const double g_tol = 1e-10 * nnorm;

    std::vector<CrossingEvent> events;
    const auto g_of = [&section](const Vec& y) {
        return (y - section.point).dot(section.normal);
    };

    double prev_g = g_of(x0);
    double last_event_t = -std::numeric_limits<double>::infinity();

    const detail::Rhs rhs = [&field](const Vec& y) { return field(y); };
    const auto watch = [&](double t0, double t1, const Vec& y1,
                           const detail::DenseOut& dense) {
        const double g1 = g_of(y1);
        const bool crossed = prev_g != 0.0 && (prev_g * g1 < 0.0 || g1 == 0.0);
        if (crossed) {
            // bisection on the dense interpolant down to the signed-distance
            // tolerance
            double ta = t0, tb = t1;
            double ga = prev_g;
            double t_ev = tb;
            Vec y_ev = y1;
            double g_ev = g1;
            for (int it = 0; it < 200 && std::abs(g_ev) > g_tol; ++it) {
                const double tm = 0.5 * (ta + tb);
                if (tm == ta || tm == tb) break; // double resolution exhausted
                const Vec ym = dense.at(tm);
                const double gm = g_of(ym);
                if (ga * gm <= 0.0) {
                    tb = tm;
                } else {
                    ta = tm;
                    ga = gm;
                }
                t_ev = tb;
                y_ev = dense.at(tb);
                g_ev = g_of(y_ev);
            }
            const double h_local = t1 - t0;
            if (t_ev - last_event_t >= 10.0 * h_local) {
                events.push_back({t_ev, y_ev, g1 > prev_g ? +1 : -1});
                last_event_t = t_ev;
                if (static_cast<int>(events.size()) >= max_crossings)
                    return detail::StepAction::stop;
            }
        }
        prev_g = g1;
        return detail::StepAction::proceed;
    };

    detail::integrate_core(rhs, x0, settings, bounds, watch);
    return events;
}

Mat monodromy(const VectorField& field, const Vec& orbit_start, double period,
              IntegrationSettings settings) {
    if (!(period > 0.0)) throw DimensionError("monodromy period must be positive");
    const Eigen::Index n = field.dimension();
    const Eigen::Index m = n + n * n;

    const detail::Rhs rhs = [&field, n](const Vec& z) {
        const Vec x = z.head(n);
        const Eigen::Map<const Mat> phi(z.data() + n, n, n);
        const Mat j = jacobian(field, x);
        Vec out(n + n * n);
        out.head(n) = field(x);
        Eigen::Map<Mat>(out.data() + n, n, n) = j * phi;
        return out;
    };

    Vec z0 = Vec::Zero(m);
    z0.head(n) = orbit_start;
    Eigen::Map<Mat>(z0.data() + n, n, n) = Mat::Identity(n, n);

    settings.t_end = period;
    const auto result = detail::integrate_core(rhs, z0, settings, nullptr, nullptr);
    if (result.reason != TerminalReason::reached_t_end)
        throw NumericalError("variational integration stopped before the period");
    return Eigen::Map<const Mat>(result.state.data() + n, n, n);
}

} // namespace dynclass
