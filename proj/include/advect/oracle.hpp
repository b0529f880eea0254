#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "advect/errors.hpp"
#include "advect/expr.hpp"
#include "advect/grid.hpp"
#include "advect/schemes.hpp"

namespace advect {

/// D'Alembert-style traveling wave with the left-going component optional.
/// Standard evaluates f_right(x - c0 t) + f_left(x + c0 t); PaperFaithful
/// flips both argument signs. An absent component contributes zero.
struct TravelingWave {
    InitialCondition f_right;
    std::optional<InitialCondition> f_left;
    double c0 = 0.0;
};

inline double eval_traveling(const TravelingWave& w, double x, double t, SignConvention sign) {
    const double s = sign_factor(sign);
    double v = w.f_right(x - s * w.c0 * t);
    if (w.f_left) v += (*w.f_left)(x + s * w.c0 * t);
    return v;
}

namespace detail {

// One classical RK4 step of dx/dtau = f(tau, x).
template <class F>
double rk4_step(F&& f, double tau, double x, double h) {
    const double k1 = f(tau, x);
    const double k2 = f(tau + h / 2.0, x + h * k1 / 2.0);
    const double k3 = f(tau + h / 2.0, x + h * k2 / 2.0);
    const double k4 = f(tau + h, x + h * k3);
    return x + h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
}

} // namespace detail

/// Integrates dx/dtau = s*zeta(x, tau) from (x0, t0) to t1 with a fixed-step
/// classical 4th-order method. Step count is chosen so the last step lands
/// exactly on t1.
inline double integrate_characteristic(const Expr& zeta, double x0, double t0, double t1,
                                       SignConvention sign, double rk_dt) {
    if (zeta.uses_u())
        throw DomainError("characteristic tracing requires zeta independent of u");
    if (!(rk_dt > 0.0)) throw DomainError("require rk_dt > 0");
    const double span = t1 - t0;
    if (span == 0.0) return x0;
    const int steps = static_cast<int>(std::ceil(std::fabs(span) / rk_dt));
    const double h = span / static_cast<double>(steps);
    const double s = sign_factor(sign);
    auto f = [&](double tau, double x) { return s * zeta.eval(x, tau, 0.0); };
    double x = x0;
    for (int k = 0; k < steps; ++k) {
        x = detail::rk4_step(f, t0 + static_cast<double>(k) * h, x, h);
        if (!std::isfinite(x))
            throw NonFiniteTrajectory("characteristic left the representable range");
    }
    return x;
}

/// A characteristic through (arrival, t) traced back to its foot at t = 0.
struct CharacteristicTrace {
    double foot = 0.0;
    double arrival = 0.0;
    int steps = 0;
    double rk_dt = 0.0; // actual step used (span/steps)
};

inline CharacteristicTrace trace_characteristic(const Expr& zeta, double x, double t,
                                                SignConvention sign, double rk_dt) {
    if (t < 0.0) throw DomainError("trace_characteristic: require t >= 0");
    if (!(rk_dt > 0.0)) throw DomainError("trace_characteristic: require rk_dt > 0");
    if (t == 0.0) return CharacteristicTrace{x, x, 0, rk_dt};
    const int steps = static_cast<int>(std::ceil(t / rk_dt));
    const double foot = integrate_characteristic(zeta, x, t, 0.0, sign, t / steps);
    return CharacteristicTrace{foot, x, steps, t / static_cast<double>(steps)};
}

/// Ground-truth field at time t: the initial condition evaluated at each
/// grid point's characteristic foot. The foot is fed to the analytic f, so
/// there is no interpolation error, only the integration tolerance.
inline WaveField oracle_field(const Grid1D& grid, double t, const InitialCondition& f,
                              const Expr& zeta, SignConvention sign, double rk_dt) {
    WaveField field{grid, t, std::vector<double>(static_cast<std::size_t>(grid.point_count())),
                    false};
    for (int i = 0; i <= grid.nx; ++i) {
        const auto trace = trace_characteristic(zeta, grid.point(i), t, sign, rk_dt);
        field.values[static_cast<std::size_t>(i)] = f(trace.foot);
    }
    return field;
}

/// Wave-breaking time for state-dependent speed: the first time particle
/// paths cross. +infinity when no grid interval steepens.
struct ShockReport {
    double shock_time = std::numeric_limits<double>::infinity();
    double location_hint = 0.0;
};

namespace detail {

inline void require_state_only(const Expr& speed) {
    if (!speed.uses_u() || speed.uses_x() || speed.uses_t())
        throw DomainError("speed must depend on u only");
}

} // namespace detail

/// t* = -1 / min_i D_i where D_i is the centered difference of
/// s*speed(f(x)) over the interior grid points.
inline ShockReport detect_shock(const InitialCondition& f, const Expr& speed, const Grid1D& grid,
                                SignConvention sign) {
    detail::require_state_only(speed);
    const double s = sign_factor(sign);
    std::vector<double> w(static_cast<std::size_t>(grid.point_count()));
    for (int i = 0; i <= grid.nx; ++i)
        w[static_cast<std::size_t>(i)] = s * speed.eval(0.0, 0.0, f(grid.point(i)));
    double min_d = std::numeric_limits<double>::infinity();
    double at = grid.a;
    for (int i = 1; i < grid.nx; ++i) {
        const double d = (w[static_cast<std::size_t>(i + 1)] - w[static_cast<std::size_t>(i - 1)]) /
                         (2.0 * grid.dx);
        if (d < min_d) {
            min_d = d;
            at = grid.point(i);
        }
    }
    if (min_d >= 0.0) return ShockReport{std::numeric_limits<double>::infinity(), at};
    return ShockReport{-1.0 / min_d, at};
}

/// Pre-shock solution of phi_t + s*speed(phi)*phi_x = 0: solves the implicit
/// characteristic relation x0 + s*speed(f(x0))*t = x for the foot x0 by an
/// expanding bracket plus bisection, then returns f(x0).
///
/// The wave-breaking gate runs detect_shock on a scan window centered on the
/// query point ([x - W, x + W], W = 8*(1+|x|+|t|), 4096 cells).
inline double implicit_state_solution(const InitialCondition& f, const Expr& speed, double x,
                                      double t, SignConvention sign) {
    detail::require_state_only(speed);
    if (t < 0.0) throw DomainError("implicit_state_solution: require t >= 0");

    const double w = 8.0 * (1.0 + std::fabs(x) + std::fabs(t));
    const Grid1D scan = build_grid(x - w, x + w, 4096);
    const ShockReport shock = detect_shock(f, speed, scan, sign);
    if (t >= shock.shock_time)
        throw PostShock("t >= wave-breaking time t* = " + std::to_string(shock.shock_time));

    const double s = sign_factor(sign);
    auto g = [&](double x0) { return x0 + s * speed.eval(0.0, 0.0, f(x0)) * t - x; };

    // g is strictly increasing before the shock; expand until it straddles 0.
    double half = 1.0;
    double lo = x - half, hi = x + half;
    double glo = g(lo), ghi = g(hi);
    while (!(glo <= 0.0 && ghi >= 0.0)) {
        half *= 2.0;
        if (half > 1e12) throw NoBracket("no sign change found on the search interval");
        lo = x - half;
        hi = x + half;
        glo = g(lo);
        ghi = g(hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(lo) + std::fabs(hi));
         ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm < 0.0) lo = mid;
        else hi = mid;
    }
    return f(0.5 * (lo + hi));
}

} // namespace advect
