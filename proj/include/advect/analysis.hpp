#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "advect/errors.hpp"
#include "advect/expr.hpp"
#include "advect/grid.hpp"
#include "advect/schemes.hpp"

namespace advect {

/// Worst Courant number nu = |zeta|*dt/dx over the run box, with a sample
/// point attaining it.
struct CourantReport {
    double nu_max = 0.0;
    double x = 0.0, t = 0.0;
};

inline CourantReport cfl_number(const Expr& zeta, const Grid1D& grid, const TimeGrid& time,
                                Interval u_range, int samples_per_axis) {
    const auto m = max_abs_on_box(zeta, Interval{grid.a, grid.b}, Interval{0.0, time.t_end},
                                  u_range, samples_per_axis);
    return CourantReport{m.value * time.dt / grid.dx, m.x, m.t};
}

/// Single-mode von Neumann multiplier for phi_t + s*zeta*phi_x = 0.
/// Computed from the textbook substitution phi_j^n = g^n e^(i j theta) with
/// a = s*nu; Leapfrog reports the larger-magnitude root of its quadratic.
struct AmplificationFactor {
    SchemeId scheme;
    double nu = 0.0;
    double theta = 0.0; // k*dx, radians
    std::complex<double> g;
    double magnitude() const { return std::abs(g); }
};

inline AmplificationFactor amplification_factor(SchemeId scheme, double nu, double theta,
                                                SignConvention sign) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw DomainError("amplification_factor: theta must lie in [0, pi]");
    const double a = sign_factor(sign) * nu;
    const std::complex<double> I(0.0, 1.0);
    const double st = std::sin(theta), ct = std::cos(theta);
    std::complex<double> g;
    switch (scheme) {
        case SchemeId::FtcsCentered:
            g = 1.0 - I * a * st;
            break;
        case SchemeId::ForwardBiased:
            g = 1.0 - a * (std::exp(I * theta) - 1.0);
            break;
        case SchemeId::Upwind:
            if (a > 0.0) g = 1.0 - a * (1.0 - std::exp(-I * theta));
            else if (a < 0.0) g = 1.0 - a * (std::exp(I * theta) - 1.0);
            else g = 1.0;
            break;
        case SchemeId::LaxFriedrichs:
            g = ct - I * a * st;
            break;
        case SchemeId::LaxWendroff:
            g = 1.0 - I * a * st - a * a * (1.0 - ct);
            break;
        case SchemeId::Leapfrog: {
            // g^2 + 2 i a sin(theta) g - 1 = 0; the worse root governs.
            const double beta = a * st;
            const std::complex<double> r = std::sqrt(std::complex<double>(1.0 - beta * beta, 0.0));
            const std::complex<double> g1 = -I * beta + r;
            const std::complex<double> g2 = -I * beta - r;
            g = std::abs(g1) >= std::abs(g2) ? g1 : g2;
            break;
        }
    }
    return AmplificationFactor{scheme, nu, theta, g};
}

/// Measured per-step growth of one injected Fourier mode, stepped with the
/// real scheme machinery on a periodic grid with constant zeta.
///
/// The measurement tracks the magnitude of the injected mode's own DFT bin
/// (for Leapfrog, the two-level state magnitude), so rounding-seeded content
/// at other wavenumbers cannot pollute the estimate. It stops early when the
/// full field exceeds the blow-up threshold (reported, the mean up to that
/// step is still returned) or when the bin signal decays below 1e-12 of its
/// start (a decaying mode reaches the rounding floor long before 100 steps).
struct GrowthMeasurement {
    double rate = 0.0;
    int steps_used = 0;
    bool blew_up = false;
};

inline GrowthMeasurement empirical_growth(SchemeId scheme, double nu, double theta, int steps,
                                          int grid_size, SignConvention sign) {
    const int nx = grid_size;
    if (nx < 4) throw DomainError("empirical_growth: grid_size too small");
    const double m_real = theta * nx / (2.0 * std::numbers::pi);
    const int m = static_cast<int>(std::lround(m_real));
    if (std::fabs(m_real - m) > 1e-6)
        throw DomainError("empirical_growth: theta not resolvable on this grid");
    const double theta_used = 2.0 * std::numbers::pi * m / nx;

    const Grid1D grid = build_grid(0.0, 2.0 * std::numbers::pi, nx);
    WaveField curr{grid, 0.0, std::vector<double>(static_cast<std::size_t>(nx + 1)), false};
    for (int j = 0; j < nx; ++j)
        curr.values[static_cast<std::size_t>(j)] = std::cos(theta_used * j);
    curr.values[static_cast<std::size_t>(nx)] = curr.values[0];

    StepContext ctx;
    ctx.zeta = Expr::parse(nu > 0.0 ? "1" : (nu < 0.0 ? "-1" : "0"));
    ctx.sign = sign;
    ctx.boundary = BoundaryPolicy::periodic();
    ctx.dt = (nu == 0.0 ? 1.0 : std::fabs(nu)) * grid.dx;

    const std::complex<double> I(0.0, 1.0);
    auto bin = [&](const WaveField& f) {
        std::complex<double> c(0.0, 0.0);
        for (int j = 0; j < nx; ++j)
            c += f.values[static_cast<std::size_t>(j)] * std::exp(-I * (theta_used * j));
        return std::abs(c);
    };
    auto too_big = [&](const WaveField& f) {
        for (int j = 0; j < nx; ++j) {
            const double v = f.values[static_cast<std::size_t>(j)];
            if (!std::isfinite(v) || std::fabs(v) > 1e10) return true;
        }
        return false;
    };

    // Two-level schemes settle after the bootstrap; start the measurement
    // window there so the upwind starter step does not bias the mean.
    const int window_start = scheme == SchemeId::Leapfrog ? 2 : 0;
    if (steps <= window_start)
        throw DomainError("empirical_growth: need more steps than the startup window");

    WaveField prev = curr;
    int k = 0;
    if (scheme == SchemeId::Leapfrog) {
        prev = curr;
        curr = step(curr, ctx, SchemeId::Upwind);
        k = 1;
    }
    auto state_mag = [&]() {
        if (scheme != SchemeId::Leapfrog) return bin(curr);
        return std::hypot(bin(curr), bin(prev));
    };

    double r_start = state_mag(); // value at k == window_start for one-level schemes
    GrowthMeasurement out;
    double r = r_start;
    while (k < steps) {
        StepContext c2 = ctx;
        if (scheme == SchemeId::Leapfrog) c2.previous = &prev;
        WaveField next = step(curr, c2, scheme);
        prev = std::move(curr);
        curr = std::move(next);
        ++k;
        r = state_mag();
        if (k == window_start) {
            r_start = r;
            continue;
        }
        if (too_big(curr)) {
            out.blew_up = true;
            break;
        }
        if (r < r_start * 1e-12) break;
    }
    out.steps_used = k;
    out.rate = std::pow(r / r_start, 1.0 / static_cast<double>(k - window_start));
    return out;
}

/// L2 (sqrt(sum d^2 * dx)), max-norm and total-variation diagnostics of a
/// field against a reference on the same grid; tv is of the field alone.
struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    double tv = 0.0;
};

inline double total_variation(const WaveField& field) {
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < field.values.size(); ++i)
        tv += std::fabs(field.values[i + 1] - field.values[i]);
    return tv;
}

inline ErrorReport error_norms(const WaveField& field, const WaveField& reference) {
    if (!(field.grid == reference.grid))
        throw GridMismatch("error_norms: fields live on different grids");
    double sum2 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double d = field.values[i] - reference.values[i];
        sum2 += d * d;
        linf = std::max(linf, std::fabs(d));
    }
    return ErrorReport{std::sqrt(sum2 * field.grid.dx), linf, total_variation(field)};
}

} // namespace advect
