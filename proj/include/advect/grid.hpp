#pragma once

#include <cmath>
#include <vector>

#include "advect/errors.hpp"
#include "advect/expr.hpp"

namespace advect {

/// Uniform partition of [a, b] into nx subintervals (nx+1 points).
/// Point coordinates are always a + i*dx, never accumulated, so there is
/// no drift across thousands of points.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int nx = 1;
    double dx = 1.0;

    double point(int i) const { return a + static_cast<double>(i) * dx; }
    int point_count() const { return nx + 1; }

    bool operator==(const Grid1D& o) const { return a == o.a && b == o.b && nx == o.nx; }
};

inline Grid1D build_grid(double a, double b, int nx) {
    if (!(b > a)) throw DomainError("build_grid: require b > a");
    if (nx < 3) throw DomainError("build_grid: require nx >= 3");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("build_grid: non-finite bounds");
    return Grid1D{a, b, nx, (b - a) / static_cast<double>(nx)};
}

/// Partition of [0, t_end] into nt steps.
struct TimeGrid {
    double t_end = 1.0;
    int nt = 1;
    double dt = 1.0;
};

inline TimeGrid build_time_grid(double t_end, int nt) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw DomainError("build_time_grid: require t_end > 0");
    if (nt < 1) throw DomainError("build_time_grid: require nt >= 1");
    return TimeGrid{t_end, nt, t_end / static_cast<double>(nt)};
}

/// One row of the discrete solution: phi(time, x_i) for i = 0..nx.
/// blown_up is set by the simulation loop when a step produced non-finite
/// or runaway values; steppers themselves never set it.
struct WaveField {
    Grid1D grid;
    double time = 0.0;
    std::vector<double> values;
    bool blown_up = false;
};

/// Initial condition f(x): an expression restricted to the variable x.
class InitialCondition {
public:
    explicit InitialCondition(Expr expr) : expr_(std::move(expr)) {
        if (expr_.uses_t() || expr_.uses_u())
            throw DomainError("initial condition may depend on x only");
    }

    static InitialCondition parse(std::string_view src) {
        return InitialCondition(Expr::parse(src));
    }

    double operator()(double x) const { return expr_.eval(x, 0.0, 0.0); }
    const Expr& expr() const { return expr_; }

private:
    Expr expr_;
};

inline WaveField sample_initial(const Grid1D& grid, const InitialCondition& f) {
    WaveField field{grid, 0.0, std::vector<double>(static_cast<std::size_t>(grid.point_count())),
                    false};
    for (int i = 0; i <= grid.nx; ++i) {
        try {
            field.values[static_cast<std::size_t>(i)] = f(grid.point(i));
        } catch (const EvalError& e) {
            throw EvalError("initial condition at x = " + std::to_string(grid.point(i)) + ": " +
                            e.what());
        }
    }
    return field;
}

} // namespace advect
