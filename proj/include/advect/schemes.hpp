#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "advect/errors.hpp"
#include "advect/expr.hpp"
#include "advect/grid.hpp"

namespace advect {

/// Which equation the stencils discretize.
///   Standard:      phi_t + zeta * phi_x = 0   (transport velocity +zeta)
///   PaperFaithful: phi_t - zeta * phi_x = 0   (transport velocity -zeta)
/// The two differ by the sign of the space term; PaperFaithful reproduces
/// the update new = old + dt*zeta*D_x(phi) verbatim.
enum class SignConvention { PaperFaithful, Standard };

inline double sign_factor(SignConvention s) {
    return s == SignConvention::Standard ? 1.0 : -1.0;
}

enum class SchemeId { FtcsCentered, ForwardBiased, Upwind, LaxFriedrichs, LaxWendroff, Leapfrog };

/// Rule for endpoint values whose stencil would reach outside the grid.
///   CopyNeighbor:      after the interior update, endpoint := adjacent updated value
///   DegenerateStencil: a missing neighbor is replaced by the nearest existing
///                      point at the same time level
///   Periodic:          index arithmetic modulo nx; point 0 is identified with point nx
///   Fixed:             endpoints forced to configured values
struct BoundaryPolicy {
    enum class Kind { CopyNeighbor, DegenerateStencil, Periodic, Fixed };

    Kind kind = Kind::Periodic;
    double left = 0.0, right = 0.0; // Fixed only

    static BoundaryPolicy copy_neighbor() { return {Kind::CopyNeighbor, 0.0, 0.0}; }
    static BoundaryPolicy degenerate_stencil() { return {Kind::DegenerateStencil, 0.0, 0.0}; }
    static BoundaryPolicy periodic() { return {Kind::Periodic, 0.0, 0.0}; }
    static BoundaryPolicy fixed(double l, double r) { return {Kind::Fixed, l, r}; }
};

struct StepContext {
    Expr zeta;
    SignConvention sign = SignConvention::PaperFaithful;
    BoundaryPolicy boundary;
    double dt = 0.0;
    const WaveField* previous = nullptr; // required by Leapfrog only
};

// Point stencils for phi_t + s*zeta*phi_x = 0, written with a = s*nu where
// nu = zeta*dt/dx is the signed local Courant number. Unit |a| collapses the
// one-sided stencils to a pure neighbor copy; doing the copy keeps the
// advertised unit-CFL shift bitwise.

inline double stencil_ftcs_centered(double left, double mid, double right, double a) {
    return mid - a * (right - left) / 2.0;
}

inline double stencil_forward_biased(double mid, double right, double a) {
    return mid - a * (right - mid);
}

inline double stencil_upwind(double left, double mid, double right, double a) {
    if (a > 0.0) return a == 1.0 ? left : mid - a * (mid - left);
    if (a < 0.0) return a == -1.0 ? right : mid - a * (right - mid);
    return mid;
}

inline double stencil_lax_friedrichs(double left, double right, double a) {
    return (right + left) / 2.0 - a * (right - left) / 2.0;
}

inline double stencil_lax_wendroff(double left, double mid, double right, double a) {
    if (a == 1.0) return left;
    if (a == -1.0) return right;
    return mid - a * (right - left) / 2.0 + a * a * ((right - mid) - (mid - left)) / 2.0;
}

inline double stencil_leapfrog(double left, double prev_mid, double right, double a) {
    return prev_mid - a * (right - left);
}

/// Fills endpoints of an updated row. Periodic rows were computed with
/// modular stencils, so only the duplicate point nx needs syncing; the
/// degenerate stencil computes its endpoints inside the main loop and is a
/// no-op here.
inline void apply_boundary(std::vector<double>& next, const BoundaryPolicy& policy) {
    const std::size_t n = next.size();
    switch (policy.kind) {
        case BoundaryPolicy::Kind::CopyNeighbor:
            next[0] = next[1];
            next[n - 1] = next[n - 2];
            break;
        case BoundaryPolicy::Kind::Fixed:
            next[0] = policy.left;
            next[n - 1] = policy.right;
            break;
        case BoundaryPolicy::Kind::Periodic:
            next[n - 1] = next[0];
            break;
        case BoundaryPolicy::Kind::DegenerateStencil:
            break;
    }
}

/// Advances a field by one time step. The local Courant number is evaluated
/// per point as zeta(x_i, t, phi_i)*dt/dx with t the current (old) time
/// level; Leapfrog also reads u from the current level. Steppers compute
/// whatever the arithmetic gives, including infinities; blow-up detection
/// belongs to the simulation loop.
inline WaveField step(const WaveField& field, const StepContext& ctx, SchemeId scheme) {
    if (field.blown_up) throw DomainError("step: field is marked blown up");
    if (!(ctx.dt > 0.0)) throw DomainError("step: require dt > 0");
    const int nx = field.grid.nx;
    const auto& v = field.values;
    if (static_cast<int>(v.size()) != nx + 1)
        throw GridMismatch("step: field row length does not match its grid");
    const WaveField* prev = nullptr;
    if (scheme == SchemeId::Leapfrog) {
        if (!ctx.previous) throw MissingPreviousLevel("leapfrog requires the previous time level");
        if (ctx.previous->values.size() != v.size())
            throw GridMismatch("leapfrog previous level has a different point count");
        prev = ctx.previous;
    }

    WaveField out{field.grid, field.time + ctx.dt,
                  std::vector<double>(v.size()), false};
    const double s = sign_factor(ctx.sign);
    const double lam = ctx.dt / field.grid.dx;
    const double t = field.time;

    auto courant = [&](int i) {
        return s * ctx.zeta.eval(field.grid.point(i), t, v[static_cast<std::size_t>(i)]) * lam;
    };
    auto apply_stencil = [&](SchemeId sch, double left, double mid, double right, double prev_mid,
                             double a) {
        switch (sch) {
            case SchemeId::FtcsCentered: return stencil_ftcs_centered(left, mid, right, a);
            case SchemeId::ForwardBiased: return stencil_forward_biased(mid, right, a);
            case SchemeId::Upwind: return stencil_upwind(left, mid, right, a);
            case SchemeId::LaxFriedrichs: return stencil_lax_friedrichs(left, right, a);
            case SchemeId::LaxWendroff: return stencil_lax_wendroff(left, mid, right, a);
            case SchemeId::Leapfrog: return stencil_leapfrog(left, prev_mid, right, a);
        }
        return mid;
    };

    int lo = 1, hi = nx - 1; // loop range with true neighbors
    switch (ctx.boundary.kind) {
        case BoundaryPolicy::Kind::Periodic: {
            for (int i = 0; i < nx; ++i) {
                const double left = v[static_cast<std::size_t>((i + nx - 1) % nx)];
                const double right = v[static_cast<std::size_t>((i + 1) % nx)];
                const double pm = prev ? prev->values[static_cast<std::size_t>(i)] : 0.0;
                out.values[static_cast<std::size_t>(i)] = apply_stencil(
                    scheme, left, v[static_cast<std::size_t>(i)], right, pm, courant(i));
            }
            apply_boundary(out.values, ctx.boundary);
            return out;
        }
        case BoundaryPolicy::Kind::DegenerateStencil:
            lo = 0;
            hi = nx;
            break;
        case BoundaryPolicy::Kind::CopyNeighbor:
        case BoundaryPolicy::Kind::Fixed:
            break;
    }

    for (int i = lo; i <= hi; ++i) {
        const double left = v[static_cast<std::size_t>(std::max(i - 1, 0))];
        const double right = v[static_cast<std::size_t>(std::min(i + 1, nx))];
        const double pm = prev ? prev->values[static_cast<std::size_t>(i)] : 0.0;
        out.values[static_cast<std::size_t>(i)] = apply_stencil(
            scheme, left, v[static_cast<std::size_t>(i)], right, pm, courant(i));
    }
    apply_boundary(out.values, ctx.boundary);
    return out;
}

// Config/CLI token mappings.

inline SchemeId scheme_from_token(const std::string& tok) {
    if (tok == "ftcs") return SchemeId::FtcsCentered;
    if (tok == "forward") return SchemeId::ForwardBiased;
    if (tok == "upwind") return SchemeId::Upwind;
    if (tok == "lax_friedrichs") return SchemeId::LaxFriedrichs;
    if (tok == "lax_wendroff") return SchemeId::LaxWendroff;
    if (tok == "leapfrog") return SchemeId::Leapfrog;
    throw ConfigError("unknown scheme token '" + tok + "'");
}

inline std::string to_token(SchemeId s) {
    switch (s) {
        case SchemeId::FtcsCentered: return "ftcs";
        case SchemeId::ForwardBiased: return "forward";
        case SchemeId::Upwind: return "upwind";
        case SchemeId::LaxFriedrichs: return "lax_friedrichs";
        case SchemeId::LaxWendroff: return "lax_wendroff";
        case SchemeId::Leapfrog: return "leapfrog";
    }
    return "?";
}

inline SignConvention sign_from_token(const std::string& tok) {
    if (tok == "paper") return SignConvention::PaperFaithful;
    if (tok == "standard") return SignConvention::Standard;
    throw ConfigError("unknown sign token '" + tok + "' (expected paper|standard)");
}

inline std::string to_token(SignConvention s) {
    return s == SignConvention::PaperFaithful ? "paper" : "standard";
}

inline BoundaryPolicy boundary_from_token(const std::string& tok) {
    if (tok == "copy") return BoundaryPolicy::copy_neighbor();
    if (tok == "one_sided") return BoundaryPolicy::degenerate_stencil();
    if (tok == "periodic") return BoundaryPolicy::periodic();
    if (tok.rfind("fixed:", 0) == 0) {
        const std::string rest = tok.substr(6);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ConfigError("fixed boundary needs 'fixed:<left>,<right>'");
        try {
            const double l = std::stod(rest.substr(0, comma));
            const double r = std::stod(rest.substr(comma + 1));
            return BoundaryPolicy::fixed(l, r);
        } catch (const std::exception&) {
            throw ConfigError("fixed boundary needs 'fixed:<left>,<right>'");
        }
    }
    throw ConfigError("unknown boundary token '" + tok + "'");
}

inline std::string to_token(const BoundaryPolicy& b) {
    switch (b.kind) {
        case BoundaryPolicy::Kind::CopyNeighbor: return "copy";
        case BoundaryPolicy::Kind::DegenerateStencil: return "one_sided";
        case BoundaryPolicy::Kind::Periodic: return "periodic";
        case BoundaryPolicy::Kind::Fixed: {
            char buf[80];
            std::snprintf(buf, sizeof buf, "fixed:%.17g,%.17g", b.left, b.right);
            return buf;
        }
    }
    return "?";
}

} // namespace advect
