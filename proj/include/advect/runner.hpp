#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "advect/analysis.hpp"
#include "advect/errors.hpp"
#include "advect/expr.hpp"
#include "advect/grid.hpp"
#include "advect/oracle.hpp"
#include "advect/schemes.hpp"

namespace advect {

constexpr double kBlowUpThreshold = 1e10;
constexpr int kCflSamplesPerAxis = 64;

/// Everything one experiment needs. `scheme` is a token because the special
/// value "exact" (valid for constant zeta only) routes to the translation
/// solver instead of a stepper.
struct RunConfig {
    double grid_a = 0.0;
    double grid_b = 1.0;
    int grid_nx = 100;
    double t_end = 1.0;
    int nt = 100;
    std::string initial;
    std::string velocity;
    std::string scheme; // ftcs|forward|upwind|lax_friedrichs|lax_wendroff|leapfrog|exact
    BoundaryPolicy boundary;
    SignConvention sign = SignConvention::PaperFaithful;
    int snapshot_every = 0; // 0 -> nt/100, clamped to >= 1
    int rk_dt_divisor = 10; // oracle fineness: rk_dt = dt / divisor
};

inline int effective_snapshot_every(const RunConfig& c) {
    if (c.snapshot_every > 0) return c.snapshot_every;
    return std::max(1, c.nt / 100);
}

inline void validate(const RunConfig& c) {
    if (!(c.grid_b > c.grid_a)) throw ConfigError("grid.b must exceed grid.a");
    if (c.grid_nx < 3) throw ConfigError("grid.nx must be >= 3");
    if (!(c.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
    if (c.nt < 1) throw ConfigError("time.nt must be >= 1");
    if (c.initial.empty()) throw ConfigError("initial expression missing");
    if (c.velocity.empty()) throw ConfigError("velocity expression missing");
    if (c.scheme.empty()) throw ConfigError("scheme missing");
    if (c.scheme != "exact") scheme_from_token(c.scheme); // throws on bad token
    if (c.snapshot_every < 0 || c.snapshot_every > c.nt)
        throw ConfigError("snapshot_every must lie in [1, nt]");
    if (c.rk_dt_divisor < 1) throw ConfigError("rk_dt_divisor must be >= 1");
}

struct SnapshotStats {
    int step = 0;
    double time = 0.0;
    double tv = 0.0;
    std::optional<double> l2_vs_oracle;
    std::optional<double> linf_vs_oracle;
};

struct RunManifest {
    RunConfig config;
    double nu_max = 0.0;
    std::vector<SnapshotStats> snapshots;
    bool blown_up = false;
    double final_time_reached = 0.0;
    int drift_direction = 0; // sign of |phi|-weighted center-of-mass displacement
};

struct RunResult {
    std::vector<WaveField> snapshots; // parallel to manifest.snapshots
    RunManifest manifest;
};

namespace detail {

inline bool field_ok(const WaveField& f) {
    for (double v : f.values)
        if (!std::isfinite(v) || std::fabs(v) > kBlowUpThreshold) return false;
    return true;
}

inline Interval value_range(const WaveField& f) {
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return Interval{lo, hi};
}

// |phi|-weighted center of mass; the weight avoids cancellation for
// sign-changing profiles like sin on [0, 4pi].
inline std::optional<double> center_of_mass(const WaveField& f) {
    double m = 0.0, mx = 0.0;
    for (int i = 0; i < static_cast<int>(f.values.size()); ++i) {
        const double w = std::fabs(f.values[static_cast<std::size_t>(i)]);
        m += w;
        mx += w * f.grid.point(i);
    }
    if (m == 0.0) return std::nullopt;
    return mx / m;
}

inline int drift_sign(const WaveField& first, const WaveField& last) {
    const auto c0 = center_of_mass(first);
    const auto c1 = center_of_mass(last);
    if (!c0 || !c1) return 0;
    const double d = *c1 - *c0;
    const double tol = 1e-12 * (first.grid.b - first.grid.a);
    return d > tol ? 1 : (d < -tol ? -1 : 0);
}

struct OracleEval {
    bool available = false;
    InitialCondition f{Expr::parse("0")};
    Expr zeta;
    SignConvention sign = SignConvention::Standard;
    double rk_dt = 0.0;
};

inline void attach_stats(RunManifest& man, const std::vector<WaveField>& fields,
                         const std::vector<int>& steps, const OracleEval& oe) {
    man.snapshots.clear();
    for (std::size_t k = 0; k < fields.size(); ++k) {
        SnapshotStats st;
        st.step = steps[k];
        st.time = fields[k].time;
        st.tv = total_variation(fields[k]);
        if (oe.available) {
            // The oracle itself can overflow (e.g. exp data dragged to huge
            // feet); norms are diagnostics, so such snapshots just omit them.
            try {
                const WaveField ref = oracle_field(fields[k].grid, st.time, oe.f, oe.zeta, oe.sign,
                                                   oe.rk_dt);
                const ErrorReport err = error_norms(fields[k], ref);
                st.l2_vs_oracle = err.l2;
                st.linf_vs_oracle = err.linf;
            } catch (const EvalError&) {
            } catch (const NonFiniteTrajectory&) {
            }
        }
        man.snapshots.push_back(std::move(st));
    }
    if (!fields.empty()) man.drift_direction = drift_sign(fields.front(), fields.back());
}

} // namespace detail

/// Exact translation solver (scheme token "exact"): snapshots come from
/// eval_traveling, so there is no stepping error by construction.
inline RunResult run_exact(const RunConfig& cfg) {
    validate(cfg);
    const Expr zeta = Expr::parse(cfg.velocity);
    if (zeta.dependence() != DependenceClass::Constant)
        throw ConfigError("scheme 'exact' requires a constant velocity");
    const InitialCondition f = InitialCondition::parse(cfg.initial);
    const Grid1D grid = build_grid(cfg.grid_a, cfg.grid_b, cfg.grid_nx);
    const TimeGrid time = build_time_grid(cfg.t_end, cfg.nt);
    const double c0 = zeta.eval(0.0, 0.0, 0.0);
    const TravelingWave wave{f, std::nullopt, c0};

    const int snap = effective_snapshot_every(cfg);
    std::vector<WaveField> fields;
    std::vector<int> steps;
    for (int j = 0; j <= cfg.nt; ++j) {
        if (j != 0 && j != cfg.nt && j % snap != 0) continue;
        const double t = static_cast<double>(j) * time.dt;
        WaveField fld{grid, t, std::vector<double>(static_cast<std::size_t>(grid.point_count())),
                      false};
        for (int i = 0; i <= grid.nx; ++i)
            fld.values[static_cast<std::size_t>(i)] = eval_traveling(wave, grid.point(i), t,
                                                                     cfg.sign);
        fields.push_back(std::move(fld));
        steps.push_back(j);
    }

    RunResult res;
    res.manifest.config = cfg;
    const Interval u_range = detail::value_range(fields.front());
    res.manifest.nu_max = cfl_number(zeta, grid, time, u_range, kCflSamplesPerAxis).nu_max;
    res.manifest.blown_up = false;
    res.manifest.final_time_reached = cfg.t_end;
    detail::OracleEval oe;
    oe.available = true;
    oe.f = f;
    oe.zeta = zeta;
    oe.sign = cfg.sign;
    oe.rk_dt = time.dt / cfg.rk_dt_divisor;
    detail::attach_stats(res.manifest, fields, steps, oe);
    res.snapshots = std::move(fields);
    return res;
}

/// The standard double loop: sample the initial row, then nt steps of the
/// chosen scheme. After each step any non-finite value or
/// max|phi| > 1e10 marks the run blown up and truncates it; every persisted
/// snapshot stays finite. Snapshots are kept every snapshot_every steps plus
/// the final reached row.
inline RunResult run(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.scheme == "exact") return run_exact(cfg);
    const SchemeId scheme = scheme_from_token(cfg.scheme);
    const Expr zeta = Expr::parse(cfg.velocity);
    const InitialCondition f = InitialCondition::parse(cfg.initial);
    const Grid1D grid = build_grid(cfg.grid_a, cfg.grid_b, cfg.grid_nx);
    const TimeGrid time = build_time_grid(cfg.t_end, cfg.nt);
    const int snap = effective_snapshot_every(cfg);

    WaveField curr = sample_initial(grid, f);
    WaveField prev = curr; // meaningful once leapfrog has bootstrapped

    std::vector<WaveField> fields{curr};
    std::vector<int> steps{0};

    StepContext ctx;
    ctx.zeta = zeta;
    ctx.sign = cfg.sign;
    ctx.boundary = cfg.boundary;
    ctx.dt = time.dt;

    bool blown = false;
    int last_good = 0;
    for (int j = 1; j <= cfg.nt; ++j) {
        WaveField next;
        if (scheme == SchemeId::Leapfrog) {
            if (j == 1) {
                next = step(curr, ctx, SchemeId::Upwind); // standard two-level bootstrap
            } else {
                StepContext c2 = ctx;
                c2.previous = &prev;
                next = step(curr, c2, SchemeId::Leapfrog);
            }
        } else {
            next = step(curr, ctx, scheme);
        }
        if (!detail::field_ok(next)) {
            blown = true;
            break;
        }
        prev = std::move(curr);
        curr = std::move(next);
        last_good = j;
        if (j % snap == 0 && j != cfg.nt) {
            fields.push_back(curr);
            steps.push_back(j);
        } else if (j == cfg.nt) {
            fields.push_back(curr);
            steps.push_back(j);
        }
    }
    if (blown && steps.back() != last_good) {
        fields.push_back(curr);
        steps.push_back(last_good);
    }

    RunResult res;
    res.manifest.config = cfg;
    const Interval u_range = detail::value_range(fields.front());
    res.manifest.nu_max = cfl_number(zeta, grid, time, u_range, kCflSamplesPerAxis).nu_max;
    res.manifest.blown_up = blown;
    res.manifest.final_time_reached = blown ? static_cast<double>(last_good) * time.dt
                                            : cfg.t_end;
    detail::OracleEval oe;
    oe.available = zeta.dependence() != DependenceClass::StateDependent;
    if (oe.available) {
        oe.f = f;
        oe.zeta = zeta;
        oe.sign = cfg.sign;
        oe.rk_dt = time.dt / cfg.rk_dt_divisor;
    }
    detail::attach_stats(res.manifest, fields, steps, oe);
    res.snapshots = std::move(fields);
    return res;
}

/// Per-snapshot diagnostics of two runs on the same domain (schemes,
/// boundaries and signs may differ). Rows pair snapshots by step index; a
/// truncated run simply contributes fewer rows.
struct CompareRow {
    int step = 0;
    double time = 0.0;
    double tv_a = 0.0, tv_b = 0.0;
    double l2_diff = 0.0;
    std::optional<double> l2_a_vs_oracle, l2_b_vs_oracle;
};

struct CompareResult {
    RunResult a, b;
    std::vector<CompareRow> rows;
};

inline CompareResult compare(const RunConfig& ca, const RunConfig& cb) {
    if (ca.grid_a != cb.grid_a || ca.grid_b != cb.grid_b || ca.grid_nx != cb.grid_nx ||
        ca.t_end != cb.t_end || ca.nt != cb.nt)
        throw ConfigError("compare: grid and time domains must match");
    if (ca.initial != cb.initial || ca.velocity != cb.velocity)
        throw ConfigError("compare: initial condition and velocity must match");
    if (effective_snapshot_every(ca) != effective_snapshot_every(cb))
        throw ConfigError("compare: snapshot cadence must match");

    CompareResult out;
    out.a = run(ca);
    out.b = run(cb);
    std::size_t ia = 0, ib = 0;
    while (ia < out.a.snapshots.size() && ib < out.b.snapshots.size()) {
        const int sa = out.a.manifest.snapshots[ia].step;
        const int sb = out.b.manifest.snapshots[ib].step;
        if (sa < sb) { ++ia; continue; }
        if (sb < sa) { ++ib; continue; }
        CompareRow row;
        row.step = sa;
        row.time = out.a.manifest.snapshots[ia].time;
        row.tv_a = out.a.manifest.snapshots[ia].tv;
        row.tv_b = out.b.manifest.snapshots[ib].tv;
        row.l2_diff = error_norms(out.a.snapshots[ia], out.b.snapshots[ib]).l2;
        row.l2_a_vs_oracle = out.a.manifest.snapshots[ia].l2_vs_oracle;
        row.l2_b_vs_oracle = out.b.manifest.snapshots[ib].l2_vs_oracle;
        out.rows.push_back(row);
        ++ia;
        ++ib;
    }
    return out;
}

/// Observed order of accuracy: runs the config at `levels` refinements with
/// dx and dt halved together (fixed Courant number) and fits the slope of
/// log(l2 error vs oracle at t_end) against log(dx).
struct ConvergenceLevel {
    int nx = 0, nt = 0;
    double dx = 0.0;
    double l2 = 0.0;
};

struct ConvergenceReport {
    double order = 0.0;
    bool defined = false; // false when every level sits below the noise floor
    std::vector<ConvergenceLevel> levels;
};

inline ConvergenceReport convergence_order(const RunConfig& base, int levels) {
    if (levels < 3) throw DomainError("convergence_order: need at least 3 levels");
    const Expr zeta = Expr::parse(base.velocity);
    if (zeta.dependence() == DependenceClass::StateDependent)
        throw ConfigError("convergence_order: no oracle available for state-dependent velocity");

    ConvergenceReport rep;
    for (int k = 0; k < levels; ++k) {
        RunConfig c = base;
        c.grid_nx = base.grid_nx << k;
        c.nt = base.nt << k;
        c.snapshot_every = c.nt; // only the final row is needed
        const RunResult r = run(c);
        if (r.manifest.blown_up)
            throw UnstableRun("convergence_order: level " + std::to_string(k) + " blew up");
        const auto& last = r.manifest.snapshots.back();
        ConvergenceLevel lvl;
        lvl.nx = c.grid_nx;
        lvl.nt = c.nt;
        lvl.dx = (c.grid_b - c.grid_a) / c.grid_nx;
        lvl.l2 = last.l2_vs_oracle.value_or(0.0);
        rep.levels.push_back(lvl);
    }

    bool above_noise = false;
    for (const auto& lvl : rep.levels)
        if (lvl.l2 > 1e-13) above_noise = true;
    if (!above_noise) return rep; // order undefined below the noise floor

    // Least-squares slope of log(l2) vs log(dx).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(rep.levels.size());
    for (const auto& lvl : rep.levels) {
        const double lx = std::log(lvl.dx);
        const double ly = std::log(std::max(lvl.l2, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.defined = true;
    return rep;
}

} // namespace advect
