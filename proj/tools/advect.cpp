// Command-line driver: runs experiments from config files and writes
// snapshot CSVs plus a manifest. Exit codes: 0 success, 1 config/parse
// error, 2 run blew up (outputs still written), 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "advect/analysis.hpp"
#include "advect/io.hpp"
#include "advect/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBlowUp = 2;
constexpr int kExitIo = 3;

int do_run(const std::string& config_path, const std::string& out_dir) {
    const advect::RunConfig cfg = advect::load_config(config_path);
    const advect::RunResult result = advect::run(cfg);
    advect::write_outputs(result, out_dir);
    std::printf("wrote %zu snapshots + manifest.json to %s\n", result.snapshots.size(),
                out_dir.c_str());
    if (result.manifest.blown_up) {
        std::printf("run blew up at t = %s (of %s requested)\n",
                    advect::fmt17(result.manifest.final_time_reached).c_str(),
                    advect::fmt17(cfg.t_end).c_str());
        return kExitBlowUp;
    }
    return kExitOk;
}

int do_oracle(const std::string& config_path, const std::string& out_dir) {
    const advect::RunConfig cfg = advect::load_config(config_path);
    const advect::Expr zeta = advect::Expr::parse(cfg.velocity);
    if (zeta.dependence() == advect::DependenceClass::StateDependent) {
        std::fprintf(stderr, "no oracle available: velocity depends on the state u\n");
        return kExitConfig;
    }
    const auto f = advect::InitialCondition::parse(cfg.initial);
    const auto grid = advect::build_grid(cfg.grid_a, cfg.grid_b, cfg.grid_nx);
    const auto time = advect::build_time_grid(cfg.t_end, cfg.nt);
    const double rk_dt = time.dt / cfg.rk_dt_divisor;
    const int snap = advect::effective_snapshot_every(cfg);

    advect::RunResult result;
    result.manifest.config = cfg;
    result.manifest.blown_up = false;
    result.manifest.final_time_reached = cfg.t_end;
    std::vector<int> steps;
    for (int j = 0; j <= cfg.nt; ++j) {
        if (j != 0 && j != cfg.nt && j % snap != 0) continue;
        const double t = j * time.dt;
        result.snapshots.push_back(advect::oracle_field(grid, t, f, zeta, cfg.sign, rk_dt));
        advect::SnapshotStats st;
        st.step = j;
        st.time = t;
        st.tv = advect::total_variation(result.snapshots.back());
        result.manifest.snapshots.push_back(st);
    }
    advect::Interval u_range{result.snapshots.front().values.front(),
                             result.snapshots.front().values.front()};
    for (double v : result.snapshots.front().values) {
        u_range.lo = std::min(u_range.lo, v);
        u_range.hi = std::max(u_range.hi, v);
    }
    result.manifest.nu_max =
        advect::cfl_number(zeta, grid, time, u_range, advect::kCflSamplesPerAxis).nu_max;
    advect::write_outputs(result, out_dir);
    std::printf("wrote %zu oracle snapshots + manifest.json to %s\n", result.snapshots.size(),
                out_dir.c_str());
    return kExitOk;
}

int do_compare(const std::string& path_a, const std::string& path_b, const std::string& out_dir) {
    const auto ca = advect::load_config(path_a);
    const auto cb = advect::load_config(path_b);
    const advect::CompareResult cmp = advect::compare(ca, cb);
    std::filesystem::create_directories(out_dir);
    advect::write_outputs(cmp.a, std::filesystem::path(out_dir) / "a");
    advect::write_outputs(cmp.b, std::filesystem::path(out_dir) / "b");
    advect::write_compare_csv(std::filesystem::path(out_dir) / "comparison.csv", cmp);
    std::printf("wrote comparison.csv (%zu rows) + both runs to %s\n", cmp.rows.size(),
                out_dir.c_str());
    if (cmp.a.manifest.blown_up || cmp.b.manifest.blown_up) return kExitBlowUp;
    return kExitOk;
}

int do_convergence(const std::string& config_path, int levels) {
    const advect::RunConfig cfg = advect::load_config(config_path);
    const advect::ConvergenceReport rep = advect::convergence_order(cfg, levels);
    std::printf("nx,nt,dx,l2\n");
    for (const auto& lvl : rep.levels)
        std::printf("%d,%d,%s,%s\n", lvl.nx, lvl.nt, advect::fmt17(lvl.dx).c_str(),
                    advect::fmt17(lvl.l2).c_str());
    if (rep.defined)
        std::printf("observed_order,%s\n", advect::fmt17(rep.order).c_str());
    else
        std::printf("observed_order,undefined below noise floor\n");
    return kExitOk;
}

int do_stability(const std::string& scheme_tok, double nu, int theta_samples, int steps,
                 const std::string& sign_tok) {
    const advect::SchemeId scheme = advect::scheme_from_token(scheme_tok);
    const advect::SignConvention sign = advect::sign_from_token(sign_tok);
    if (theta_samples < 1) {
        std::fprintf(stderr, "error: --theta-samples must be >= 1\n");
        return kExitConfig;
    }
    // Smallest multiple of 2*k at or above 16 keeps every theta resolvable.
    const int nx = 2 * theta_samples * std::max(1, (15 + 2 * theta_samples) / (2 * theta_samples));
    std::printf("scheme,nu,theta,analytic_mag,empirical_mag,rel_err\n");
    for (int j = 1; j <= theta_samples; ++j) {
        const double theta = std::numbers::pi * j / theta_samples;
        const double ana = advect::amplification_factor(scheme, nu, theta, sign).magnitude();
        const auto emp = advect::empirical_growth(scheme, nu, theta, steps, nx, sign);
        const double rel = std::fabs(emp.rate - ana) / std::max(ana, 1e-12);
        std::printf("%s,%s,%s,%s,%s,%s\n", scheme_tok.c_str(), advect::fmt17(nu).c_str(),
                    advect::fmt17(theta).c_str(), advect::fmt17(ana).c_str(),
                    advect::fmt17(emp.rate).c_str(), advect::fmt17(rel).c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D advection experiments: explicit schemes, exact oracles, diagnostics"};
    app.require_subcommand(1);

    std::string config_path, config_b, out_dir = "out";
    int levels = 4;
    std::string scheme_tok, sign_tok = "standard";
    double nu = 0.5;
    int theta_samples = 8, steps = 100;

    auto* cmd_run = app.add_subcommand("run", "advance a config with its chosen scheme");
    cmd_run->add_option("config", config_path, "config file")->required();
    cmd_run->add_option("--out", out_dir, "output directory");

    auto* cmd_oracle = app.add_subcommand("oracle", "characteristic ground truth for a config");
    cmd_oracle->add_option("config", config_path, "config file")->required();
    cmd_oracle->add_option("--out", out_dir, "output directory");

    auto* cmd_cmp = app.add_subcommand("compare", "run two configs on one domain side by side");
    cmd_cmp->add_option("configA", config_path, "first config")->required();
    cmd_cmp->add_option("configB", config_b, "second config")->required();
    cmd_cmp->add_option("--out", out_dir, "output directory");

    auto* cmd_conv = app.add_subcommand("convergence", "observed order under grid refinement");
    cmd_conv->add_option("config", config_path, "base config file")->required();
    cmd_conv->add_option("--levels", levels, "refinement levels (>= 3)");

    auto* cmd_stab = app.add_subcommand("stability", "analytic vs measured mode growth");
    cmd_stab->add_option("--scheme", scheme_tok, "scheme token")->required();
    cmd_stab->add_option("--nu", nu, "Courant number")->required();
    cmd_stab->add_option("--theta-samples", theta_samples, "thetas per sweep (default 8)");
    cmd_stab->add_option("--steps", steps, "steps per measurement (default 100)");
    cmd_stab->add_option("--sign", sign_tok, "paper|standard (default standard)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cmd_run->parsed()) return do_run(config_path, out_dir);
        if (cmd_oracle->parsed()) return do_oracle(config_path, out_dir);
        if (cmd_cmp->parsed()) return do_compare(config_path, config_b, out_dir);
        if (cmd_conv->parsed()) return do_convergence(config_path, levels);
        if (cmd_stab->parsed()) return do_stability(scheme_tok, nu, theta_samples, steps, sign_tok);
    } catch (const advect::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const advect::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
