#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "advect/analysis.hpp"
#include "advect/runner.hpp"
#include "test_support.hpp"

using advect::amplification_factor;
using advect::empirical_growth;
using advect::Expr;
using advect::SchemeId;
using advect::SignConvention;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

const SchemeId kAllSchemes[] = {SchemeId::FtcsCentered, SchemeId::ForwardBiased,
                                SchemeId::Upwind,       SchemeId::LaxFriedrichs,
                                SchemeId::LaxWendroff,  SchemeId::Leapfrog};
} // namespace

TEST_CASE("courant numbers of the bundled experiments") {
    const auto g1 = advect::build_grid(0.0, 4 * kPi, 100);
    const auto t1 = advect::build_time_grid(15.0, 5000);
    const auto c1 = advect::cfl_number(Expr::parse("1"), g1, t1, {0, 0}, 16);
    CHECK(c1.nu_max == Approx(0.02387).epsilon(1e-3));

    const auto t2 = advect::build_time_grid(5.0, 5000);
    const auto c2 = advect::cfl_number(Expr::parse("x + t"), g1, t2, {0, 0}, 16);
    CHECK(c2.nu_max == Approx(0.1398).epsilon(1e-3));
    CHECK(c2.x == Approx(4 * kPi));
    CHECK(c2.t == Approx(5.0));

    const auto g3 = advect::build_grid(-kPi / 2, kPi / 2, 100);
    const auto t3 = advect::build_time_grid(100.0, 5000);
    const auto c3 = advect::cfl_number(Expr::parse("t^2"), g3, t3, {-1, 1}, 16);
    CHECK(c3.nu_max == Approx(6366.2).epsilon(1e-3));
    CHECK(c3.nu_max > 1000.0); // flagged unstable
}

TEST_CASE("amplification factors at nu = 0") {
    for (double theta : {0.1, kPi / 4, kPi / 2, 2.5}) {
        CHECK(amplification_factor(SchemeId::FtcsCentered, 0, theta,
                                   SignConvention::Standard).magnitude() == 1.0);
        CHECK(amplification_factor(SchemeId::Upwind, 0, theta,
                                   SignConvention::Standard).magnitude() == 1.0);
        CHECK(amplification_factor(SchemeId::LaxWendroff, 0, theta,
                                   SignConvention::Standard).magnitude() == 1.0);
        CHECK(amplification_factor(SchemeId::LaxFriedrichs, 0, theta,
                                   SignConvention::Standard).magnitude() ==
              Approx(std::fabs(std::cos(theta))).margin(1e-15));
    }
    CHECK_THROWS_AS(amplification_factor(SchemeId::Upwind, 0.5, -0.1, SignConvention::Standard),
                    advect::DomainError);
    CHECK_THROWS_AS(amplification_factor(SchemeId::Upwind, 0.5, 3.5, SignConvention::Standard),
                    advect::DomainError);
}

TEST_CASE("textbook magnitudes at nu = 0.5, theta = pi/2") {
    CHECK(amplification_factor(SchemeId::FtcsCentered, 0.5, kPi / 2,
                               SignConvention::Standard).magnitude() ==
          Approx(std::sqrt(1.25)).margin(1e-12));
    CHECK(amplification_factor(SchemeId::Upwind, 0.5, kPi / 2,
                               SignConvention::Standard).magnitude() ==
          Approx(std::sqrt(0.5)).margin(1e-12));
    // The sign convention only flips the transport direction, not |g|, for
    // the symmetric schemes.
    CHECK(amplification_factor(SchemeId::FtcsCentered, 0.5, kPi / 2,
                               SignConvention::PaperFaithful).magnitude() ==
          Approx(std::sqrt(1.25)).margin(1e-12));
}

TEST_CASE("leapfrog reports the larger root") {
    // beta <= 1: both roots sit on the unit circle.
    CHECK(amplification_factor(SchemeId::Leapfrog, 0.9, kPi / 2,
                               SignConvention::Standard).magnitude() == Approx(1.0).margin(1e-12));
    // beta > 1: |g| = beta + sqrt(beta^2 - 1).
    const double beta = 1.1;
    CHECK(amplification_factor(SchemeId::Leapfrog, 1.1, kPi / 2,
                               SignConvention::Standard).magnitude() ==
          Approx(beta + std::sqrt(beta * beta - 1.0)).margin(1e-12));
}

TEST_CASE("ftcs is never mode-stable away from nu = 0") {
    for (double nu : {0.05, 0.25, 0.5, 1.0, 1.1, -0.7}) {
        for (int j = 1; j < 16; ++j) {
            const double theta = kPi * j / 16.0;
            const double mag = amplification_factor(SchemeId::FtcsCentered, nu, theta,
                                                    SignConvention::Standard).magnitude();
            REQUIRE(mag >= 1.0);
            if (std::sin(theta) != 0.0) REQUIRE(mag > 1.0);
        }
    }
}

TEST_CASE("upwind is mode-stable exactly on the unit courant interval") {
    const double thetas[] = {kPi / 8, kPi / 4, kPi / 2, kPi};
    for (double nu : {0.25, 0.5, 0.9, 1.0}) {
        for (double theta : thetas)
            REQUIRE(amplification_factor(SchemeId::Upwind, nu, theta,
                                         SignConvention::Standard).magnitude() <= 1.0 + 1e-14);
    }
    bool some_unstable = false;
    for (double theta : thetas)
        if (amplification_factor(SchemeId::Upwind, 1.1, theta,
                                 SignConvention::Standard).magnitude() > 1.0)
            some_unstable = true;
    CHECK(some_unstable);
}

TEST_CASE("measured growth tracks the analytic factor") {
    // Unit courant: the upwind step is an exact shift.
    const auto shift = empirical_growth(SchemeId::Upwind, 1.0, kPi / 2, 100, 64,
                                        SignConvention::Standard);
    CHECK(shift.rate == Approx(1.0).margin(1e-12));
    CHECK_FALSE(shift.blew_up);

    const auto ftcs = empirical_growth(SchemeId::FtcsCentered, 0.5, kPi / 2, 100, 64,
                                       SignConvention::Standard);
    CHECK(ftcs.rate == Approx(1.11803).epsilon(0.02));

    const auto beyond = empirical_growth(SchemeId::Upwind, 1.1, kPi, 100, 64,
                                         SignConvention::Standard);
    CHECK(beyond.rate > 1.0);

    // A decaying mode stops at the signal floor instead of measuring noise.
    const auto damped = empirical_growth(SchemeId::LaxFriedrichs, 0.25, kPi / 2, 100, 64,
                                         SignConvention::Standard);
    CHECK(damped.rate == Approx(0.25).epsilon(0.02));
    CHECK(damped.steps_used < 100);

    CHECK_THROWS_AS(empirical_growth(SchemeId::Upwind, 0.5, 0.1234, 100, 64,
                                     SignConvention::Standard),
                    advect::DomainError); // theta not resolvable
}

TEST_CASE("spot lattice: empirical vs analytic within two percent") {
    // The full 6x5x4 lattice runs in the acceptance suite; keep a cheap
    // cross-section here to catch regressions early.
    const double thetas[] = {kPi / 8, kPi / 2, kPi};
    for (SchemeId scheme : kAllSchemes) {
        for (double nu : {0.5, 1.0, 1.1}) {
            for (double theta : thetas) {
                const double ana = amplification_factor(scheme, nu, theta,
                                                        SignConvention::Standard).magnitude();
                const auto emp = empirical_growth(scheme, nu, theta, 100, 64,
                                                  SignConvention::Standard);
                REQUIRE(std::fabs(emp.rate - ana) <= 0.02 * ana + 1e-6);
            }
        }
    }
}

TEST_CASE("error norms and total variation formulas") {
    const auto zero = testsup::field_from({0, 0, 0, 0});
    const auto bump = testsup::field_from({0, 1, 0, 0});
    const auto same = advect::error_norms(bump, bump);
    CHECK(same.l2 == 0.0);
    CHECK(same.linf == 0.0);

    const auto rep = advect::error_norms(bump, zero);
    CHECK(rep.l2 == 1.0); // dx = 1
    CHECK(rep.linf == 1.0);
    CHECK(rep.tv == 2.0);

    CHECK(advect::total_variation(testsup::field_from({3, 3, 3, 3})) == 0.0);
    CHECK(advect::total_variation(testsup::field_from({0, 1, 0, 0})) == 2.0);
    // Monotone rows telescope.
    CHECK(advect::total_variation(testsup::field_from({-1, 0, 2, 5})) == 6.0);

    const auto other_grid =
        advect::WaveField{advect::build_grid(0, 1, 3), 0.0, {0, 0, 0, 0}, false};
    CHECK_THROWS_AS(advect::error_norms(bump, other_grid), advect::GridMismatch);
}

TEST_CASE("upwind total variation never grows over a long run") {
    std::mt19937_64 rng(61);
    auto f = testsup::random_ring(rng, 48);
    advect::StepContext ctx;
    ctx.zeta = Expr::parse("1");
    ctx.sign = SignConvention::Standard;
    ctx.boundary = advect::BoundaryPolicy::periodic();
    ctx.dt = 0.8 * f.grid.dx; // nu = 0.8
    double tv = advect::total_variation(f);
    for (int s = 0; s < 1000; ++s) {
        f = step(f, ctx, SchemeId::Upwind);
        const double tv_next = advect::total_variation(f);
        REQUIRE(tv_next <= tv * (1.0 + 1e-14) + 1e-14);
        tv = tv_next;
    }
}

TEST_CASE("observed convergence order on a quick ladder") {
    advect::RunConfig base;
    base.grid_a = 0.0;
    base.grid_b = 2 * kPi;
    base.grid_nx = 16;
    base.t_end = kPi;
    base.nt = 16; // nu = 0.5 exactly, refined jointly
    base.initial = "sin(x)";
    base.velocity = "1";
    base.scheme = "upwind";
    base.boundary = advect::BoundaryPolicy::periodic();
    base.sign = SignConvention::Standard;
    base.rk_dt_divisor = 1;

    const auto rep = advect::convergence_order(base, 3);
    REQUIRE(rep.defined);
    CHECK(rep.order == Approx(1.0).margin(0.3));

    base.scheme = "exact";
    base.velocity = "1";
    const auto degenerate = advect::convergence_order(base, 3);
    CHECK_FALSE(degenerate.defined); // oracle vs oracle sits at rounding level

    CHECK_THROWS_AS(advect::convergence_order(base, 2), advect::DomainError);
}
