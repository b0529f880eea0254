#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "advect/expr.hpp"

using advect::DependenceClass;
using advect::Expr;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Random valid expression text with bounded depth. Constants are kept
// non-negative: the grammar produces negative values only through unary
// minus nodes, so a bare negative literal can never appear in a parsed tree.
std::string random_expr(std::mt19937_64& rng, int depth, bool allow_u) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    std::uniform_real_distribution<double> num(0.0, 8.0);
    switch (pick(rng)) {
        case 0: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", num(rng));
            return buf;
        }
        case 1: return "x";
        case 2: return allow_u && (rng() & 1) ? "u" : "t";
        case 3: return random_expr(rng, depth - 1, allow_u) + " + " + random_expr(rng, depth - 1, allow_u);
        case 4: return random_expr(rng, depth - 1, allow_u) + " - " + random_expr(rng, depth - 1, allow_u);
        case 5: return random_expr(rng, depth - 1, allow_u) + " * " + random_expr(rng, depth - 1, allow_u);
        case 6: return random_expr(rng, depth - 1, allow_u) + " / " + random_expr(rng, depth - 1, allow_u);
        case 7: return "-" + random_expr(rng, depth - 1, allow_u);
        case 8: return "sin(" + random_expr(rng, depth - 1, allow_u) + ")";
        default: return "(" + random_expr(rng, depth - 1, allow_u) + ")^2";
    }
}

} // namespace

TEST_CASE("parser accepts the bundled velocity laws") {
    CHECK(Expr::parse("x + t").str() == "x + t");
    CHECK(Expr::parse("t^2").str() == "t^2");
    CHECK(Expr::parse("x^2 + t^2").str() == "x^2 + t^2");
    CHECK(Expr::parse("  x+t ").same_tree(Expr::parse("x + t")));
    CHECK(Expr::parse("sin(x^2)").str() == "sin(x^2)");
    CHECK(Expr::parse("exp(x)").str() == "exp(x)");
}

TEST_CASE("parse errors carry a byte offset") {
    try {
        Expr::parse("2 + * 3");
        FAIL("expected ParseError");
    } catch (const advect::ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(Expr::parse(""), advect::ParseError);
    CHECK_THROWS_AS(Expr::parse("   "), advect::ParseError);
    CHECK_THROWS_AS(Expr::parse("x +"), advect::ParseError);
    CHECK_THROWS_AS(Expr::parse("(x"), advect::ParseError);
    CHECK_THROWS_AS(Expr::parse("x 3"), advect::ParseError);

    try {
        Expr::parse("sinh(x)");
        FAIL("expected ParseError");
    } catch (const advect::ParseError& e) {
        CHECK(e.offset == 0);
        CHECK(std::string(e.what()).find("sinh") != std::string::npos);
    }
    CHECK_THROWS_AS(Expr::parse("sin x"), advect::ParseError);
    CHECK_THROWS_AS(Expr::parse("y + 1"), advect::ParseError);
}

TEST_CASE("evaluation follows ordinary arithmetic") {
    CHECK(Expr::parse("x^2 + t^2").eval(2, 3, 0) == 13.0);
    CHECK(Expr::parse("x + t").eval(4 * kPi, 15, 0) == 4 * kPi + 15.0);
    CHECK(Expr::parse("u").eval(1, 2, 7.5) == 7.5);
    CHECK(Expr::parse("2^3^2").eval(0, 0, 0) == 512.0); // right-associative
    CHECK(Expr::parse("2^-2").eval(0, 0, 0) == 0.25);
    CHECK(Expr::parse("-x^2").eval(2, 0, 0) == -4.0); // -(x^2)
    CHECK(Expr::parse("(-x)^2").eval(2, 0, 0) == 4.0);
    CHECK(Expr::parse("(0 - 2)^3").eval(0, 0, 0) == -8.0);

    CHECK_THROWS_AS(Expr::parse("1/x").eval(0, 0, 0), advect::EvalError);
    CHECK_THROWS_AS(Expr::parse("(0 - 2)^0.5").eval(0, 0, 0), advect::EvalError);
    CHECK_THROWS_AS(Expr::parse("exp(x)").eval(1e6, 0, 0), advect::EvalError); // overflow
}

TEST_CASE("integer powers are repeated multiplication") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    const Expr sq = Expr::parse("x^2");
    const Expr cube = Expr::parse("x^3");
    for (int k = 0; k < 100; ++k) {
        const double x = dist(rng);
        CHECK(sq.eval(x, 0, 0) == x * x);
        CHECK(cube.eval(x, 0, 0) == x * x * x);
    }
}

TEST_CASE("classification by variable occurrence") {
    CHECK(Expr::parse("1").dependence() == DependenceClass::Constant);
    CHECK(Expr::parse("x + t").dependence() == DependenceClass::SpaceTime);
    CHECK(Expr::parse("u").dependence() == DependenceClass::StateDependent);
    CHECK(Expr::parse("x").dependence() == DependenceClass::SpaceOnly);
    CHECK(Expr::parse("t^2").dependence() == DependenceClass::TimeOnly);
    CHECK(Expr::parse("x * u + t").dependence() == DependenceClass::StateDependent);
    CHECK(Expr::parse("sin(cos(exp(t)))").dependence() == DependenceClass::TimeOnly);
}

TEST_CASE("classify without u never reports state dependence") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const Expr e = Expr::parse(random_expr(rng, 5, false));
        CHECK(e.dependence() != DependenceClass::StateDependent);
    }
}

TEST_CASE("print/parse round trip is structural identity") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 300; ++k) {
        const Expr e = Expr::parse(random_expr(rng, 6, true));
        const Expr back = Expr::parse(e.str());
        REQUIRE(back.same_tree(e));
    }
}

TEST_CASE("eval equals direct arithmetic for the velocity laws") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    const Expr laws[] = {Expr::parse("1"),   Expr::parse("x"),     Expr::parse("t^2"),
                         Expr::parse("x^2"), Expr::parse("x + t"), Expr::parse("x^2 + t^2")};
    for (int k = 0; k < 100; ++k) {
        const double x = dist(rng), t = dist(rng), u = dist(rng);
        CHECK(laws[0].eval(x, t, u) == 1.0);
        CHECK(laws[1].eval(x, t, u) == x);
        CHECK(laws[2].eval(x, t, u) == t * t);
        CHECK(laws[3].eval(x, t, u) == x * x);
        CHECK(laws[4].eval(x, t, u) == x + t);
        CHECK(laws[5].eval(x, t, u) == x * x + t * t);
    }
}

TEST_CASE("max_abs_on_box samples the lattice") {
    using advect::Interval;
    const auto one = advect::max_abs_on_box(Expr::parse("1"), {0, 1}, {0, 1}, {0, 1}, 2);
    CHECK(one.value == 1.0);

    const auto xt = advect::max_abs_on_box(Expr::parse("x + t"), {0, 4 * kPi}, {0, 15}, {0, 0}, 8);
    CHECK(xt.value == 4 * kPi + 15.0); // attained at the corner
    CHECK(xt.x == Approx(4 * kPi));
    CHECK(xt.t == Approx(15.0));

    const auto t2 = advect::max_abs_on_box(Expr::parse("t^2"), {0, 1}, {0, 100}, {0, 0}, 4);
    CHECK(t2.value == 10000.0);

    // Sign is irrelevant: the maximum is of |value|.
    const auto neg = advect::max_abs_on_box(Expr::parse("-x"), {0, 3}, {0, 0}, {0, 0}, 5);
    CHECK(neg.value == 3.0);

    CHECK_THROWS_AS(advect::max_abs_on_box(Expr::parse("1"), {0, 1}, {0, 1}, {0, 1}, 1),
                    advect::DomainError);
    CHECK_THROWS_AS(advect::max_abs_on_box(Expr::parse("1/x"), {0, 1}, {0, 1}, {0, 1}, 2),
                    advect::EvalError);
}
