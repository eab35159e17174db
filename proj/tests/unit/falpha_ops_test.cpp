#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "falpha/falpha_ops.hpp"

using namespace falpha;

namespace {

const double kCantorAlpha = std::log(2.0) / std::log(3.0);

Staircase cantor_stair() {
    return make_staircase(IfsSpec::middle_third_cantor(), kCantorAlpha, 0.0);
}

SampledFn fn(const Staircase& stair, std::function<double(double)> f) {
    return {std::move(f), stair.spec().base()};
}

// Brute-force quotient oracle: plain difference quotients at fixed snapped
// steps, no extrapolation, no adaptive stop.
double brute_force_quotient(const SampledFn& f, const Staircase& stair, double x,
                            int level) {
    Interval cover = covering_interval(stair.spec(), x, level);
    double y = (x - cover.left >= cover.right - x) ? cover.left : cover.right;
    double ds = staircase_eval(stair, y) - staircase_eval(stair, x);
    return (f(y) - f(x)) / ds;
}

}  // namespace

TEST_CASE("derivative of the staircase itself is 1 on the set") {
    auto stair = cantor_stair();
    auto f = fn(stair, [&](double t) { return staircase_eval(stair, t); });
    for (double x : construction_points(stair.spec(), 6, 10)) {
        auto d = f_alpha_derivative(f, stair, x);
        CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.step_used > 0.0);
    }
}

TEST_CASE("conjugacy: derivative of exp(3S) is 3 exp(3S)") {
    auto stair = cantor_stair();
    auto f = fn(stair, [&](double t) { return std::exp(3.0 * staircase_eval(stair, t)); });
    auto d0 = f_alpha_derivative(f, stair, 0.0);
    CHECK(d0.value == doctest::Approx(3.0).epsilon(1e-6));
    for (double x : construction_points(stair.spec(), 5, 8)) {
        auto d = f_alpha_derivative(f, stair, x);
        double expected = 3.0 * std::exp(3.0 * staircase_eval(stair, x));
        CHECK(d.value == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("derivative agrees with the brute-force quotient limit") {
    auto stair = cantor_stair();
    auto f = fn(stair, [&](double t) {
        double s = staircase_eval(stair, t);
        return s * s * s - 2.0 * s + 0.5;
    });
    for (double x : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
        auto d = f_alpha_derivative(f, stair, x);
        double brute = brute_force_quotient(f, stair, x, 30);
        CHECK(d.value == doctest::Approx(brute).epsilon(1e-5));
    }
}

TEST_CASE("derivative vanishes off the set") {
    auto stair = cantor_stair();
    auto f = fn(stair, [&](double t) { return std::exp(staircase_eval(stair, t)); });
    for (double x : {0.5, 0.4, 1.0 / 3.0 + 1e-3, 0.12}) {
        auto d = f_alpha_derivative(f, stair, x);
        CHECK(d.value == 0.0);
        CHECK(d.step_used == 0.0);
    }
}

TEST_CASE("degenerate staircase reports vanished increments") {
    Staircase flat(IfsSpec::middle_third_cantor(), kCantorAlpha, 0.0, 0.0, 48);
    auto f = fn(flat, [](double t) { return t; });
    CHECK_THROWS_AS(f_alpha_derivative(f, flat, 0.0), DegeneratePointError);
}

TEST_CASE("rough evaluator fails to converge and carries the quotient trace") {
    auto stair = cantor_stair();
    auto rough = fn(stair, [](double t) { return std::sin(1e9 * t); });
    try {
        f_alpha_derivative(rough, stair, 0.0);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.trace().size() >= 2);
    }
}

TEST_CASE("non-finite evaluator is rejected") {
    auto stair = cantor_stair();
    auto f = fn(stair, [](double) { return std::numeric_limits<double>::infinity(); });
    CHECK_THROWS_AS(f_alpha_derivative(f, stair, 0.0), ArgumentError);
    CHECK_THROWS_AS(f_alpha_integral(f, stair, 0.0, 1.0, 6), ArgumentError);
}

TEST_CASE("derivative and integral are linear") {
    auto stair = cantor_stair();
    auto f = fn(stair, [&](double t) { return std::exp(staircase_eval(stair, t)); });
    auto g = fn(stair, [&](double t) {
        double s = staircase_eval(stair, t);
        return s * s;
    });
    const double c1 = 1.75, c2 = -0.4;
    auto combo = fn(stair, [&](double t) { return c1 * f(t) + c2 * g(t); });

    for (double x : {0.0, 2.0 / 3.0}) {
        double lhs = f_alpha_derivative(combo, stair, x).value;
        double rhs = c1 * f_alpha_derivative(f, stair, x).value +
                     c2 * f_alpha_derivative(g, stair, x).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }
    auto int_combo = f_alpha_integral(combo, stair, 0.0, 1.0, 14);
    auto int_f = f_alpha_integral(f, stair, 0.0, 1.0, 14);
    auto int_g = f_alpha_integral(g, stair, 0.0, 1.0, 14);
    CHECK(int_combo.value() ==
          doctest::Approx(c1 * int_f.value() + c2 * int_g.value())
              .epsilon(1e-6));
}

TEST_CASE("integral of 1 telescopes to the staircase increment") {
    auto stair = cantor_stair();
    auto one = fn(stair, [](double) { return 1.0; });
    for (auto [a, b] : {std::pair{0.0, 1.0}, {0.1, 0.8}, {1.0 / 3.0, 1.0}}) {
        auto bounds = f_alpha_integral(one, stair, a, b, 12);
        double expected = staircase_eval(stair, b) - staircase_eval(stair, a);
        CHECK(bounds.lower == doctest::Approx(expected).epsilon(1e-12));
        CHECK(bounds.upper == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("integral of a constant scales the increment") {
    auto stair = cantor_stair();
    auto c = fn(stair, [](double) { return -2.5; });
    auto bounds = f_alpha_integral(c, stair, 0.0, 1.0, 10);
    CHECK(bounds.value() ==
          doctest::Approx(-2.5 * stair.total_mass()).epsilon(1e-12));
}

TEST_CASE("integral of S over [0,1] is M^2/2 within the reported bound") {
    auto stair = cantor_stair();
    auto s_fn = fn(stair, [&](double t) { return staircase_eval(stair, t); });
    auto bounds = f_alpha_integral(s_fn, stair, 0.0, 1.0, 16);
    double m = stair.total_mass();
    CHECK(bounds.lower <= m * m / 2.0);
    CHECK(m * m / 2.0 <= bounds.upper);
    CHECK(std::abs(bounds.value() - m * m / 2.0) <= bounds.width());
    // High-depth Darboux bracketing shrinks around the same value.
    auto fine = f_alpha_integral(s_fn, stair, 0.0, 1.0, 20);
    CHECK(fine.width() < bounds.width());
    CHECK(fine.lower <= m * m / 2.0);
    CHECK(m * m / 2.0 <= fine.upper);
}

TEST_CASE("fundamental pairing: integral of the derivative recovers increments") {
    auto stair = cantor_stair();
    // g = polynomial in S of degree 3.
    auto g = [&](double t) {
        double s = staircase_eval(stair, t);
        return ((s - 1.0) * s + 2.0) * s;
    };
    auto dg = fn(stair, [&](double t) {
        try {
            return f_alpha_derivative(fn(stair, g), stair, t).value;
        } catch (const DegeneratePointError&) {
            return 0.0;
        }
    });
    double a = 0.0, b = 1.0;
    auto bounds = f_alpha_integral(dg, stair, a, b, 10);
    CHECK(bounds.value() == doctest::Approx(g(b) - g(a)).epsilon(1e-5));
}

TEST_CASE("gap subintervals contribute exactly zero") {
    auto stair = cantor_stair();
    auto f = fn(stair, [](double t) { return 10.0 + t; });
    auto bounds = f_alpha_integral(f, stair, 0.4, 0.6, 12);
    CHECK(bounds.lower == 0.0);
    CHECK(bounds.upper == 0.0);
}

TEST_CASE("integral refinement reaches tolerance or reports both sums") {
    auto stair = cantor_stair();
    auto s_fn = fn(stair, [&](double t) { return staircase_eval(stair, t); });
    auto bounds = f_alpha_integral_to_tol(s_fn, stair, 0.0, 1.0, 1e-4);
    CHECK(bounds.width() <= 1e-4);
    try {
        f_alpha_integral_to_tol(s_fn, stair, 0.0, 1.0, 1e-12, 10);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        REQUIRE(e.trace().size() == 2);
        CHECK(e.trace()[0] <= e.trace()[1]);
    }
}

TEST_CASE("matrix derivative: constants, staircase diagonal, conjugate entries") {
    auto stair = cantor_stair();
    auto zero = [&] { return fn(stair, [](double) { return 7.0; }); };
    FractalMatrixFn constant{2, 2, {zero(), zero(), zero(), zero()}};
    auto dc = matrix_derivative(constant, stair, 0.0);
    for (const auto& row : dc)
        for (double v : row) CHECK(v == 0.0);

    auto s_entry = fn(stair, [&](double t) { return staircase_eval(stair, t); });
    auto zero_entry = fn(stair, [](double) { return 0.0; });
    FractalMatrixFn diag{2, 2, {s_entry, zero_entry, zero_entry, s_entry}};
    auto dd = matrix_derivative(diag, stair, 2.0 / 3.0);
    CHECK(dd[0][0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dd[1][1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dd[0][1] == 0.0);
    CHECK(dd[1][0] == 0.0);

    auto plus = fn(stair, [&](double t) { return std::exp(staircase_eval(stair, t)); });
    auto minus = fn(stair, [&](double t) { return std::exp(-staircase_eval(stair, t)); });
    FractalMatrixFn exps{1, 2, {plus, minus}};
    auto de = matrix_derivative(exps, stair, 0.0);
    CHECK(de[0][0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(de[0][1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("matrix derivative propagates entry context") {
    auto stair = cantor_stair();
    auto good = fn(stair, [](double) { return 1.0; });
    auto bad = fn(stair, [](double) { return std::numeric_limits<double>::quiet_NaN(); });
    FractalMatrixFn m{2, 2, {good, good, good, bad}};
    try {
        matrix_derivative(m, stair, 0.0);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
    }
}

TEST_CASE("matrix integral: zero, ones, scaled diagonal") {
    auto stair = cantor_stair();
    double m = stair.total_mass();
    auto zero = fn(stair, [](double) { return 0.0; });
    auto one = fn(stair, [](double) { return 1.0; });
    auto two = fn(stair, [](double) { return 2.0; });

    FractalMatrixFn zmat{2, 2, {zero, zero, zero, zero}};
    auto [zlo, zhi] = matrix_integral(zmat, stair, 0.0, 1.0, 8);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(zlo[i][j] == 0.0);
            CHECK(zhi[i][j] == 0.0);
        }

    FractalMatrixFn ones{2, 2, {one, one, one, one}};
    auto [olo, ohi] = matrix_integral(ones, stair, 0.0, 1.0, 8);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(olo[i][j] == doctest::Approx(m).epsilon(1e-12));
            CHECK(ohi[i][j] == doctest::Approx(m).epsilon(1e-12));
        }

    FractalMatrixFn diag{2, 2, {one, zero, zero, two}};
    auto [dlo, dhi] = matrix_integral(diag, stair, 0.0, 1.0, 8);
    CHECK(dlo[0][0] == doctest::Approx(m).epsilon(1e-12));
    CHECK(dhi[1][1] == doctest::Approx(2.0 * m).epsilon(1e-12));
    CHECK(dlo[0][1] == 0.0);
}

TEST_CASE("integral argument validation") {
    auto stair = cantor_stair();
    auto one = fn(stair, [](double) { return 1.0; });
    CHECK_THROWS_AS(f_alpha_integral(one, stair, 0.9, 0.1, 8), ArgumentError);
    CHECK_THROWS_AS(f_alpha_integral(one, stair, 0.0, 1.0, 30), ArgumentError);
}
