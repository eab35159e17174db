// Acceptance suite: runs the release criteria end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expm.hpp"
#include "falpha/linsolve.hpp"
#include "lanczos_gamma.hpp"

using namespace falpha;

namespace {

const double kCantorAlpha = std::log(2.0) / std::log(3.0);
const double kSqrt2 = std::sqrt(2.0);

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void note(const std::string& what) {
        if (ok && detail.empty()) detail = what;
    }
};

Mat mat2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

double angle_between(const Vec& v, const Vec& ref) {
    double dot = 0.0, nv = 0.0, nr = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dot += v[i] * ref[i];
        nv += v[i] * v[i];
        nr += ref[i] * ref[i];
    }
    return std::acos(std::min(1.0, std::abs(dot) / std::sqrt(nv * nr)));
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

const Staircase& cantor_stair() {
    static Staircase stair =
        make_staircase(IfsSpec::middle_third_cantor(), kCantorAlpha, 0.0);
    return stair;
}

bool has_root(const Spectrum& s, std::complex<double> v, double tol) {
    for (const auto& r : s.roots) {
        if (std::abs(r.value - v) <= tol) return true;
    }
    return false;
}

// --- criteria -------------------------------------------------------------

void criterion1_example1(Checker& c) {
    const auto& stair = cantor_stair();
    Mat A = mat2(1, 1, 4, 1);
    auto spectrum = eigenvalues(characteristic_polynomial(A));
    c.require(has_root(spectrum, {3.0, 0.0}, 1e-10), "eigenvalue 3 missing at 1e-10");
    c.require(has_root(spectrum, {-1.0, 0.0}, 1e-10), "eigenvalue -1 missing at 1e-10");

    auto basis = build_mode_basis(A, stair);
    const auto* m0 = std::get_if<RealMode>(&basis.modes()[0]);
    const auto* m1 = std::get_if<RealMode>(&basis.modes()[1]);
    c.require(m0 && m1, "expected two real modes");
    if (m0 && m1) {
        c.require(angle_between(m0->xi, {1, 2}) <= 1e-9, "eigenvector not parallel to (1,2)");
        c.require(angle_between(m1->xi, {1, -2}) <= 1e-9, "eigenvector not parallel to (1,-2)");
    }

    // Paper scaling pins the Wronskian value.
    ModeBasis paper({RealMode{3.0, {1, 2}}, RealMode{-1.0, {1, -2}}}, stair);
    double worst = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        double expected = -4.0 * std::exp(2.0 * s);
        worst = std::max(worst,
                         std::abs(wronskian(paper, t) - expected) / std::abs(expected));
    }
    c.require(worst <= 1e-9, "Wronskian deviates from -4 exp(2S): rel " + fmt(worst));
    c.note("wronskian rel err " + fmt(worst));
}

void criterion2_example2(Checker& c) {
    const auto& stair = cantor_stair();
    Mat A = mat2(-3, kSqrt2, kSqrt2, -2);
    auto spectrum = eigenvalues(characteristic_polynomial(A));
    c.require(has_root(spectrum, {-1.0, 0.0}, 1e-10), "eigenvalue -1 missing at 1e-10");
    c.require(has_root(spectrum, {-4.0, 0.0}, 1e-10), "eigenvalue -4 missing at 1e-10");

    auto basis = build_mode_basis(A, stair);
    const auto* m0 = std::get_if<RealMode>(&basis.modes()[0]);
    const auto* m1 = std::get_if<RealMode>(&basis.modes()[1]);
    c.require(m0 && m1, "expected two real modes");
    if (m0 && m1) {
        c.require(angle_between(m0->xi, {1, kSqrt2}) <= 1e-9,
                  "eigenvector not parallel to (1, sqrt2)");
        c.require(angle_between(m1->xi, {-kSqrt2, 1}) <= 1e-9,
                  "eigenvector not parallel to (-sqrt2, 1)");
    }

    ModeBasis paper({RealMode{-1.0, {1, kSqrt2}}, RealMode{-4.0, {-kSqrt2, 1}}}, stair);
    auto abel = abel_check(-5.0, paper, 0.0, 8.0 / 9.0);
    c.require(abel.relative <= 1e-9, "Abel residual " + fmt(abel.relative));
    // Derived Wronskian vs the direct determinant: W = 3 exp(-5S).
    double worst = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        double expected = 3.0 * std::exp(-5.0 * s);
        worst = std::max(worst,
                         std::abs(wronskian(paper, t) - expected) / std::abs(expected));
    }
    c.require(worst <= 1e-9, "Wronskian deviates from 3 exp(-5S): rel " + fmt(worst));
    c.note("abel rel " + fmt(abel.relative));
}

void criterion3_example3(Checker& c) {
    const auto& stair = cantor_stair();
    Mat A = mat2(-0.5, 1, -1, -0.5);
    auto spectrum = eigenvalues(characteristic_polynomial(A));
    c.require(has_root(spectrum, {-0.5, 1.0}, 1e-10), "eigenvalue -1/2+i missing");
    c.require(has_root(spectrum, {-0.5, -1.0}, 1e-10), "eigenvalue -1/2-i missing");

    auto basis = build_mode_basis(A, stair);
    double worst_point = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        Mat X = basis.fundamental_matrix(t);
        double e = std::exp(-0.5 * s);
        double expected[2][2] = {{e * std::cos(s), e * std::sin(s)},
                                 {-e * std::sin(s), e * std::cos(s)}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                worst_point = std::max(worst_point, std::abs(X(i, j) - expected[i][j]));
    }
    c.require(worst_point <= 1e-12,
              "solution pair deviates pointwise: " + fmt(worst_point));

    double worst_w = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        double expected = std::exp(-s);
        worst_w = std::max(worst_w,
                           std::abs(wronskian(basis, t) - expected) / expected);
    }
    c.require(worst_w <= 1e-9, "Wronskian deviates from exp(-S): rel " + fmt(worst_w));
    c.note("pointwise " + fmt(worst_point) + ", wronskian rel " + fmt(worst_w));
}

void criterion4_example4(Checker& c) {
    const auto& stair = cantor_stair();
    Mat A = mat2(1, -1, 1, 3);
    auto spectrum = eigenvalues(characteristic_polynomial(A));
    c.require(spectrum.roots.size() == 1, "expected one eigenvalue cluster");
    if (spectrum.roots.size() == 1) {
        c.require(spectrum.roots[0].multiplicity == 2, "cluster of size 2 not detected");
        c.require(std::abs(spectrum.roots[0].value - 2.0) <= 1e-10,
                  "double eigenvalue differs from 2");
    }
    Vec eta = jordan_chain(A, 2.0, {1.0, -1.0});
    c.require(std::abs(eta[0] - 0.0) <= 1e-9 && std::abs(eta[1] + 1.0) <= 1e-9,
              "chain vector differs from (0,-1)");

    ModeBasis paper({ChainMode{2.0, {{1, -1}, {0, -1}}}}, stair);
    double worst = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        double expected = -std::exp(4.0 * s);
        worst = std::max(worst,
                         std::abs(wronskian(paper, t) - expected) / std::abs(expected));
    }
    c.require(worst <= 1e-9, "Wronskian deviates from -exp(4S): rel " + fmt(worst));
    c.note("eta = (" + fmt(eta[0]) + ", " + fmt(eta[1]) + ")");
}

void criterion5_example5(Checker& c) {
    const auto& stair = cantor_stair();
    Mat A = mat2(2, 0, 0, -3);
    auto basis = build_mode_basis(A, stair);
    double worst = 0.0, off_diag = 0.0;
    for (double t : construction_points(stair.spec(), 10, 50)) {
        double s = staircase_eval(stair, t);
        double expected = std::exp(-s);
        worst = std::max(worst,
                         std::abs(wronskian(basis, t) - expected) / expected);
        Mat X = basis.fundamental_matrix(t);
        off_diag = std::max({off_diag, std::abs(X(0, 1)), std::abs(X(1, 0))});
    }
    c.require(worst <= 1e-9, "Wronskian deviates from exp(-S): rel " + fmt(worst));
    c.require(off_diag == 0.0, "fundamental matrix not diagonal");
    c.note("wronskian rel " + fmt(worst));
}

void criterion6_oracle_equivalence(Checker& c) {
    const auto& stair = cantor_stair();
    std::mt19937_64 rng(20240803);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    auto pts = construction_points(stair.spec(), 10, 10);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + std::size_t(trial % 5);
        Mat a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
        ModeBasis basis = build_mode_basis(a, stair);
        Mat x0 = basis.fundamental_matrix(0.0);
        for (double t : pts) {
            double ds = staircase_eval(stair, t);
            Mat scaled(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) scaled(i, j) = a(i, j) * ds;
            Mat expected = oracle::expm(scaled) * x0;
            Mat got = basis.fundamental_matrix(t);
            double scale = 1.0 + inf_norm(expected);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    worst = std::max(worst, std::abs(got(i, j) - expected(i, j)) / scale);
        }
    }
    c.require(worst <= 1e-7, "fundamental matrix vs expm oracle: rel " + fmt(worst));
    c.note("200 systems, worst rel " + fmt(worst));
}

void criterion7_staircase_properties(Checker& c) {
    const auto& stair = cantor_stair();
    std::mt19937_64 rng(987);
    std::uniform_real_distribution<double> u(-0.25, 1.25);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        double x = u(rng), y = u(rng);
        if (x > y) std::swap(x, y);
        if (staircase_eval(stair, x) > staircase_eval(stair, y)) ++violations;
    }
    c.require(violations == 0,
              "monotonicity violations: " + std::to_string(violations));

    double worst_gap = 0.0;
    for (int depth = 1; depth <= 10; ++depth) {
        auto approx = build_approximation(stair.spec(), depth);
        const auto& ivs = approx.intervals();
        for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
            worst_gap = std::max(worst_gap,
                                 std::abs(staircase_eval(stair, ivs[i].right) -
                                          staircase_eval(stair, ivs[i + 1].left)));
        }
    }
    c.require(worst_gap <= 1e-12, "gap constancy: " + fmt(worst_gap));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_ss = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double x = unit(rng);
        worst_ss = std::max(worst_ss, std::abs(staircase_eval(stair, x / 3.0) -
                                               staircase_eval(stair, x) / 2.0));
    }
    c.require(worst_ss <= 1e-10, "self-similarity: " + fmt(worst_ss));
    c.note("gap " + fmt(worst_gap) + ", selfsim " + fmt(worst_ss));
}

void criterion8_dimension(Checker& c) {
    auto timed = [&](const IfsSpec& spec) {
        auto start = std::chrono::steady_clock::now();
        auto est = gamma_dimension(spec, 0.0, 1.0, 1e-3);
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        c.require(elapsed < 10.0, "dimension estimate over the 10 s budget");
        return est;
    };
    auto cantor = timed(IfsSpec::middle_third_cantor());
    double err1 = std::abs(cantor.alpha_hat - kCantorAlpha);
    c.require(err1 <= 1e-3, "cantor dimension error " + fmt(err1));

    auto quarter = timed(IfsSpec::symmetric_pair(0.25));
    double err2 = std::abs(quarter.alpha_hat - 0.5);
    c.require(err2 <= 1e-3, "(1/4,1/4) dimension error " + fmt(err2));
    c.note("errors " + fmt(err1) + ", " + fmt(err2));
}

void criterion9_mass(Checker& c) {
    auto cantor = IfsSpec::middle_third_cantor();
    auto at_dim = mass(cantor, kCantorAlpha, 0.0, 1.0, 1e-9);
    double target = oracle::lanczos_gamma(kCantorAlpha + 1.0);
    // Independent gamma evaluation cross-checks std::tgamma.
    double gamma_gap = std::abs(target - std::tgamma(kCantorAlpha + 1.0));
    c.require(gamma_gap <= 1e-12, "gamma oracle disagreement " + fmt(gamma_gap));
    c.require(at_dim.converged, "mass at the dimension did not converge");
    double err = std::abs(at_dim.value - target);
    c.require(err <= 1e-6, "mass differs from Gamma(alpha+1): " + fmt(err));

    auto above = mass(cantor, 0.9, 0.0, 1.0, 1e-8);
    c.require(above.converged && above.value <= 1e-5,
              "mass at alpha 0.9 did not vanish: " + fmt(above.value));

    auto below = mass(cantor, 0.3, 0.0, 1.0, 1e-8);
    c.require(below.converged && std::isinf(below.value),
              "mass at alpha 0.3 did not hit the divergence sentinel");
    c.note("Gamma(a+1) = " + fmt(target) + ", err " + fmt(err));
}

void criterion10_differentiation(Checker& c) {
    const auto& stair = cantor_stair();
    SampledFn f{[&](double t) { return std::exp(3.0 * staircase_eval(stair, t)); },
                stair.spec().base()};
    double worst = 0.0;
    for (double t : construction_points(stair.spec(), 10, 20)) {
        auto d = f_alpha_derivative(f, stair, t);
        double expected = 3.0 * std::exp(3.0 * staircase_eval(stair, t));
        worst = std::max(worst, std::abs(d.value - expected) / std::abs(expected));
    }
    c.require(worst <= 1e-5, "derivative of exp(3S): rel " + fmt(worst));

    struct Case {
        Mat A;
        ModeBasis basis;
    };
    auto pts = construction_points(stair.spec(), 10, 20);
    std::vector<Mat> matrices = {mat2(1, 1, 4, 1), mat2(-3, kSqrt2, kSqrt2, -2),
                                 mat2(-0.5, 1, -1, -0.5), mat2(1, -1, 1, 3),
                                 mat2(2, 0, 0, -3)};
    double worst_resid = 0.0;
    for (const auto& A : matrices) {
        ModeBasis basis = build_mode_basis(A, stair);
        auto report = residual_check({basis, Vec{1.0, 1.0}}, A, pts);
        c.require(report.all_converged, "derivative non-convergence in residual check");
        worst_resid = std::max(worst_resid, report.max_residual);
    }
    c.require(worst_resid <= 1e-5,
              "paper-example residual sup norm " + fmt(worst_resid));
    c.note("deriv rel " + fmt(worst) + ", residual " + fmt(worst_resid));
}

void criterion11_theorem_checks(Checker& c) {
    const auto& stair = cantor_stair();
    auto pts = construction_points(stair.spec(), 10, 50);
    std::vector<Mat> matrices = {mat2(1, 1, 4, 1), mat2(-3, kSqrt2, kSqrt2, -2),
                                 mat2(-0.5, 1, -1, -0.5), mat2(1, -1, 1, 3),
                                 mat2(2, 0, 0, -3)};
    for (const auto& A : matrices) {
        ModeBasis basis = build_mode_basis(A, stair);
        c.require(dichotomy_scan(basis, pts) == DichotomyVerdict::NeverZero,
                  "constructed basis not never-zero");
    }
    auto broken = ModeBasis::unvalidated(
        {RealMode{3.0, {1, 2}}, RealMode{3.0, {1, 2}}}, stair);
    c.require(dichotomy_scan(broken, pts) == DichotomyVerdict::IdenticallyZero,
              "duplicated-column control not identically-zero");

    // Fit-then-evaluate round trip.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst_rt = 0.0;
    for (const auto& A : matrices) {
        ModeBasis basis = build_mode_basis(A, stair);
        Vec x0 = {u(rng), u(rng)};
        double t0 = 2.0 / 3.0;
        Vec coeffs = fit_initial_conditions(basis, t0, x0);
        Vec back = evaluate({basis, coeffs}, t0);
        for (std::size_t i = 0; i < 2; ++i) {
            worst_rt = std::max(worst_rt,
                                std::abs(back[i] - x0[i]) / (1.0 + inf_norm(x0)));
        }
    }
    c.require(worst_rt <= 1e-10, "round-trip error " + fmt(worst_rt));

    // Theorem 4: u and v of example 3 solve the system independently.
    Mat A3 = mat2(-0.5, 1, -1, -0.5);
    ModeBasis basis3 = build_mode_basis(A3, stair);
    auto sample_pts = construction_points(stair.spec(), 10, 20);
    auto u_part = residual_check({basis3, Vec{1.0, 0.0}}, A3, sample_pts);
    auto v_part = residual_check({basis3, Vec{0.0, 1.0}}, A3, sample_pts);
    c.require(u_part.max_residual <= 1e-5, "u(t) residual " + fmt(u_part.max_residual));
    c.require(v_part.max_residual <= 1e-5, "v(t) residual " + fmt(v_part.max_residual));
    c.note("round trip " + fmt(worst_rt));
}

void criterion12_degenerate_conjugacy(Checker& c) {
    // F = [0,1], alpha = 1: S(t) = t and the stack is ordinary calculus.
    Staircase line = make_staircase(IfsSpec::full_interval(), 1.0, 0.0);
    Mat A = mat2(1, 1, 4, 1);
    ModeBasis basis = build_mode_basis(A, line);
    Mat x0 = basis.fundamental_matrix(0.0);
    double worst = 0.0;
    for (double t : {0.1, 0.25, 0.37, 0.5, 0.75, 0.9, 1.0}) {
        Mat scaled(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) scaled(i, j) = A(i, j) * t;
        Mat expected = oracle::expm(scaled) * x0;
        Mat got = basis.fundamental_matrix(t);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                worst = std::max(worst, std::abs(got(i, j) - expected(i, j)) /
                                            (1.0 + std::abs(expected(i, j))));
    }
    c.require(worst <= 1e-9, "classical reduction: rel " + fmt(worst));
    c.note("rel " + fmt(worst));
}

struct Entry {
    int id;
    const char* label;
    std::function<void(Checker&)> run;
    double budget_seconds;  // 0 = unchecked
};

}  // namespace

int main() {
    std::vector<Entry> criteria = {
        {1, "example 1 regression (eigenpairs, Wronskian -4 exp 2S)", criterion1_example1, 1.0},
        {2, "example 2 regression (eigenpairs, Abel trace -5)", criterion2_example2, 0.0},
        {3, "example 3 regression (complex pair, pointwise solutions)", criterion3_example3, 0.0},
        {4, "example 4 regression (double root, chain (0,-1))", criterion4_example4, 0.0},
        {5, "example 5 regression (diagonal fundamental matrix)", criterion5_example5, 0.0},
        {6, "oracle equivalence vs matrix exponential (200 systems)", criterion6_oracle_equivalence, 30.0},
        {7, "staircase properties (monotone, gap-constant, self-similar)", criterion7_staircase_properties, 0.0},
        {8, "gamma-dimension estimates", criterion8_dimension, 0.0},
        {9, "mass convergence trichotomy", criterion9_mass, 0.0},
        {10, "numeric differentiation and residuals", criterion10_differentiation, 0.0},
        {11, "theorem checks as properties", criterion11_theorem_checks, 0.0},
        {12, "degenerate conjugacy (alpha = 1 carrier)", criterion12_degenerate_conjugacy, 0.0},
    };

    int failures = 0;
    for (auto& entry : criteria) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            entry.run(checker);
        } catch (const std::exception& e) {
            checker.require(false, std::string("exception: ") + e.what());
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (entry.budget_seconds > 0.0 && elapsed > entry.budget_seconds) {
            checker.require(false, "runtime " + std::to_string(elapsed) + " s over budget");
        }
        std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n",
                    checker.ok ? "PASS" : "FAIL", entry.id, entry.label, elapsed,
                    checker.detail.empty() ? "" : " -- ", checker.detail.c_str());
        if (!checker.ok) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
