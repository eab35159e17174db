#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "falpha/falpha_ops.hpp"
#include "falpha/linalg.hpp"
#include "falpha/staircase.hpp"

namespace falpha {

// Eigenvalues of the coefficient matrix, clustered by algebraic multiplicity,
// together with the characteristic coefficients that produced them.
struct Spectrum {
    struct Root {
        std::complex<double> value;
        int multiplicity = 1;
    };
    std::vector<Root> roots;
    std::vector<double> char_coeffs;        // monic, ascending powers
    std::vector<std::string> diagnostics;   // e.g. near-multiple warnings
};

// One solution mode of D_F^alpha x = A x. A RealMode contributes the single
// solution xi exp(r S(t)); a ComplexPairMode the two real solutions
// exp(aS)(u0 cos bS - v0 sin bS) and exp(aS)(u0 sin bS + v0 cos bS); a
// ChainMode of length m the solutions
//   sum_{j<=i} xi^(j) S^{i-j}/(i-j)! * exp(rS),  i = 0..m-1.
struct RealMode {
    double r = 0.0;
    Vec xi;
};

struct ComplexPairMode {
    double a = 0.0;
    double b = 0.0;  // > 0
    Vec u0;          // real part of the eigenvector
    Vec v0;          // imaginary part
};

struct ChainMode {
    double r = 0.0;
    std::vector<Vec> chain;  // xi^(0) .. xi^(m-1)
};

using Mode = std::variant<RealMode, ComplexPairMode, ChainMode>;

std::size_t mode_solution_count(const Mode& mode);

// Fundamental system of n real solutions, evaluated through a staircase.
class ModeBasis {
public:
    // Validates that the modes yield exactly `dimension` solutions and that
    // the Wronskian at the staircase anchor is nonzero.
    ModeBasis(std::vector<Mode> modes, Staircase stair);

    // Skips the Wronskian invariant; for negative controls and for loading
    // externally supplied (possibly broken) solution families to verify.
    static ModeBasis unvalidated(std::vector<Mode> modes, Staircase stair);

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<Mode>& modes() const noexcept { return modes_; }
    const Staircase& staircase() const noexcept { return stair_; }

    // Fundamental matrix X(t): columns are the mode solutions at S(t).
    Mat fundamental_matrix(double t) const;
    Mat fundamental_matrix_at_s(double s) const;

private:
    ModeBasis(std::vector<Mode> modes, Staircase stair, bool validate);

    std::vector<Mode> modes_;
    Staircase stair_;
    std::size_t dimension_ = 0;
};

struct GeneralSolution {
    ModeBasis basis;
    Vec coefficients;
};

// Constant-coefficient system D_F^alpha x(t) = A x(t) with its staircase and
// initial data.
struct SystemSpec {
    Mat matrix;
    double alpha = 0.0;
    Staircase staircase;
    double t0 = 0.0;
    std::optional<Vec> x0;

    void validate() const;
};

// Monic coefficients (ascending powers) of det(rI - A) via the
// Faddeev-LeVerrier recurrence. Dimension capped at 12.
std::vector<double> characteristic_polynomial(const Mat& A);

// All complex roots of a monic polynomial by Durand-Kerner iteration,
// conjugate-paired and clustered into multiplicity groups.
Spectrum eigenvalues(std::span<const double> coeffs);

// Nullspace basis of (A - rI) with pivot threshold 1e-9 * |A - rI|_inf;
// vectors normalized so the first component of largest magnitude equals 1.
std::vector<CVec> eigenvectors(const Mat& A, std::complex<double> r);

// Chain extension: solves (A - rI) eta = xi with free variables fixed to
// zero, then removes the xi-direction freedom so the eigenvector's unit
// component of eta vanishes (the paper's arbitrary constant set to 0).
Vec jordan_chain(const Mat& A, double r, const Vec& xi);

// Full mode decomposition: distinct real roots become RealModes, conjugate
// pairs ComplexPairModes, defective real roots ChainModes. The assembled
// basis is validated (n solutions, nonzero Wronskian at the anchor).
ModeBasis build_mode_basis(const Mat& A, const Staircase& stair);

// Coefficients c with X(t0) c = x0.
Vec fit_initial_conditions(const ModeBasis& basis, double t0, const Vec& x0);

Vec evaluate(const GeneralSolution& solution, double t);

// det X(t).
double wronskian(const ModeBasis& basis, double t);

struct AbelReport {
    double absolute = 0.0;
    double relative = 0.0;
    double wronskian_t0 = 0.0;
    double wronskian_t1 = 0.0;
    double exponent = 0.0;  // integral of the trace against d_F^alpha t
};

// Checks W(t1) = W(t0) exp(Int_{t0}^{t1} trace d_F^alpha t).
AbelReport abel_check(double constant_trace, const ModeBasis& basis, double t0, double t1);
AbelReport abel_check(const SampledFn& trace_fn, const ModeBasis& basis, double t0,
                      double t1);

enum class DichotomyVerdict { NeverZero, IdenticallyZero, Violation };

// Evaluates the Wronskian at the samples: never-zero / identically-zero /
// violation (a violation signals a bug, not a property of valid bases).
DichotomyVerdict dichotomy_scan(const ModeBasis& basis, std::span<const double> samples);

struct SampleResidual {
    double t = 0.0;
    double residual = 0.0;
    bool converged = true;
    std::string note;
};

struct ResidualReport {
    double max_residual = 0.0;
    bool all_converged = true;
    std::vector<SampleResidual> samples;
};

// Sup-norm of numeric D_F^alpha x(t) - A x(t) over sample points of F.
ResidualReport residual_check(const GeneralSolution& solution, const Mat& A,
                              std::span<const double> t_samples,
                              const DerivOptions& options = {});

// Normalized defect of the mode's defining identities against A
// (|A xi - r xi| and chain links), scaled by (1 + |A|) |xi|.
double spectral_residual(const Mat& A, const Mode& mode);

}  // namespace falpha
