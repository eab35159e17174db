#include "falpha/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace falpha {
namespace {

constexpr std::size_t kDimensionCap = 12;

void require_square(const Mat& A, const char* who) {
    if (A.rows() == 0 || A.rows() != A.cols()) {
        throw ArgumentError(std::string(who) + ": matrix must be square and nonempty");
    }
}

std::size_t first_max_component(const Vec& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    return arg;
}

std::size_t first_max_component(const CVec& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    return arg;
}

CVec normalized_unit_component(CVec v) {
    std::size_t j = first_max_component(v);
    std::complex<double> d = v[j];
    if (std::abs(d) == 0.0) throw NumericError("eigenvectors: zero vector in nullspace");
    for (auto& c : v) c /= d;
    return v;
}

Vec real_part_checked(const CVec& v, const char* who) {
    double scale = inf_norm(v);
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i].imag()) > 1e-9 * (1.0 + scale)) {
            throw NumericError(std::string(who) + ": expected a real vector");
        }
        out[i] = v[i].real();
    }
    return out;
}

std::complex<double> horner(std::span<const double> coeffs, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

std::vector<double> poly_derivative(std::span<const double> coeffs) {
    if (coeffs.size() <= 1) return {0.0};
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) d[i] = coeffs[i + 1] * double(i + 1);
    return d;
}

// Refines a multiplicity-m cluster representative by Newton iteration on the
// (m-1)-th derivative, where the root is simple; Durand-Kerner alone stalls
// at the rounding floor for multiple roots.
std::complex<double> polish_root(std::span<const double> monic, std::complex<double> z,
                                 int multiplicity) {
    std::vector<double> q(monic.begin(), monic.end());
    for (int k = 1; k < multiplicity; ++k) q = poly_derivative(q);
    std::vector<double> qp = poly_derivative(q);
    std::complex<double> best = z;
    double best_abs = std::abs(horner(q, z));
    for (int iter = 0; iter < 40; ++iter) {
        std::complex<double> fp = horner(qp, z);
        if (fp == std::complex<double>{}) break;
        std::complex<double> dz = horner(q, z) / fp;
        z -= dz;
        double fz = std::abs(horner(q, z));
        if (fz < best_abs) {
            best_abs = fz;
            best = z;
        }
        if (std::abs(dz) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return best;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

std::size_t mode_solution_count(const Mode& mode) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RealMode>) return 1;
            if constexpr (std::is_same_v<T, ComplexPairMode>) return 2;
            if constexpr (std::is_same_v<T, ChainMode>) return m.chain.size();
        },
        mode);
}

namespace {

void append_mode_columns(const Mode& mode, double s, std::vector<Vec>& cols) {
    if (const auto* rm = std::get_if<RealMode>(&mode)) {
        double g = std::exp(rm->r * s);
        Vec col(rm->xi.size());
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = rm->xi[i] * g;
        cols.push_back(std::move(col));
        return;
    }
    if (const auto* cm = std::get_if<ComplexPairMode>(&mode)) {
        double g = std::exp(cm->a * s);
        double c = std::cos(cm->b * s), sn = std::sin(cm->b * s);
        Vec u(cm->u0.size()), v(cm->u0.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] = g * (cm->u0[i] * c - cm->v0[i] * sn);
            v[i] = g * (cm->u0[i] * sn + cm->v0[i] * c);
        }
        cols.push_back(std::move(u));
        cols.push_back(std::move(v));
        return;
    }
    const auto& ch = std::get<ChainMode>(mode);
    double g = std::exp(ch.r * s);
    for (std::size_t i = 0; i < ch.chain.size(); ++i) {
        Vec col(ch.chain.front().size(), 0.0);
        for (std::size_t j = 0; j <= i; ++j) {
            double w = std::pow(s, double(i - j)) / factorial(int(i - j));
            for (std::size_t k = 0; k < col.size(); ++k) col[k] += ch.chain[j][k] * w;
        }
        for (double& x : col) x *= g;
        cols.push_back(std::move(col));
    }
}

double hadamard_scale(const Mat& X) {
    double scale = 1.0;
    for (std::size_t j = 0; j < X.cols(); ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) norm2 += X(i, j) * X(i, j);
        scale *= std::sqrt(norm2);
    }
    return scale;
}

}  // namespace

ModeBasis::ModeBasis(std::vector<Mode> modes, Staircase stair)
    : ModeBasis(std::move(modes), std::move(stair), true) {}

ModeBasis ModeBasis::unvalidated(std::vector<Mode> modes, Staircase stair) {
    return ModeBasis(std::move(modes), std::move(stair), false);
}

ModeBasis::ModeBasis(std::vector<Mode> modes, Staircase stair, bool validate)
    : modes_(std::move(modes)), stair_(std::move(stair)) {
    if (modes_.empty()) throw ArgumentError("ModeBasis: no modes");
    std::size_t count = 0;
    std::size_t n = 0;
    for (const auto& mode : modes_) {
        count += mode_solution_count(mode);
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                std::size_t sz = 0;
                if constexpr (std::is_same_v<T, RealMode>) sz = m.xi.size();
                if constexpr (std::is_same_v<T, ComplexPairMode>) {
                    sz = m.u0.size();
                    if (m.v0.size() != sz)
                        throw ArgumentError("ModeBasis: complex mode part size mismatch");
                    if (!(m.b > 0.0))
                        throw ArgumentError("ModeBasis: complex mode requires b > 0");
                }
                if constexpr (std::is_same_v<T, ChainMode>) {
                    if (m.chain.empty()) throw ArgumentError("ModeBasis: empty chain");
                    sz = m.chain.front().size();
                    for (const auto& link : m.chain)
                        if (link.size() != sz)
                            throw ArgumentError("ModeBasis: chain link size mismatch");
                }
                if (n == 0) n = sz;
                if (sz != n) throw ArgumentError("ModeBasis: mode dimension mismatch");
            },
            mode);
    }
    if (count != n) {
        throw ArgumentError("ModeBasis: modes must contribute exactly n solutions");
    }
    dimension_ = n;
    if (validate) {
        Mat X = fundamental_matrix(stair_.anchor());
        double det = lu_determinant(X);
        if (std::abs(det) <= 1e-10 * hadamard_scale(X)) {
            throw FundamentalSetError(
                "ModeBasis: Wronskian vanishes at the anchor; not a fundamental set");
        }
    }
}

Mat ModeBasis::fundamental_matrix_at_s(double s) const {
    std::vector<Vec> cols;
    cols.reserve(dimension_);
    for (const auto& mode : modes_) append_mode_columns(mode, s, cols);
    Mat X(dimension_, dimension_);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dimension_; ++i) X(i, j) = cols[j][i];
    return X;
}

Mat ModeBasis::fundamental_matrix(double t) const {
    return fundamental_matrix_at_s(staircase_eval(stair_, t));
}

void SystemSpec::validate() const {
    require_square(matrix, "SystemSpec");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ArgumentError("SystemSpec: alpha must lie in (0, 1]");
    }
    if (std::abs(alpha - staircase.alpha()) > 1e-12) {
        throw ArgumentError("SystemSpec: alpha disagrees with the staircase");
    }
    if (!std::isfinite(t0)) throw ArgumentError("SystemSpec: t0 must be finite");
    if (x0 && x0->size() != matrix.rows()) {
        throw ArgumentError("SystemSpec: x0 dimension disagrees with the matrix");
    }
}

std::vector<double> characteristic_polynomial(const Mat& A) {
    require_square(A, "characteristic_polynomial");
    const std::size_t n = A.rows();
    if (n > kDimensionCap) {
        throw ResourceError("characteristic_polynomial: dimension cap (12) exceeded");
    }
    // Faddeev-LeVerrier: M_1 = A, c_k = -tr(M_k)/k, M_{k+1} = A (M_k + c_k I).
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    Mat M = A;
    double ck = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            Mat shiftedM = M;
            for (std::size_t i = 0; i < n; ++i) shiftedM(i, i) += ck;
            M = A * shiftedM;
        }
        ck = -M.trace() / double(k);
        c[n - k] = ck;
    }
    return c;
}

namespace {

struct RawRoots {
    std::vector<std::complex<double>> roots;
    double max_abs = 0.0;
};

RawRoots durand_kerner(std::span<const double> coeffs) {
    const std::size_t degree = coeffs.size() - 1;
    std::vector<double> monic(coeffs.begin(), coeffs.end());
    if (monic[degree] == 0.0) {
        throw ArgumentError("eigenvalues: leading coefficient must be nonzero");
    }
    if (monic[degree] != 1.0) {
        for (auto& v : monic) v /= coeffs[degree];
    }
    if (degree == 1) return {{std::complex<double>(-monic[0], 0.0)}, std::abs(monic[0])};

    double radius = 0.0;
    for (std::size_t i = 0; i < degree; ++i) radius = std::max(radius, std::abs(monic[i]));
    radius = 0.8 * (1.0 + radius);

    std::vector<std::complex<double>> z(degree);
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < degree; ++j) {
        double angle = two_pi * double(j) / double(degree) + 0.35;
        z[j] = radius * std::complex<double>(std::cos(angle), std::sin(angle));
    }

    double best_delta = std::numeric_limits<double>::infinity();
    int best_sweep = 0;
    bool converged = false;
    for (int sweep = 0; sweep < 500; ++sweep) {
        double max_delta = 0.0;
        double max_abs = 0.0;
        for (std::size_t j = 0; j < degree; ++j) {
            std::complex<double> denom = 1.0;
            for (std::size_t k = 0; k < degree; ++k) {
                if (k != j) denom *= z[j] - z[k];
            }
            if (denom == std::complex<double>{}) {
                z[j] += 1e-8 * (1.0 + std::abs(z[j]));
                max_delta = std::numeric_limits<double>::max();
                continue;
            }
            std::complex<double> w = horner(monic, z[j]) / denom;
            z[j] -= w;
            max_delta = std::max(max_delta, std::abs(w));
            max_abs = std::max(max_abs, std::abs(z[j]));
        }
        if (max_delta <= 1e-14 * (1.0 + max_abs)) {
            converged = true;
            break;
        }
        if (max_delta < 0.5 * best_delta) {
            best_delta = max_delta;
            best_sweep = sweep;
        } else if (sweep - best_sweep > 60) {
            converged = true;  // stalled at the rounding floor (multiple roots)
            break;
        }
    }
    double max_abs = 0.0, max_resid = 0.0;
    for (const auto& zj : z) {
        max_abs = std::max(max_abs, std::abs(zj));
        max_resid = std::max(max_resid, std::abs(horner(monic, zj)));
    }
    double coeff_scale = 0.0;
    for (double v : monic) coeff_scale = std::max(coeff_scale, std::abs(v));
    double resid_bound =
        1e-6 * (1.0 + coeff_scale) * std::pow(std::max(1.0, max_abs), double(degree));
    if (!converged || max_resid > resid_bound) {
        std::ostringstream msg;
        msg << "eigenvalues: Durand-Kerner failed to converge; max residual " << max_resid;
        throw NumericError(msg.str());
    }
    return {std::move(z), max_abs};
}

}  // namespace

Spectrum eigenvalues(std::span<const double> coeffs) {
    if (coeffs.size() < 2) {
        throw ArgumentError("eigenvalues: polynomial degree must be at least 1");
    }
    RawRoots raw = durand_kerner(coeffs);
    auto& z = raw.roots;
    const double tol = 1e-7 * (1.0 + raw.max_abs);

    // Snap near-real roots, then enforce conjugate symmetry by pairing.
    for (auto& r : z) {
        if (std::abs(r.imag()) <= tol) r = {r.real(), 0.0};
    }
    std::vector<bool> paired(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (paired[i] || z[i].imag() <= 0.0) continue;
        std::size_t best = z.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (paired[j] || z[j].imag() >= 0.0) continue;
            double d = std::abs(z[i] - std::conj(z[j]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best < z.size()) {
            std::complex<double> mean = 0.5 * (z[i] + std::conj(z[best]));
            z[i] = mean;
            z[best] = std::conj(mean);
            paired[i] = paired[best] = true;
        }
    }

    // Greedy multiplicity clustering (union by distance <= tol).
    std::vector<int> cluster(z.size(), -1);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (cluster[i] >= 0) continue;
        groups.push_back({i});
        cluster[i] = int(groups.size()) - 1;
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (cluster[j] >= 0) continue;
            for (std::size_t member : groups.back()) {
                if (std::abs(z[j] - z[member]) <= tol) {
                    cluster[j] = cluster[i];
                    groups.back().push_back(j);
                    break;
                }
            }
        }
    }

    Spectrum spectrum;
    spectrum.char_coeffs.assign(coeffs.begin(), coeffs.end());
    std::vector<double> monic(coeffs.begin(), coeffs.end());
    for (auto& v : monic) v /= coeffs[coeffs.size() - 1];
    for (const auto& group : groups) {
        std::complex<double> mean = 0.0;
        for (std::size_t idx : group) mean += z[idx];
        mean /= double(group.size());
        mean = polish_root(monic, mean, int(group.size()));
        if (std::abs(mean.imag()) <= tol) mean = {mean.real(), 0.0};
        spectrum.roots.push_back({mean, int(group.size())});
    }
    // Re-pair conjugate cluster representatives after polishing.
    for (std::size_t i = 0; i < spectrum.roots.size(); ++i) {
        if (spectrum.roots[i].value.imag() <= 0.0) continue;
        for (std::size_t j = 0; j < spectrum.roots.size(); ++j) {
            if (spectrum.roots[j].value.imag() >= 0.0) continue;
            if (spectrum.roots[j].multiplicity != spectrum.roots[i].multiplicity) continue;
            if (std::abs(std::conj(spectrum.roots[j].value) - spectrum.roots[i].value) <=
                10.0 * tol) {
                std::complex<double> mean =
                    0.5 * (spectrum.roots[i].value + std::conj(spectrum.roots[j].value));
                spectrum.roots[i].value = mean;
                spectrum.roots[j].value = std::conj(mean);
                break;
            }
        }
    }
    // Near-multiple diagnostics: distinct clusters closer than 10x tolerance.
    for (std::size_t i = 0; i < spectrum.roots.size(); ++i) {
        for (std::size_t j = i + 1; j < spectrum.roots.size(); ++j) {
            double d = std::abs(spectrum.roots[i].value - spectrum.roots[j].value);
            if (d <= 10.0 * tol) {
                std::ostringstream msg;
                msg << "near-multiple roots: |r_i - r_j| = " << d << " within 10x cluster tolerance";
                spectrum.diagnostics.push_back(msg.str());
            }
        }
    }
    std::sort(spectrum.roots.begin(), spectrum.roots.end(),
              [](const Spectrum::Root& a, const Spectrum::Root& b) {
                  if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
                  double ia = std::abs(a.value.imag()), ib = std::abs(b.value.imag());
                  if (ia != ib) return ia < ib;
                  return a.value.imag() > b.value.imag();
              });
    return spectrum;
}

std::vector<CVec> eigenvectors(const Mat& A, std::complex<double> r) {
    require_square(A, "eigenvectors");
    CMat M = shifted(A, r);
    double pivot_tol = 1e-9 * std::max(inf_norm(M), 1e-300);
    std::vector<CVec> basis = nullspace_basis(std::move(M), pivot_tol);
    if (basis.empty()) {
        throw NumericError("eigenvectors: empty nullspace at the claimed eigenvalue");
    }
    for (auto& v : basis) v = normalized_unit_component(std::move(v));
    return basis;
}

namespace {

Vec jordan_chain_impl(const Mat& A, double r, const Vec& xi,
                      const std::vector<Vec>& freedom) {
    CMat M = shifted(A, r);
    double pivot_tol = 1e-9 * std::max(inf_norm(M), 1e-300);
    CVec rhs(xi.begin(), xi.end());
    auto solution = solve_free_vars_zero(M, rhs, pivot_tol);
    if (!solution) {
        throw DefectStructureError(
            "jordan_chain: (A - rI) eta = xi is inconsistent (xi not in the range; "
            "eigenspace may already be full)");
    }
    Vec eta = real_part_checked(*solution, "jordan_chain");
    // Remove homogeneous freedom so eta vanishes at each base vector's unit
    // component: the paper's arbitrary constant fixed to 0.
    for (const Vec& base : freedom) {
        std::size_t j = first_max_component(base);
        if (base[j] == 0.0) continue;
        double factor = eta[j] / base[j];
        for (std::size_t i = 0; i < eta.size(); ++i) eta[i] -= factor * base[i];
    }
    // Residual gate.
    Vec lhs = A * eta;
    double resid = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        resid = std::max(resid, std::abs(lhs[i] - r * eta[i] - xi[i]));
    }
    double scale = (1.0 + inf_norm(A)) * (inf_norm(eta) + inf_norm(xi));
    if (resid > 1e-9 * std::max(scale, 1e-300)) {
        throw DefectStructureError("jordan_chain: chain residual above tolerance");
    }
    return eta;
}

}  // namespace

Vec jordan_chain(const Mat& A, double r, const Vec& xi) {
    require_square(A, "jordan_chain");
    if (xi.size() != A.rows()) throw ArgumentError("jordan_chain: xi dimension mismatch");
    Vec lhs = A * xi;
    double eig_resid = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        eig_resid = std::max(eig_resid, std::abs(lhs[i] - r * xi[i]));
    }
    if (eig_resid > 1e-7 * (1.0 + inf_norm(A)) * std::max(inf_norm(xi), 1e-300)) {
        throw ArgumentError("jordan_chain: xi is not an eigenvector of A for r");
    }
    return jordan_chain_impl(A, r, xi, {xi});
}

namespace {

struct EigenPair {
    std::complex<double> r;
    CVec v;
};

double pair_residual(const Mat& A, const EigenPair& p) {
    CMat M = shifted(A, p.r);
    CVec res = M * p.v;
    return inf_norm(res) / std::max(inf_norm(p.v), 1e-300);
}

// A couple of inverse-iteration + Rayleigh-quotient steps; keeps the pair
// only if the residual improves.
EigenPair polish_eigenpair(const Mat& A, EigenPair pair) {
    double best = pair_residual(A, pair);
    for (int iter = 0; iter < 2; ++iter) {
        CVec w = inverse_iteration_step(shifted(A, pair.r), pair.v);
        CVec aw = complexify(A) * w;
        std::complex<double> num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            num += std::conj(w[i]) * aw[i];
            den += std::conj(w[i]) * w[i];
        }
        if (den == std::complex<double>{}) break;
        EigenPair candidate{num / den, std::move(w)};
        double resid = pair_residual(A, candidate);
        if (resid < best) {
            best = resid;
            pair = std::move(candidate);
        } else {
            break;
        }
    }
    pair.v = normalized_unit_component(std::move(pair.v));
    return pair;
}

std::vector<Vec> real_nullspace(const Mat& A, double r) {
    std::vector<CVec> basis = eigenvectors(A, {r, 0.0});
    std::vector<Vec> out;
    out.reserve(basis.size());
    for (const auto& v : basis) out.push_back(real_part_checked(v, "eigenvectors"));
    return out;
}

std::vector<Mode> modes_for_defective_root(const Mat& A, double r, int multiplicity,
                                           std::vector<Vec> eigvecs) {
    std::vector<std::vector<Vec>> chains;
    for (auto& v : eigvecs) chains.push_back({std::move(v)});
    std::size_t total = chains.size();
    const std::size_t need = std::size_t(multiplicity);
    auto chain_bases = [&chains] {
        std::vector<Vec> bases;
        for (const auto& chain : chains) bases.push_back(chain.front());
        return bases;
    };
    int guard = 4 * multiplicity;
    while (total < need && guard-- > 0) {
        bool extended = false;
        for (auto& chain : chains) {
            try {
                Vec eta = jordan_chain_impl(A, r, chain.back(), chain_bases());
                chain.push_back(std::move(eta));
                ++total;
                extended = true;
                break;
            } catch (const DefectStructureError&) {
                continue;
            }
        }
        if (extended) continue;
        // Combination retry: find xi' = V c inside range(A - rI) via the
        // nullspace of the augmented block [A - rI | -V].
        const std::size_t n = A.rows();
        const std::size_t g = chains.size();
        CMat aug(n, n + g);
        CMat M = shifted(A, {r, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
            for (std::size_t k = 0; k < g; ++k) aug(i, n + k) = -chains[k].front()[i];
        }
        double pivot_tol = 1e-9 * std::max(inf_norm(aug), 1e-300);
        bool replaced = false;
        for (const CVec& vec : nullspace_basis(aug, pivot_tol)) {
            double c_norm = 0.0;
            for (std::size_t k = 0; k < g; ++k) c_norm = std::max(c_norm, std::abs(vec[n + k]));
            if (c_norm <= 1e-6 * std::max(inf_norm(vec), 1e-300)) continue;
            CVec eta_c(vec.begin(), vec.begin() + std::ptrdiff_t(n));
            Vec eta = real_part_checked(eta_c, "jordan_chain");
            Vec xi_prime(n, 0.0);
            for (std::size_t k = 0; k < g; ++k) {
                double ck = vec[n + k].real();
                if (ck == 0.0) continue;
                for (std::size_t i = 0; i < n; ++i) xi_prime[i] += ck * chains[k].front()[i];
            }
            // Swap a single-link chain for the consistent combination.
            for (auto& chain : chains) {
                if (chain.size() == 1) {
                    chain = {xi_prime, eta};
                    ++total;
                    replaced = true;
                    break;
                }
            }
            if (replaced) break;
        }
        if (!replaced) {
            throw DefectStructureError(
                "build_mode_basis: unable to complete the Jordan chain structure");
        }
    }
    if (total != need) {
        throw DefectStructureError(
            "build_mode_basis: chain construction did not reach the algebraic multiplicity");
    }
    std::vector<Mode> modes;
    for (auto& chain : chains) {
        if (chain.size() == 1) {
            modes.push_back(RealMode{r, std::move(chain.front())});
        } else {
            modes.push_back(ChainMode{r, std::move(chain)});
        }
    }
    return modes;
}

}  // namespace

ModeBasis build_mode_basis(const Mat& A, const Staircase& stair) {
    require_square(A, "build_mode_basis");
    const std::size_t n = A.rows();
    Spectrum spectrum = eigenvalues(characteristic_polynomial(A));

    std::vector<Mode> modes;
    for (const auto& root : spectrum.roots) {
        if (root.value.imag() < 0.0) continue;  // handled with the conjugate
        if (root.value.imag() == 0.0) {
            double r = root.value.real();
            std::vector<Vec> eigvecs = real_nullspace(A, r);
            if (int(eigvecs.size()) >= root.multiplicity) {
                for (int k = 0; k < root.multiplicity; ++k) {
                    EigenPair pair{{r, 0.0}, CVec(eigvecs[k].begin(), eigvecs[k].end())};
                    if (root.multiplicity == 1) pair = polish_eigenpair(A, pair);
                    modes.push_back(RealMode{pair.r.real(),
                                             real_part_checked(pair.v, "build_mode_basis")});
                }
            } else {
                auto chain_modes = modes_for_defective_root(A, r, root.multiplicity,
                                                            std::move(eigvecs));
                for (auto& m : chain_modes) modes.push_back(std::move(m));
            }
        } else {
            std::vector<CVec> eigvecs = eigenvectors(A, root.value);
            if (int(eigvecs.size()) < root.multiplicity) {
                throw NumericError(
                    "build_mode_basis: defective complex conjugate pair is not "
                    "representable as real chain modes");
            }
            for (int k = 0; k < root.multiplicity; ++k) {
                EigenPair pair{root.value, eigvecs[k]};
                if (root.multiplicity == 1) pair = polish_eigenpair(A, pair);
                if (pair.r.imag() < 0.0) {
                    pair.r = std::conj(pair.r);
                    for (auto& c : pair.v) c = std::conj(c);
                }
                Vec u0(n), v0(n);
                for (std::size_t i = 0; i < n; ++i) {
                    u0[i] = pair.v[i].real();
                    v0[i] = pair.v[i].imag();
                }
                modes.push_back(ComplexPairMode{pair.r.real(), pair.r.imag(),
                                                std::move(u0), std::move(v0)});
            }
        }
    }
    std::size_t count = 0;
    for (const auto& m : modes) count += mode_solution_count(m);
    if (count != n) {
        throw NumericError("build_mode_basis: mode count does not match the dimension");
    }
    return ModeBasis(std::move(modes), stair);
}

Vec fit_initial_conditions(const ModeBasis& basis, double t0, const Vec& x0) {
    if (x0.size() != basis.dimension()) {
        throw ArgumentError("fit_initial_conditions: x0 dimension mismatch");
    }
    Mat X = basis.fundamental_matrix(t0);
    Vec c;
    try {
        c = solve_linear(X, x0);
    } catch (const NumericError&) {
        throw FundamentalSetError(
            "fit_initial_conditions: fundamental matrix singular at t0 (contradicts "
            "the basis invariant)");
    }
    Vec reconstructed = X * c;
    double resid = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        resid = std::max(resid, std::abs(reconstructed[i] - x0[i]));
    }
    if (resid > 1e-10 * (1.0 + inf_norm(x0))) {
        throw FundamentalSetError("fit_initial_conditions: residual above bound");
    }
    return c;
}

Vec evaluate(const GeneralSolution& solution, double t) {
    const auto& basis = solution.basis;
    if (solution.coefficients.size() != basis.dimension()) {
        throw ArgumentError("evaluate: coefficient dimension mismatch");
    }
    Mat X = basis.fundamental_matrix(t);
    return X * solution.coefficients;
}

double wronskian(const ModeBasis& basis, double t) {
    return lu_determinant(basis.fundamental_matrix(t));
}

namespace {

AbelReport abel_report(const ModeBasis& basis, double t0, double t1, double exponent) {
    AbelReport report;
    report.wronskian_t0 = wronskian(basis, t0);
    report.wronskian_t1 = wronskian(basis, t1);
    report.exponent = exponent;
    double predicted = report.wronskian_t0 * std::exp(exponent);
    report.absolute = std::abs(report.wronskian_t1 - predicted);
    double scale = std::max(std::abs(report.wronskian_t1), std::abs(predicted));
    report.relative = scale > 0.0 ? report.absolute / scale : report.absolute;
    return report;
}

}  // namespace

AbelReport abel_check(double constant_trace, const ModeBasis& basis, double t0,
                      double t1) {
    const Staircase& stair = basis.staircase();
    double ds = staircase_eval(stair, t1) - staircase_eval(stair, t0);
    return abel_report(basis, t0, t1, constant_trace * ds);
}

AbelReport abel_check(const SampledFn& trace_fn, const ModeBasis& basis, double t0,
                      double t1) {
    if (t0 == t1) return abel_report(basis, t0, t1, 0.0);
    double lo = std::min(t0, t1), hi = std::max(t0, t1);
    IntegralBounds bounds =
        f_alpha_integral_to_tol(trace_fn, basis.staircase(), lo, hi, 1e-10, 22);
    double exponent = (t1 >= t0) ? bounds.value() : -bounds.value();
    return abel_report(basis, t0, t1, exponent);
}

DichotomyVerdict dichotomy_scan(const ModeBasis& basis, std::span<const double> samples) {
    if (samples.size() < 2) {
        throw ArgumentError("dichotomy_scan: at least 2 samples required");
    }
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    double scale = 0.0;
    for (double t : samples) {
        Mat X = basis.fundamental_matrix(t);
        double w = std::abs(lu_determinant(X));
        min_abs = std::min(min_abs, w);
        max_abs = std::max(max_abs, w);
        scale = std::max(scale, hadamard_scale(X));
    }
    if (max_abs <= 1e-12 * std::max(scale, 1e-300)) return DichotomyVerdict::IdenticallyZero;
    if (min_abs > 1e-12 * max_abs) return DichotomyVerdict::NeverZero;
    return DichotomyVerdict::Violation;
}

ResidualReport residual_check(const GeneralSolution& solution, const Mat& A,
                              std::span<const double> t_samples,
                              const DerivOptions& options) {
    require_square(A, "residual_check");
    const ModeBasis& basis = solution.basis;
    if (A.rows() != basis.dimension()) {
        throw ArgumentError("residual_check: matrix dimension disagrees with the basis");
    }
    const Staircase& stair = basis.staircase();
    ResidualReport report;
    for (double t : t_samples) {
        if (!in_attractor(stair.spec(), t, stair.evaluation_depth())) {
            std::ostringstream msg;
            msg << "residual_check: sample t = " << t << " is not a point of F";
            throw ArgumentError(msg.str());
        }
        Vec x_t = evaluate(solution, t);
        Vec ax = A * x_t;
        SampleResidual sample;
        sample.t = t;
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            SampledFn component{
                [&solution, i](double u) { return evaluate(solution, u)[i]; },
                stair.spec().base()};
            try {
                DerivEstimate d = f_alpha_derivative(component, stair, t, options);
                sample.residual = std::max(sample.residual, std::abs(d.value - ax[i]));
            } catch (const ConvergenceError& e) {
                sample.converged = false;
                report.all_converged = false;
                sample.note = e.what();
            }
        }
        report.max_residual = std::max(report.max_residual, sample.residual);
        report.samples.push_back(std::move(sample));
    }
    return report;
}

double spectral_residual(const Mat& A, const Mode& mode) {
    require_square(A, "spectral_residual");
    const double a_scale = 1.0 + inf_norm(A);
    if (const auto* rm = std::get_if<RealMode>(&mode)) {
        Vec lhs = A * rm->xi;
        double resid = 0.0;
        for (std::size_t i = 0; i < rm->xi.size(); ++i) {
            resid = std::max(resid, std::abs(lhs[i] - rm->r * rm->xi[i]));
        }
        return resid / (a_scale * std::max(inf_norm(rm->xi), 1e-300));
    }
    if (const auto* cm = std::get_if<ComplexPairMode>(&mode)) {
        CVec xi(cm->u0.size());
        for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = {cm->u0[i], cm->v0[i]};
        std::complex<double> r{cm->a, cm->b};
        CVec lhs = complexify(A) * xi;
        double resid = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            resid = std::max(resid, std::abs(lhs[i] - r * xi[i]));
        }
        return resid / (a_scale * std::max(inf_norm(xi), 1e-300));
    }
    const auto& ch = std::get<ChainMode>(mode);
    double worst = 0.0;
    for (std::size_t link = 0; link < ch.chain.size(); ++link) {
        Vec lhs = A * ch.chain[link];
        double resid = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            double expected = ch.r * ch.chain[link][i] + (link > 0 ? ch.chain[link - 1][i] : 0.0);
            resid = std::max(resid, std::abs(lhs[i] - expected));
        }
        worst = std::max(worst, resid / (a_scale * std::max(inf_norm(ch.chain[link]), 1e-300)));
    }
    return worst;
}

}  // namespace falpha
