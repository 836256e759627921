#include "hcm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hcm {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double off_diag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Real Jacobi angle for the 2x2 symmetric [[alpha, r], [r, beta]], r > 0.
void jacobi_angles(double alpha, double beta, double r, double& c, double& s) {
    const double tau = (beta - alpha) / (2.0 * r);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = t * c;
}

// Apply the unitary G (identity except G[p][p]=c*e^{i phi}, G[p][q]=s*e^{i phi},
// G[q][p]=-s, G[q][q]=c) on the right of `a`: a <- a * G.
void rotate_columns(ComplexMatrix& a, int p, int q, double c, double s, cplx phase) {
    for (int i = 0; i < a.rows(); ++i) {
        const cplx ap = a(i, p), aq = a(i, q);
        a(i, p) = c * phase * ap - s * aq;
        a(i, q) = s * phase * ap + c * aq;
    }
}

// a <- G^* a for the same G.
void rotate_rows(ComplexMatrix& a, int p, int q, double c, double s, cplx phase) {
    const cplx phase_c = std::conj(phase);
    for (int j = 0; j < a.cols(); ++j) {
        const cplx ap = a(p, j), aq = a(q, j);
        a(p, j) = c * phase_c * ap - s * aq;
        a(q, j) = s * phase_c * ap + c * aq;
    }
}

// Descending lexicographic comparison of eigenvector columns i, j on exact
// eigenvalue ties; keeps identity inputs fixed.
bool column_lex_greater(const ComplexMatrix& v, int i, int j) {
    for (int r = 0; r < v.rows(); ++r) {
        const cplx a = v(r, i), b = v(r, j);
        if (a.real() != b.real()) return a.real() > b.real();
        if (a.imag() != b.imag()) return a.imag() > b.imag();
    }
    return false;
}

ComplexMatrix permute_columns(const ComplexMatrix& a, const std::vector<int>& order) {
    ComplexMatrix out(a.rows(), static_cast<int>(order.size()));
    for (size_t j = 0; j < order.size(); ++j)
        for (int i = 0; i < a.rows(); ++i) out(i, static_cast<int>(j)) = a(i, order[j]);
    return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return scale(add(m, adjoint(m)), 0.5); }

// Fill columns of u whose singular value is (numerically) zero with a
// deterministic orthonormal completion: sweep the standard basis in order and
// accept each vector whose residual against everything accepted so far stays
// above a bound that, for dimensions up to a few hundred, some remaining
// candidate is guaranteed to clear while holes remain.
void complete_orthonormal(ComplexMatrix& u, const std::vector<bool>& is_zero) {
    const int rows = u.rows();
    const int cols = u.cols();
    std::vector<int> holes;
    for (int j = 0; j < cols; ++j)
        if (is_zero[j]) holes.push_back(j);
    if (holes.empty()) return;

    std::vector<bool> filled(cols, false);
    for (int j = 0; j < cols; ++j) filled[j] = !is_zero[j];

    size_t next = 0;
    for (int cand_idx = 0; cand_idx < rows && next < holes.size(); ++cand_idx) {
        std::vector<cplx> cand(rows, cplx(0.0, 0.0));
        cand[cand_idx] = 1.0;
        // two Gram-Schmidt passes against filled columns for stability
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < cols; ++k) {
                if (!filled[k]) continue;
                cplx dot(0.0, 0.0);
                for (int i = 0; i < rows; ++i) dot += std::conj(u(i, k)) * cand[i];
                for (int i = 0; i < rows; ++i) cand[i] -= dot * u(i, k);
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < rows; ++i) nrm += std::norm(cand[i]);
        nrm = std::sqrt(nrm);
        if (nrm <= 1e-3) continue;
        const int j = holes[next++];
        for (int i = 0; i < rows; ++i) u(i, j) = cand[i] / nrm;
        filled[j] = true;
    }
    if (next < holes.size()) throw NoConvergence("svd: failed to complete orthonormal basis");
}

} // namespace

HermEig herm_eig(const ComplexMatrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols())
        throw ShapeMismatch("herm_eig: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
    const int n = m.rows();
    const double scale = frobenius_norm(m);
    const double asym = frobenius_norm(sub(m, adjoint(m)));
    if (asym > tol.herm_sym * scale && asym > 0.0)
        throw NotHermitian("herm_eig: asymmetry " + std::to_string(asym) + " exceeds bound");

    // symmetrize before iterating
    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = std::max(1, n) * kEps * (scale > 0.0 ? scale : 1.0);
    bool converged = off_diag_frobenius(a) <= stop;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= stop / std::max(1, n)) continue;
                const cplx phase = a(p, q) / r;
                double c, s;
                jacobi_angles(a(p, p).real(), a(q, q).real(), r, c, s);
                rotate_columns(a, p, q, c, s, phase);
                rotate_rows(a, p, q, c, s, phase);
                rotate_columns(v, p, q, c, s, phase);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
        converged = off_diag_frobenius(a) <= stop;
    }
    if (!converged) throw NoConvergence("herm_eig: no convergence in 100 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const double li = a(i, i).real(), lj = a(j, j).real();
        if (li != lj) return li > lj;
        if (column_lex_greater(v, i, j)) return true;
        if (column_lex_greater(v, j, i)) return false;
        return i < j;
    });

    HermEig out;
    out.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) out.eigenvalues[i] = a(order[i], order[i]).real();
    out.vectors = permute_columns(v, order);
    return out;
}

Svd svd(const ComplexMatrix& m, const Tolerances& tol) {
    if (m.rows() < m.cols()) {
        Svd t = svd(adjoint(m), tol);
        return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }
    const int rows = m.rows();
    const int cols = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(cols);

    // columns whose norm falls below the resolvable floor (relative to the
    // Frobenius norm, which right rotations preserve) are treated as exact
    // zeros; rotating against them never converges
    double frob2 = 0.0;
    for (const auto& z : w.data()) frob2 += std::norm(z);
    const double floor2 = 1e-30 * frob2;

    // squared column norms, cached across the sweep and refreshed after each
    // rotation; checking them first lets zero columns skip the inner product
    auto colnorm2_of = [&](int j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += std::norm(w(i, j));
        return s;
    };
    std::vector<double> colnorm2(cols);
    for (int j = 0; j < cols; ++j) colnorm2[j] = colnorm2_of(j);

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                const double alpha = colnorm2[p];
                const double beta = colnorm2[q];
                if (alpha <= floor2 || beta <= floor2) continue;
                cplx gamma(0.0, 0.0);
                for (int i = 0; i < rows; ++i) gamma += std::conj(w(i, p)) * w(i, q);
                const double g = std::abs(gamma);
                if (g <= 1e-14 * std::sqrt(alpha * beta)) continue;
                converged = false;
                const cplx phase = gamma / g;
                double c, s;
                jacobi_angles(alpha, beta, g, c, s);
                rotate_columns(w, p, q, c, s, phase);
                rotate_columns(v, p, q, c, s, phase);
                colnorm2[p] = colnorm2_of(p);
                colnorm2[q] = colnorm2_of(q);
            }
        }
        if (cols <= 1) converged = true;
    }
    if (!converged) throw NoConvergence("svd: no convergence in 100 sweeps");

    std::vector<double> sig(cols);
    for (int j = 0; j < cols; ++j)
        sig[j] = colnorm2[j] <= floor2 ? 0.0 : std::sqrt(colnorm2[j]);

    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (sig[i] != sig[j]) return sig[i] > sig[j];
        return i < j;
    });

    Svd out;
    out.sigma.resize(cols);
    out.u = ComplexMatrix(rows, cols);
    std::vector<bool> zero_col(cols, false);
    for (int j = 0; j < cols; ++j) {
        out.sigma[j] = sig[order[j]];
        if (out.sigma[j] > 0.0) {
            for (int i = 0; i < rows; ++i) out.u(i, j) = w(i, order[j]) / out.sigma[j];
        } else {
            zero_col[j] = true;
        }
    }
    complete_orthonormal(out.u, zero_col);
    out.v = permute_columns(v, order);
    return out;
}

int numeric_rank(const ComplexMatrix& m, const Tolerances& tol) {
    if (m.empty()) return 0;
    const Svd dec = svd(m, tol);
    if (dec.sigma.empty() || dec.sigma[0] == 0.0) return 0;
    const double cutoff = tol.rank_rel * dec.sigma[0];
    int rank = 0;
    for (double s : dec.sigma)
        if (s > cutoff) ++rank;
    return rank;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.empty()) return 0.0;
    const Svd dec = svd(m, Tolerances{});
    return dec.sigma.empty() ? 0.0 : dec.sigma[0];
}

namespace {

// Shared eigenvalue-transform core for psd_sqrt / psd_pinv.
ComplexMatrix psd_transform(const ComplexMatrix& m, const Tolerances& tol, double scale_ref,
                            bool invert, const char* who) {
    const HermEig eig = herm_eig(m, tol);
    const int n = m.rows();
    double lam_max = 0.0;
    for (double l : eig.eigenvalues) lam_max = std::max(lam_max, std::abs(l));
    const double neg_band = tol.herm_sym * lam_max;
    for (double l : eig.eigenvalues)
        if (l < -neg_band)
            throw NotPositive(std::string(who) + ": eigenvalue " + std::to_string(l) +
                              " below -" + std::to_string(neg_band));

    const double ref = scale_ref >= 0.0 ? scale_ref : lam_max;
    const double cutoff = tol.rank_rel * ref;
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) {
        // eigenvalues below the rank cutoff are round-off zeros; taking their
        // square root would amplify them to sqrt(eps) junk directions
        const double l = eig.eigenvalues[i] > cutoff ? eig.eigenvalues[i] : 0.0;
        d(i, i) = invert ? (l > 0.0 ? 1.0 / l : 0.0) : std::sqrt(l);
    }
    return mul(mul(eig.vectors, d), adjoint(eig.vectors));
}

} // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol) {
    return psd_transform(m, tol, -1.0, false, "psd_sqrt");
}

ComplexMatrix psd_pinv(const ComplexMatrix& m, const Tolerances& tol, double scale_ref) {
    return psd_transform(m, tol, scale_ref, true, "psd_pinv");
}

ComplexMatrix pinv(const ComplexMatrix& m, const Tolerances& tol, double scale_ref) {
    if (m.empty()) return ComplexMatrix(m.cols(), m.rows());
    const Svd dec = svd(m, tol);
    const double ref = scale_ref >= 0.0 ? scale_ref : (dec.sigma.empty() ? 0.0 : dec.sigma[0]);
    const double cutoff = tol.rank_rel * ref;
    const int k = static_cast<int>(dec.sigma.size());
    ComplexMatrix d(k, k);
    for (int i = 0; i < k; ++i) d(i, i) = dec.sigma[i] > cutoff ? 1.0 / dec.sigma[i] : 0.0;
    return mul(mul(dec.v, d), adjoint(dec.u));
}

} // namespace hcm
