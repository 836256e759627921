#pragma once

#include <vector>

#include "hcm/complex_matrix.hpp"

namespace hcm {

struct HermEig {
    std::vector<double> eigenvalues;  ///< descending
    ComplexMatrix vectors;            ///< unitary, columns paired with eigenvalues
};

struct Svd {
    ComplexMatrix u;            ///< orthonormal columns
    std::vector<double> sigma;  ///< nonnegative, descending, min(rows, cols) entries
    ComplexMatrix v;            ///< orthonormal columns
};

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.
/// The input is symmetrized to (m + m*)/2 first; a relative asymmetry above
/// tol.herm_sym raises NotHermitian. Eigenvalues come back descending; exact
/// ties are broken by descending lexicographic order on the (re, im) pairs of
/// the first differing eigenvector coordinate, so fixtures are reproducible.
HermEig herm_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// Singular value decomposition by one-sided (Hestenes) Jacobi,
/// m = u * diag(sigma) * v^*. Column count of u and v is min(rows, cols);
/// columns for zero singular values are completed deterministically.
Svd svd(const ComplexMatrix& m, const Tolerances& tol = {});

/// Number of singular values above rank_rel * sigma_max (0 for the zero matrix).
int numeric_rank(const ComplexMatrix& m, const Tolerances& tol = {});

/// sigma_max.
double operator_norm(const ComplexMatrix& m);

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// [-herm_sym * scale, 0) are clamped to zero (Gram inputs are PSD only up to
/// round-off); anything lower raises NotPositive. Eigenvalues below the rank
/// cutoff are also treated as zero, so round-off does not surface as
/// sqrt(eps)-sized spurious directions.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol = {});

/// Moore-Penrose inverse of a PSD Hermitian matrix through its
/// eigendecomposition. `scale_ref` overrides the largest eigenvalue as the
/// reference scale for the rank cutoff (used when the matrix is one block of
/// a larger operator); pass a negative value to use the matrix's own scale.
ComplexMatrix psd_pinv(const ComplexMatrix& m, const Tolerances& tol = {}, double scale_ref = -1.0);

/// Moore-Penrose inverse of any matrix; only singular values above the rank
/// cutoff are inverted. `scale_ref` as in psd_pinv.
ComplexMatrix pinv(const ComplexMatrix& m, const Tolerances& tol = {}, double scale_ref = -1.0);

} // namespace hcm
