#pragma once

#include <complex>
#include <vector>

#include "hcm/errors.hpp"

namespace hcm {

using cplx = std::complex<double>;

/// Tolerances shared by rank detection and invariant checks.
struct Tolerances {
    double rank_rel = 1e-10;      ///< relative singular-value cutoff
    double invariant_abs = 1e-8;  ///< property-check tolerance
    double herm_sym = 1e-12;      ///< Hermiticity symmetrization bound

    void validate() const {
        if (rank_rel < 0.0 || invariant_abs < 0.0 || herm_sym < 0.0)
            throw InvalidInput("Tolerances: all fields must be >= 0");
        if (rank_rel >= 1.0)
            throw InvalidInput("Tolerances: rank_rel must be < 1");
    }
};

/// Dense row-major complex matrix. Plain value type; every operation
/// returns a fresh matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw ShapeMismatch("ComplexMatrix: negative dimension");
    }

    static ComplexMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cplx factor);
ComplexMatrix adjoint(const ComplexMatrix& a);

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) { return add(a, b); }
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) { return sub(a, b); }
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return mul(a, b); }

double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column stacking [a | b]; both matrices must have equal row counts.
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix submatrix(const ComplexMatrix& a, int row0, int col0, int rows, int cols);
void set_submatrix(ComplexMatrix& a, int row0, int col0, const ComplexMatrix& block);

ComplexMatrix column(const ComplexMatrix& a, int j);

} // namespace hcm
