#include "hcm/complex_matrix.hpp"

#include <cmath>
#include <string>

namespace hcm {

namespace {

void require_same_dims(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
}

} // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dims(a, b, "add");
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dims(a, b, "sub");
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw ShapeMismatch("mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    ComplexMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix scale(const ComplexMatrix& a, cplx factor) {
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] * factor;
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dims(a, b, "max_abs_diff");
    double m = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeMismatch("hstack: row counts differ");
    ComplexMatrix out(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

ComplexMatrix submatrix(const ComplexMatrix& a, int row0, int col0, int rows, int cols) {
    if (row0 < 0 || col0 < 0 || row0 + rows > a.rows() || col0 + cols > a.cols())
        throw ShapeMismatch("submatrix: block out of range");
    ComplexMatrix out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = a(row0 + i, col0 + j);
    return out;
}

void set_submatrix(ComplexMatrix& a, int row0, int col0, const ComplexMatrix& block) {
    if (row0 < 0 || col0 < 0 || row0 + block.rows() > a.rows() || col0 + block.cols() > a.cols())
        throw ShapeMismatch("set_submatrix: block out of range");
    for (int i = 0; i < block.rows(); ++i)
        for (int j = 0; j < block.cols(); ++j) a(row0 + i, col0 + j) = block(i, j);
}

ComplexMatrix column(const ComplexMatrix& a, int j) { return submatrix(a, 0, j, a.rows(), 1); }

} // namespace hcm
