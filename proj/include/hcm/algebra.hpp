#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hcm/linalg.hpp"

namespace hcm {

/// A finite-dimensional C*-algebra: the direct sum of full matrix algebras
/// with the given block dimensions. Shape (1,1,...,1) is the commutative case.
class AlgebraShape {
public:
    AlgebraShape() = default;
    explicit AlgebraShape(std::vector<int> block_dims);

    int num_blocks() const { return static_cast<int>(dims_.size()); }
    int block_dim(int i) const { return dims_[i]; }
    const std::vector<int>& block_dims() const { return dims_; }
    int total_dim() const;  ///< sum of block dims (side of the flattened representation)

    bool operator==(const AlgebraShape& o) const { return dims_ == o.dims_; }
    bool operator!=(const AlgebraShape& o) const { return !(*this == o); }

private:
    std::vector<int> dims_;
};

/// Element of the algebra: one dense complex block per summand.
class AlgebraElement {
public:
    AlgebraElement() = default;
    AlgebraElement(AlgebraShape shape, std::vector<ComplexMatrix> blocks);

    static AlgebraElement zero(const AlgebraShape& shape);
    static AlgebraElement unit(const AlgebraShape& shape);

    const AlgebraShape& shape() const { return shape_; }
    const ComplexMatrix& block(int i) const { return blocks_[i]; }
    ComplexMatrix& block(int i) { return blocks_[i]; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }

private:
    AlgebraShape shape_;
    std::vector<ComplexMatrix> blocks_;
};

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const AlgebraElement& a, cplx factor);
AlgebraElement adjoint(const AlgebraElement& a);

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) { return add(a, b); }
inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return sub(a, b); }
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return mul(a, b); }

/// C*-norm: max over blocks of the spectral norm.
double norm(const AlgebraElement& a);
double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

/// Hermitian within herm_sym and min eigenvalue >= -herm_sym * norm.
bool is_positive(const AlgebraElement& a, const Tolerances& tol = {});
AlgebraElement sqrt_pos(const AlgebraElement& a, const Tolerances& tol = {});
AlgebraElement pinv_pos(const AlgebraElement& a, const Tolerances& tol = {});

/// A matrix over the algebra. Stored flattened: one complex matrix of size
/// (rows*n_i) x (cols*n_i) per block, entry (r, c) of the A-matrix occupying
/// the (r, c) sub-block. The entrywise AlgebraElement view is derived.
class MatrixOverA {
public:
    MatrixOverA() = default;
    MatrixOverA(AlgebraShape shape, int rows, int cols);  // zero
    MatrixOverA(AlgebraShape shape, int rows, int cols, std::vector<ComplexMatrix> blocks);

    static MatrixOverA identity(const AlgebraShape& shape, int k);

    const AlgebraShape& shape() const { return shape_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const ComplexMatrix& block(int i) const { return blocks_[i]; }
    ComplexMatrix& block(int i) { return blocks_[i]; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }

    AlgebraElement entry(int r, int c) const;
    void set_entry(int r, int c, const AlgebraElement& a);

private:
    AlgebraShape shape_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<ComplexMatrix> blocks_;
};

MatrixOverA add(const MatrixOverA& a, const MatrixOverA& b);
MatrixOverA sub(const MatrixOverA& a, const MatrixOverA& b);
MatrixOverA mul(const MatrixOverA& a, const MatrixOverA& b);
MatrixOverA scale(const MatrixOverA& a, cplx factor);
MatrixOverA adjoint(const MatrixOverA& a);

inline MatrixOverA operator+(const MatrixOverA& a, const MatrixOverA& b) { return add(a, b); }
inline MatrixOverA operator-(const MatrixOverA& a, const MatrixOverA& b) { return sub(a, b); }
inline MatrixOverA operator*(const MatrixOverA& a, const MatrixOverA& b) { return mul(a, b); }

/// Operator norm: max over blocks of sigma_max of the flattened block.
double op_norm(const MatrixOverA& a);
double max_abs_diff(const MatrixOverA& a, const MatrixOverA& b);
/// Largest singular value over all blocks (the global rank-cutoff reference).
double global_sigma_max(const MatrixOverA& a);

/// Blockwise PSD square root / pseudo-inverse with the rank cutoff taken
/// relative to the matrix's global scale across blocks.
MatrixOverA sqrt_psd(const MatrixOverA& a, const Tolerances& tol = {});
MatrixOverA pinv_psd(const MatrixOverA& a, const Tolerances& tol = {});
MatrixOverA pinv(const MatrixOverA& a, const Tolerances& tol = {});

/// Deterministic stream of standard Gaussians: Box-Muller over mt19937_64.
/// The engine is bit-exact by the standard; rolling the transform by hand
/// keeps the stream independent of library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gaussian();
    cplx complex_gaussian();  ///< E|z|^2 = 1
    std::uint64_t next_u64();
    int uniform_int(int lo, int hi);  ///< inclusive bounds

private:
    double uniform01();
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Ginibre element: i.i.d. standard complex Gaussian entries per block.
AlgebraElement random_element(const AlgebraShape& shape, std::uint64_t seed);
MatrixOverA random_matrix(const AlgebraShape& shape, int rows, int cols, std::uint64_t seed);

AlgebraElement random_element(const AlgebraShape& shape, Rng& rng);
MatrixOverA random_matrix(const AlgebraShape& shape, int rows, int cols, Rng& rng);

} // namespace hcm
