#include "hcm/algebra.hpp"

#include <cmath>
#include <string>

namespace hcm {

namespace {

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* op) {
    if (a != b) throw ShapeMismatch(std::string(op) + ": algebra shapes differ");
}

} // namespace

AlgebraShape::AlgebraShape(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
    if (dims_.empty()) throw InvalidInput("AlgebraShape: at least one block required");
    for (int d : dims_)
        if (d < 1) throw InvalidInput("AlgebraShape: block dims must be >= 1");
}

int AlgebraShape::total_dim() const {
    int s = 0;
    for (int d : dims_) s += d;
    return s;
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<ComplexMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
        throw ShapeMismatch("AlgebraElement: block count mismatch");
    for (int i = 0; i < shape_.num_blocks(); ++i) {
        const int n = shape_.block_dim(i);
        if (blocks_[i].rows() != n || blocks_[i].cols() != n)
            throw ShapeMismatch("AlgebraElement: block " + std::to_string(i) + " is not " +
                                std::to_string(n) + "x" + std::to_string(n));
        if (!blocks_[i].all_finite())
            throw InvalidInput("AlgebraElement: non-finite entry in block " + std::to_string(i));
    }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (int i = 0; i < shape.num_blocks(); ++i)
        blocks.emplace_back(shape.block_dim(i), shape.block_dim(i));
    return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::unit(const AlgebraShape& shape) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (int i = 0; i < shape.num_blocks(); ++i)
        blocks.push_back(ComplexMatrix::identity(shape.block_dim(i)));
    return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "add");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(add(a.block(i), b.block(i)));
    return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "sub");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(sub(a.block(i), b.block(i)));
    return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "mul");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(mul(a.block(i), b.block(i)));
    return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement scale(const AlgebraElement& a, cplx factor) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(scale(a.block(i), factor));
    return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement adjoint(const AlgebraElement& a) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(adjoint(a.block(i)));
    return AlgebraElement(a.shape(), std::move(blocks));
}

double norm(const AlgebraElement& a) {
    double m = 0.0;
    for (int i = 0; i < a.num_blocks(); ++i) m = std::max(m, operator_norm(a.block(i)));
    return m;
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_shape(a.shape(), b.shape(), "max_abs_diff");
    double m = 0.0;
    for (int i = 0; i < a.num_blocks(); ++i) m = std::max(m, max_abs_diff(a.block(i), b.block(i)));
    return m;
}

bool is_positive(const AlgebraElement& a, const Tolerances& tol) {
    const double nrm = norm(a);
    for (int i = 0; i < a.num_blocks(); ++i) {
        HermEig eig;
        try {
            eig = herm_eig(a.block(i), tol);
        } catch (const NotHermitian&) {
            return false;
        }
        for (double l : eig.eigenvalues)
            if (l < -tol.herm_sym * nrm) return false;
    }
    return true;
}

AlgebraElement sqrt_pos(const AlgebraElement& a, const Tolerances& tol) {
    if (!is_positive(a, tol)) throw NotPositive("sqrt_pos: element is not positive");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(psd_sqrt(a.block(i), tol));
    return AlgebraElement(a.shape(), std::move(blocks));
}

AlgebraElement pinv_pos(const AlgebraElement& a, const Tolerances& tol) {
    if (!is_positive(a, tol)) throw NotPositive("pinv_pos: element is not positive");
    const double nrm = norm(a);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(psd_pinv(a.block(i), tol, nrm));
    return AlgebraElement(a.shape(), std::move(blocks));
}

MatrixOverA::MatrixOverA(AlgebraShape shape, int rows, int cols)
    : shape_(std::move(shape)), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ShapeMismatch("MatrixOverA: negative dimension");
    blocks_.reserve(shape_.num_blocks());
    for (int i = 0; i < shape_.num_blocks(); ++i) {
        const int n = shape_.block_dim(i);
        blocks_.emplace_back(rows * n, cols * n);
    }
}

MatrixOverA::MatrixOverA(AlgebraShape shape, int rows, int cols, std::vector<ComplexMatrix> blocks)
    : shape_(std::move(shape)), rows_(rows), cols_(cols), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
        throw ShapeMismatch("MatrixOverA: block count mismatch");
    for (int i = 0; i < shape_.num_blocks(); ++i) {
        const int n = shape_.block_dim(i);
        if (blocks_[i].rows() != rows_ * n || blocks_[i].cols() != cols_ * n)
            throw ShapeMismatch("MatrixOverA: flattened block " + std::to_string(i) +
                                " has wrong dimensions");
    }
}

MatrixOverA MatrixOverA::identity(const AlgebraShape& shape, int k) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (int i = 0; i < shape.num_blocks(); ++i)
        blocks.push_back(ComplexMatrix::identity(k * shape.block_dim(i)));
    return MatrixOverA(shape, k, k, std::move(blocks));
}

AlgebraElement MatrixOverA::entry(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw ShapeMismatch("MatrixOverA::entry out of range");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape_.num_blocks());
    for (int i = 0; i < shape_.num_blocks(); ++i) {
        const int n = shape_.block_dim(i);
        blocks.push_back(submatrix(blocks_[i], r * n, c * n, n, n));
    }
    return AlgebraElement(shape_, std::move(blocks));
}

void MatrixOverA::set_entry(int r, int c, const AlgebraElement& a) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw ShapeMismatch("MatrixOverA::set_entry out of range");
    require_same_shape(shape_, a.shape(), "set_entry");
    for (int i = 0; i < shape_.num_blocks(); ++i) {
        const int n = shape_.block_dim(i);
        set_submatrix(blocks_[i], r * n, c * n, a.block(i));
    }
}

namespace {

template <typename BlockOp>
MatrixOverA blockwise(const MatrixOverA& a, const MatrixOverA& b, int rows, int cols, BlockOp op,
                      const char* name) {
    require_same_shape(a.shape(), b.shape(), name);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(op(a.block(i), b.block(i)));
    return MatrixOverA(a.shape(), rows, cols, std::move(blocks));
}

} // namespace

MatrixOverA add(const MatrixOverA& a, const MatrixOverA& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("add: A-matrix dims differ");
    return blockwise(a, b, a.rows(), a.cols(),
                     [](const ComplexMatrix& x, const ComplexMatrix& y) { return add(x, y); }, "add");
}

MatrixOverA sub(const MatrixOverA& a, const MatrixOverA& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("sub: A-matrix dims differ");
    return blockwise(a, b, a.rows(), a.cols(),
                     [](const ComplexMatrix& x, const ComplexMatrix& y) { return sub(x, y); }, "sub");
}

MatrixOverA mul(const MatrixOverA& a, const MatrixOverA& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("mul: A-matrix dims incompatible");
    return blockwise(a, b, a.rows(), b.cols(),
                     [](const ComplexMatrix& x, const ComplexMatrix& y) { return mul(x, y); }, "mul");
}

MatrixOverA scale(const MatrixOverA& a, cplx factor) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(scale(a.block(i), factor));
    return MatrixOverA(a.shape(), a.rows(), a.cols(), std::move(blocks));
}

MatrixOverA adjoint(const MatrixOverA& a) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(adjoint(a.block(i)));
    return MatrixOverA(a.shape(), a.cols(), a.rows(), std::move(blocks));
}

double op_norm(const MatrixOverA& a) {
    double m = 0.0;
    for (int i = 0; i < a.num_blocks(); ++i) m = std::max(m, operator_norm(a.block(i)));
    return m;
}

double max_abs_diff(const MatrixOverA& a, const MatrixOverA& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("max_abs_diff: A-matrix dims differ");
    require_same_shape(a.shape(), b.shape(), "max_abs_diff");
    double m = 0.0;
    for (int i = 0; i < a.num_blocks(); ++i) m = std::max(m, max_abs_diff(a.block(i), b.block(i)));
    return m;
}

double global_sigma_max(const MatrixOverA& a) { return op_norm(a); }

MatrixOverA sqrt_psd(const MatrixOverA& a, const Tolerances& tol) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(psd_sqrt(a.block(i), tol));
    return MatrixOverA(a.shape(), a.rows(), a.cols(), std::move(blocks));
}

MatrixOverA pinv_psd(const MatrixOverA& a, const Tolerances& tol) {
    const double ref = global_sigma_max(a);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(psd_pinv(a.block(i), tol, ref));
    return MatrixOverA(a.shape(), a.rows(), a.cols(), std::move(blocks));
}

MatrixOverA pinv(const MatrixOverA& a, const Tolerances& tol) {
    const double ref = global_sigma_max(a);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(a.num_blocks());
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(pinv(a.block(i), tol, ref));
    return MatrixOverA(a.shape(), a.cols(), a.rows(), std::move(blocks));
}

double Rng::uniform01() {
    // 53-bit mantissa in (0, 1]; never returns 0 so log() is safe
    const std::uint64_t x = gen_();
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

cplx Rng::complex_gaussian() {
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    return cplx(gaussian() * inv_sqrt2, gaussian() * inv_sqrt2);
}

std::uint64_t Rng::next_u64() { return gen_(); }

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw InvalidInput("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

AlgebraElement random_element(const AlgebraShape& shape, Rng& rng) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (int i = 0; i < shape.num_blocks(); ++i) {
        const int n = shape.block_dim(i);
        ComplexMatrix b(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) b(r, c) = rng.complex_gaussian();
        blocks.push_back(std::move(b));
    }
    return AlgebraElement(shape, std::move(blocks));
}

MatrixOverA random_matrix(const AlgebraShape& shape, int rows, int cols, Rng& rng) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(shape.num_blocks());
    for (int i = 0; i < shape.num_blocks(); ++i) {
        const int n = shape.block_dim(i);
        ComplexMatrix b(rows * n, cols * n);
        for (int r = 0; r < rows * n; ++r)
            for (int c = 0; c < cols * n; ++c) b(r, c) = rng.complex_gaussian();
        blocks.push_back(std::move(b));
    }
    return MatrixOverA(shape, rows, cols, std::move(blocks));
}

AlgebraElement random_element(const AlgebraShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    return random_element(shape, rng);
}

MatrixOverA random_matrix(const AlgebraShape& shape, int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    return random_matrix(shape, rows, cols, rng);
}

} // namespace hcm
