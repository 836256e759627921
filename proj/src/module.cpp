#include "hcm/module.hpp"

#include <cmath>
#include <string>

namespace hcm {

namespace {

void require_parent(const ModuleElement& x, const ModuleElement& y, const char* op) {
    if (!x.parent().same_space(y.parent()))
        throw ParentMismatch(std::string(op) + ": elements live in different modules");
}

} // namespace

HilbertModule HilbertModule::free_module(const AlgebraShape& shape, int ambient_rank) {
    if (ambient_rank < 0) throw InvalidInput("free_module: negative rank");
    auto d = std::make_shared<Data>();
    d->shape = shape;
    d->ambient = ambient_rank;
    d->proj = MatrixOverA::identity(shape, ambient_rank);
    return HilbertModule(std::move(d));
}

HilbertModule HilbertModule::from_projection(const AlgebraShape& shape, const MatrixOverA& proj,
                                             const Tolerances& tol) {
    if (proj.rows() != proj.cols()) throw ShapeMismatch("from_projection: projection not square");
    if (proj.shape() != shape) throw ShapeMismatch("from_projection: algebra shape mismatch");
    MatrixOverA p = canonicalize_projection(proj, tol);
    const double idem = max_abs_diff(mul(p, p), p);
    const double herm = max_abs_diff(adjoint(p), p);
    if (idem > tol.invariant_abs || herm > tol.invariant_abs)
        throw InvalidInput("from_projection: matrix is not a projection (residuals " +
                           std::to_string(idem) + ", " + std::to_string(herm) + ")");
    auto d = std::make_shared<Data>();
    d->shape = shape;
    d->ambient = proj.rows();
    d->proj = std::move(p);
    return HilbertModule(std::move(d));
}

ModuleElement HilbertModule::element(const MatrixOverA& vec, const Tolerances& tol) const {
    if (vec.shape() != shape() || vec.rows() != ambient_rank() || vec.cols() != 1)
        throw ShapeMismatch("element: coordinate vector has wrong dimensions");
    const MatrixOverA projected = mul(projection(), vec);
    const double defect = max_abs_diff(projected, vec);
    if (defect > tol.invariant_abs * (1.0 + op_norm(vec)))
        throw InvalidInput("element: vector is not in the module (defect " +
                           std::to_string(defect) + ")");
    return ModuleElement(*this, vec);
}

ModuleElement HilbertModule::project(const MatrixOverA& vec) const {
    if (vec.shape() != shape() || vec.rows() != ambient_rank() || vec.cols() != 1)
        throw ShapeMismatch("project: coordinate vector has wrong dimensions");
    return ModuleElement(*this, mul(projection(), vec));
}

ModuleElement HilbertModule::zero_element() const {
    return ModuleElement(*this, MatrixOverA(shape(), ambient_rank(), 1));
}

std::vector<ModuleElement> HilbertModule::spanning_elements() const {
    std::vector<ModuleElement> out;
    out.reserve(ambient_rank());
    for (int j = 0; j < ambient_rank(); ++j) {
        MatrixOverA v(shape(), ambient_rank(), 1);
        for (int i = 0; i < ambient_rank(); ++i) v.set_entry(i, 0, projection().entry(i, j));
        out.emplace_back(*this, std::move(v));
    }
    return out;
}

bool HilbertModule::same_space(const HilbertModule& other, double tol_abs) const {
    if (!d_ || !other.d_) return d_ == other.d_;
    if (d_ == other.d_) return true;
    if (d_->shape != other.d_->shape || d_->ambient != other.d_->ambient) return false;
    return max_abs_diff(d_->proj, other.d_->proj) <= tol_abs;
}

AlgebraElement inner(const ModuleElement& x, const ModuleElement& y) {
    require_parent(x, y, "inner");
    const MatrixOverA g = mul(adjoint(x.vec()), y.vec());
    return g.entry(0, 0);
}

ModuleElement module_action(const ModuleElement& x, const AlgebraElement& a) {
    if (x.parent().shape() != a.shape()) throw ShapeMismatch("module_action: shape mismatch");
    const AlgebraShape& shape = x.parent().shape();
    MatrixOverA out(shape, x.vec().rows(), 1);
    for (int i = 0; i < shape.num_blocks(); ++i) out.block(i) = mul(x.vec().block(i), a.block(i));
    return ModuleElement(x.parent(), std::move(out));
}

ModuleElement add(const ModuleElement& x, const ModuleElement& y) {
    require_parent(x, y, "add");
    return ModuleElement(x.parent(), add(x.vec(), y.vec()));
}

ModuleElement sub(const ModuleElement& x, const ModuleElement& y) {
    require_parent(x, y, "sub");
    return ModuleElement(x.parent(), sub(x.vec(), y.vec()));
}

double element_norm(const ModuleElement& x) {
    return std::sqrt(norm(inner(x, x)));
}

double flat_norm(const ModuleElement& x) { return op_norm(x.vec()); }

Submodule::Submodule(HilbertModule ambient, MatrixOverA proj, const Tolerances& tol)
    : ambient_(std::move(ambient)), proj_(std::move(proj)) {
    if (proj_.rows() != ambient_.ambient_rank() || proj_.cols() != ambient_.ambient_rank() ||
        proj_.shape() != ambient_.shape())
        throw ShapeMismatch("Submodule: projection dimensions mismatch ambient");
    const double idem = max_abs_diff(mul(proj_, proj_), proj_);
    if (idem > tol.invariant_abs) throw InvalidInput("Submodule: not idempotent");
    // must sit inside the ambient module
    const MatrixOverA& p = ambient_.projection();
    if (max_abs_diff(mul(p, proj_), proj_) > tol.invariant_abs ||
        max_abs_diff(mul(proj_, p), proj_) > tol.invariant_abs)
        throw InvalidInput("Submodule: projection does not sit inside the ambient module");
}

HilbertModule Submodule::as_module() const {
    return HilbertModule::from_projection(ambient_.shape(), proj_);
}

MatrixOverA canonicalize_projection(const MatrixOverA& p, const Tolerances& tol) {
    if (p.rows() != p.cols()) throw ShapeMismatch("canonicalize_projection: not square");
    MatrixOverA sym = scale(add(p, adjoint(p)), 0.5);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(sym.num_blocks());
    Tolerances loose = tol;
    loose.herm_sym = 1.0;  // already symmetrized
    for (int i = 0; i < sym.num_blocks(); ++i) {
        const HermEig eig = herm_eig(sym.block(i), loose);
        const int n = sym.block(i).rows();
        int rank = 0;
        for (double l : eig.eigenvalues)
            if (l > 0.5) ++rank;
        // Q Q^* over the eigenvalue-1 frame
        ComplexMatrix q = submatrix(eig.vectors, 0, 0, n, rank);
        blocks.push_back(mul(q, adjoint(q)));
    }
    return MatrixOverA(sym.shape(), sym.rows(), sym.cols(), std::move(blocks));
}

std::vector<ComplexMatrix> range_basis(const MatrixOverA& proj, const Tolerances& tol) {
    std::vector<ComplexMatrix> out;
    out.reserve(proj.num_blocks());
    Tolerances loose = tol;
    loose.herm_sym = 1.0;
    for (int i = 0; i < proj.num_blocks(); ++i) {
        const ComplexMatrix sym = scale(add(proj.block(i), adjoint(proj.block(i))), 0.5);
        const HermEig eig = herm_eig(sym, loose);
        int rank = 0;
        for (double l : eig.eigenvalues)
            if (l > 0.5) ++rank;
        out.push_back(submatrix(eig.vectors, 0, 0, sym.rows(), rank));
    }
    return out;
}

Submodule submodule_from_generators(const HilbertModule& ambient,
                                    const std::vector<ModuleElement>& gens,
                                    const Tolerances& tol) {
    if (gens.empty()) throw InvalidInput("submodule_from_generators: no generators");
    for (const auto& g : gens)
        if (!g.parent().same_space(ambient))
            throw ParentMismatch("submodule_from_generators: generator outside ambient module");

    const AlgebraShape& shape = ambient.shape();
    const int nb = shape.num_blocks();

    // stack flattened generator columns per block
    std::vector<ComplexMatrix> stacked(nb);
    for (int i = 0; i < nb; ++i) {
        const int n = shape.block_dim(i);
        const int rows = ambient.ambient_rank() * n;
        ComplexMatrix s(rows, static_cast<int>(gens.size()) * n);
        for (size_t g = 0; g < gens.size(); ++g)
            set_submatrix(s, 0, static_cast<int>(g) * n, gens[g].vec().block(i));
        stacked[i] = std::move(s);
    }

    std::vector<Svd> decs(nb);
    double sigma_max = 0.0;
    for (int i = 0; i < nb; ++i) {
        decs[i] = svd(stacked[i], tol);
        if (!decs[i].sigma.empty()) sigma_max = std::max(sigma_max, decs[i].sigma[0]);
    }
    const double cutoff = tol.rank_rel * sigma_max;
    if (sigma_max > 0.0) {
        for (int i = 0; i < nb; ++i)
            for (double s : decs[i].sigma)
                if (s >= cutoff / 10.0 && s <= cutoff * 10.0)
                    throw ToleranceAmbiguity(
                        "submodule_from_generators: singular value " + std::to_string(s) +
                        " within a factor 10 of cutoff " + std::to_string(cutoff));
    }

    std::vector<ComplexMatrix> blocks(nb);
    for (int i = 0; i < nb; ++i) {
        int rank = 0;
        for (double s : decs[i].sigma)
            if (s > cutoff) ++rank;
        if (sigma_max == 0.0) rank = 0;
        const int dim = stacked[i].rows();
        const ComplexMatrix u = submatrix(decs[i].u, 0, 0, dim, rank);
        blocks[i] = mul(u, adjoint(u));
    }
    MatrixOverA proj(shape, ambient.ambient_rank(), ambient.ambient_rank(), std::move(blocks));
    return Submodule(ambient, canonicalize_projection(proj, tol), tol);
}

Submodule orthogonal_complement(const Submodule& k) {
    const MatrixOverA comp = sub(k.ambient().projection(), k.projection());
    return Submodule(k.ambient(), canonicalize_projection(comp));
}

Submodule full_submodule(const HilbertModule& m) { return Submodule(m, m.projection()); }

Submodule zero_submodule(const HilbertModule& m) {
    return Submodule(m, MatrixOverA(m.shape(), m.ambient_rank(), m.ambient_rank()));
}

HilbertModule direct_sum(const HilbertModule& m, const HilbertModule& n) {
    if (m.shape() != n.shape()) throw ShapeMismatch("direct_sum: algebra shapes differ");
    const AlgebraShape& shape = m.shape();
    const int km = m.ambient_rank(), kn = n.ambient_rank();
    MatrixOverA proj(shape, km + kn, km + kn);
    for (int i = 0; i < shape.num_blocks(); ++i) {
        const int d = shape.block_dim(i);
        set_submatrix(proj.block(i), 0, 0, m.projection().block(i));
        set_submatrix(proj.block(i), km * d, km * d, n.projection().block(i));
    }
    return HilbertModule::from_projection(shape, proj);
}

} // namespace hcm
