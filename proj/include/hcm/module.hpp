#pragma once

#include <memory>
#include <vector>

#include "hcm/algebra.hpp"

namespace hcm {

class ModuleElement;

/// A finitely generated projective Hilbert A-module, realized as the range of
/// a self-adjoint idempotent over the free module A^k. Cheap to copy (shared
/// immutable payload); two handles describe the same space when their
/// projections coincide.
class HilbertModule {
public:
    HilbertModule() = default;

    static HilbertModule free_module(const AlgebraShape& shape, int ambient_rank);
    /// Canonicalizes the projection (re-symmetrize, round eigenvalues to {0,1})
    /// and validates the idempotent invariants.
    static HilbertModule from_projection(const AlgebraShape& shape, const MatrixOverA& proj,
                                         const Tolerances& tol = {});

    const AlgebraShape& shape() const { return d_->shape; }
    int ambient_rank() const { return d_->ambient; }
    const MatrixOverA& projection() const { return d_->proj; }

    /// Wraps a coordinate vector, checking proj * vec = vec.
    ModuleElement element(const MatrixOverA& vec, const Tolerances& tol = {}) const;
    /// Projects an arbitrary ambient vector into the module.
    ModuleElement project(const MatrixOverA& vec) const;
    ModuleElement zero_element() const;
    /// Columns of the projection; they generate the module over A.
    std::vector<ModuleElement> spanning_elements() const;

    bool same_space(const HilbertModule& other, double tol_abs = 1e-8) const;
    bool is_valid() const { return d_ != nullptr; }

private:
    struct Data {
        AlgebraShape shape;
        int ambient = 0;
        MatrixOverA proj;
    };
    explicit HilbertModule(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

/// Element of a Hilbert module: a k x 1 coordinate vector over A lying in the
/// range of the module projection.
class ModuleElement {
public:
    ModuleElement() = default;
    ModuleElement(HilbertModule parent, MatrixOverA vec)
        : parent_(std::move(parent)), vec_(std::move(vec)) {}

    const HilbertModule& parent() const { return parent_; }
    const MatrixOverA& vec() const { return vec_; }

private:
    HilbertModule parent_;
    MatrixOverA vec_;
};

/// <x, y> = sum_j x_j^* y_j.
AlgebraElement inner(const ModuleElement& x, const ModuleElement& y);

/// Right action x * a, coordinatewise.
ModuleElement module_action(const ModuleElement& x, const AlgebraElement& a);

ModuleElement add(const ModuleElement& x, const ModuleElement& y);
ModuleElement sub(const ModuleElement& x, const ModuleElement& y);
inline ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) { return add(x, y); }
inline ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) { return sub(x, y); }

/// Hilbert norm ||<x,x>||^(1/2), through the inner product.
double element_norm(const ModuleElement& x);
/// Same value computed as max over blocks of sigma_max of the flattened
/// coordinate matrix; the two routes cross-check each other.
double flat_norm(const ModuleElement& x);

/// A submodule of an ambient module, represented by its orthogonal projection
/// (a k x k projection dominated by the ambient one).
class Submodule {
public:
    Submodule() = default;
    Submodule(HilbertModule ambient, MatrixOverA proj, const Tolerances& tol = {});

    const HilbertModule& ambient() const { return ambient_; }
    const MatrixOverA& projection() const { return proj_; }

    /// The submodule as a Hilbert module in its own right (same ambient rank).
    HilbertModule as_module() const;

private:
    HilbertModule ambient_;
    MatrixOverA proj_;
};

/// Orthogonal projection onto the A-linear span of the generators, per block
/// via SVD of the stacked generator columns. Raises ToleranceAmbiguity when a
/// singular value lies within a factor 10 of the rank cutoff.
Submodule submodule_from_generators(const HilbertModule& ambient,
                                    const std::vector<ModuleElement>& gens,
                                    const Tolerances& tol = {});

Submodule orthogonal_complement(const Submodule& k);

Submodule full_submodule(const HilbertModule& m);
Submodule zero_submodule(const HilbertModule& m);

/// Ambient ranks add; the projection is block diagonal.
HilbertModule direct_sum(const HilbertModule& m, const HilbertModule& n);

/// Re-symmetrize and round eigenvalues to {0,1}.
MatrixOverA canonicalize_projection(const MatrixOverA& p, const Tolerances& tol = {});

/// Per-block orthonormal bases for the range of a projection: block i gets a
/// (k*n_i) x r_i column frame.
std::vector<ComplexMatrix> range_basis(const MatrixOverA& proj, const Tolerances& tol = {});

} // namespace hcm
