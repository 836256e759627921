#pragma once

#include "hcm/module.hpp"

namespace hcm {

/// A bounded anti-A-linear functional on a module, represented through its
/// Riesz vector: f(m) = <m, riesz>. Over these algebras every module is
/// self-dual, so the representation is total and M' is again a Hilbert module
/// with <f, g>' = <riesz_f, riesz_g>.
class DualElement {
public:
    DualElement() = default;
    DualElement(HilbertModule parent, ModuleElement riesz)
        : parent_(std::move(parent)), riesz_(std::move(riesz)) {}

    const HilbertModule& parent() const { return parent_; }
    const ModuleElement& riesz() const { return riesz_; }

    /// f(m) = <m, riesz>, computed through the inner product.
    AlgebraElement evaluate(const ModuleElement& m) const;

    /// sup over the unit ball, computed exactly as the largest singular value
    /// of the flattened Riesz coordinates per block.
    double operator_norm() const;

private:
    HilbertModule parent_;
    ModuleElement riesz_;
};

/// Element of the bidual M'', also carried by a Riesz vector:
/// X(f) = <riesz_f, riesz2>.
class BidualElement {
public:
    BidualElement() = default;
    BidualElement(HilbertModule parent, ModuleElement riesz2)
        : parent_(std::move(parent)), riesz2_(std::move(riesz2)) {}

    const HilbertModule& parent() const { return parent_; }
    const ModuleElement& riesz2() const { return riesz2_; }

    AlgebraElement evaluate(const DualElement& f) const;
    double operator_norm() const;

private:
    HilbertModule parent_;
    ModuleElement riesz2_;
};

/// m |-> <., m>, the isometric inclusion of M into M'.
DualElement hat(const ModuleElement& m);

/// m |-> the bidual functional f |-> (f(m))^*.
BidualElement dot(const ModuleElement& m);
inline BidualElement D_map(const ModuleElement& m) { return dot(m); }

/// Restriction of a bidual element to the image of M in M'.
DualElement I_map(const BidualElement& x);

/// The inner product on M'' : <X, Y>'' = Y(I(X)).
AlgebraElement pas_inner(const BidualElement& x, const BidualElement& y);

/// f |-> (g |-> <g, f>'), the inverse of I on M'.
BidualElement phi(const DualElement& f);

/// The extension of the module inner product to M'.
AlgebraElement dual_inner(const DualElement& f, const DualElement& g);

/// Right module action on functionals: (f a)(m) = f(m) a.
DualElement dual_action(const DualElement& f, const AlgebraElement& a);

/// Recovers the unique Riesz vector of a functional from its values on a
/// spanning set (least-squares per block). The self-duality witness: the
/// returned functional reproduces the table within tol, or the table was not
/// conjugate-A-linear / not bounded-consistent and InvalidInput is raised.
DualElement riesz_from_evaluations(const HilbertModule& parent,
                                   const std::vector<ModuleElement>& span,
                                   const std::vector<AlgebraElement>& values,
                                   const Tolerances& tol = {});

} // namespace hcm
