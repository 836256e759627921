#include "hcm/duality.hpp"

#include <string>

namespace hcm {

AlgebraElement DualElement::evaluate(const ModuleElement& m) const {
    return inner(m, riesz_);
}

double DualElement::operator_norm() const { return flat_norm(riesz_); }

AlgebraElement BidualElement::evaluate(const DualElement& f) const {
    return inner(f.riesz(), riesz2_);
}

double BidualElement::operator_norm() const { return flat_norm(riesz2_); }

DualElement hat(const ModuleElement& m) { return DualElement(m.parent(), m); }

BidualElement dot(const ModuleElement& m) { return BidualElement(m.parent(), m); }

DualElement I_map(const BidualElement& x) { return DualElement(x.parent(), x.riesz2()); }

AlgebraElement pas_inner(const BidualElement& x, const BidualElement& y) {
    if (!x.parent().same_space(y.parent()))
        throw ParentMismatch("pas_inner: bidual elements over different modules");
    return y.evaluate(I_map(x));
}

BidualElement phi(const DualElement& f) { return BidualElement(f.parent(), f.riesz()); }

AlgebraElement dual_inner(const DualElement& f, const DualElement& g) {
    if (!f.parent().same_space(g.parent()))
        throw ParentMismatch("dual_inner: functionals over different modules");
    return inner(f.riesz(), g.riesz());
}

DualElement dual_action(const DualElement& f, const AlgebraElement& a) {
    return DualElement(f.parent(), module_action(f.riesz(), a));
}

DualElement riesz_from_evaluations(const HilbertModule& parent,
                                   const std::vector<ModuleElement>& span,
                                   const std::vector<AlgebraElement>& values,
                                   const Tolerances& tol) {
    if (span.empty() || span.size() != values.size())
        throw InvalidInput("riesz_from_evaluations: need matching nonempty span and values");
    for (const auto& s : span)
        if (!s.parent().same_space(parent))
            throw ParentMismatch("riesz_from_evaluations: span element outside module");

    const AlgebraShape& shape = parent.shape();
    const int nb = shape.num_blocks();
    const int p = static_cast<int>(span.size());

    // per block solve  S^* R = V  in the least-squares sense, where S stacks
    // the flattened span columns and V stacks the prescribed values
    MatrixOverA riesz_vec(shape, parent.ambient_rank(), 1);
    for (int i = 0; i < nb; ++i) {
        const int n = shape.block_dim(i);
        ComplexMatrix s = span[0].vec().block(i);
        ComplexMatrix v = values[0].block(i);
        for (int g = 1; g < p; ++g) {
            s = hstack(s, span[g].vec().block(i));
            ComplexMatrix vg = values[g].block(i);
            ComplexMatrix stacked(v.rows() + n, n);
            set_submatrix(stacked, 0, 0, v);
            set_submatrix(stacked, v.rows(), 0, vg);
            v = std::move(stacked);
        }
        // R = pinv(S^*) V; minimal-norm solution lies in the column space of S
        riesz_vec.block(i) = mul(pinv(adjoint(s), tol), v);
    }

    ModuleElement r = parent.project(riesz_vec);
    DualElement f(parent, r);

    // reproduction check: the table must actually be a functional
    for (int g = 0; g < p; ++g) {
        const double defect = max_abs_diff(f.evaluate(span[g]), values[g]);
        if (defect > tol.invariant_abs * (1.0 + norm(values[g])))
            throw InvalidInput("riesz_from_evaluations: table is not reproduced (defect " +
                               std::to_string(defect) + ")");
    }
    return f;
}

} // namespace hcm
