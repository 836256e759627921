#include "hcm/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hcm {

K0Class::K0Class(AlgebraShape shape, std::vector<std::int64_t> ranks)
    : shape_(std::move(shape)), ranks_(std::move(ranks)) {
    if (static_cast<int>(ranks_.size()) != shape_.num_blocks())
        throw ShapeMismatch("K0Class: rank vector length != number of blocks");
}

K0Class K0Class::zero(const AlgebraShape& shape) {
    return K0Class(shape, std::vector<std::int64_t>(shape.num_blocks(), 0));
}

bool K0Class::operator==(const K0Class& o) const {
    return shape_ == o.shape_ && ranks_ == o.ranks_;
}

std::string K0Class::to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < ranks_.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(ranks_[i]);
    }
    return s + ")";
}

K0Class add(const K0Class& a, const K0Class& b) {
    if (a.shape() != b.shape()) throw ShapeMismatch("K0Class add: shapes differ");
    std::vector<std::int64_t> r(a.ranks());
    for (size_t i = 0; i < r.size(); ++i) r[i] += b.ranks()[i];
    return K0Class(a.shape(), std::move(r));
}

K0Class sub(const K0Class& a, const K0Class& b) {
    if (a.shape() != b.shape()) throw ShapeMismatch("K0Class sub: shapes differ");
    std::vector<std::int64_t> r(a.ranks());
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b.ranks()[i];
    return K0Class(a.shape(), std::move(r));
}

namespace {

// blockwise ranks of a projection, guarded against ambiguous singular values
std::vector<std::int64_t> projection_ranks(const MatrixOverA& proj, const Tolerances& tol) {
    const int nb = proj.num_blocks();
    std::vector<Svd> decs(nb);
    double sigma_max = 0.0;
    for (int i = 0; i < nb; ++i) {
        decs[i] = svd(proj.block(i), tol);
        if (!decs[i].sigma.empty()) sigma_max = std::max(sigma_max, decs[i].sigma[0]);
    }
    std::vector<std::int64_t> ranks(nb, 0);
    if (sigma_max == 0.0) return ranks;
    const double cutoff = tol.rank_rel * sigma_max;
    for (int i = 0; i < nb; ++i) {
        for (double s : decs[i].sigma) {
            if (s >= cutoff / 10.0 && s <= cutoff * 10.0)
                throw ToleranceAmbiguity("k0_class: singular value " + std::to_string(s) +
                                         " within a factor 10 of the rank cutoff");
            if (s > cutoff) ++ranks[i];
        }
    }
    return ranks;
}

} // namespace

K0Class k0_class(const HilbertModule& m, const Tolerances& tol) {
    return K0Class(m.shape(), projection_ranks(m.projection(), tol));
}

K0Class k0_class(const Submodule& s, const Tolerances& tol) {
    return K0Class(s.ambient().shape(), projection_ranks(s.projection(), tol));
}

namespace {

struct RestrictedSvd {
    std::vector<ComplexMatrix> basis_m;  // per block, source frame
    std::vector<ComplexMatrix> basis_n;  // per block, target frame
    std::vector<Svd> decs;               // SVD of B_N^* F B_M per block
    double sigma_max = 0.0;
};

RestrictedSvd restricted_svd(const AdjointableOperator& f, const Tolerances& tol) {
    RestrictedSvd out;
    out.basis_m = range_basis(f.source().projection(), tol);
    out.basis_n = range_basis(f.target().projection(), tol);
    const int nb = f.mat().num_blocks();
    out.decs.resize(nb);
    for (int i = 0; i < nb; ++i) {
        const ComplexMatrix restricted =
            mul(adjoint(out.basis_n[i]), mul(f.mat().block(i), out.basis_m[i]));
        out.decs[i] = svd(restricted, tol);
        if (!out.decs[i].sigma.empty()) out.sigma_max = std::max(out.sigma_max, out.decs[i].sigma[0]);
    }
    return out;
}

FredholmData decompose_at(const AdjointableOperator& f, const RestrictedSvd& r, double cutoff,
                          double separation, const Tolerances& tol) {
    const AlgebraShape& shape = f.source().shape();
    const int nb = shape.num_blocks();

    if (r.sigma_max > 0.0 && cutoff > 0.0) {
        for (int i = 0; i < nb; ++i)
            for (double s : r.decs[i].sigma)
                if (s >= cutoff / separation && s <= cutoff * separation)
                    throw ToleranceAmbiguity("mf_decompose: singular value " + std::to_string(s) +
                                             " within a factor " + std::to_string(separation) +
                                             " of cutoff " + std::to_string(cutoff));
    }

    MatrixOverA p_m0(shape, f.source().ambient_rank(), f.source().ambient_rank());
    MatrixOverA p_n0(shape, f.target().ambient_rank(), f.target().ambient_rank());
    for (int i = 0; i < nb; ++i) {
        int kept = 0;
        if (r.sigma_max > 0.0)
            for (double s : r.decs[i].sigma)
                if (s > cutoff) ++kept;
        const ComplexMatrix vm = mul(r.basis_m[i], submatrix(r.decs[i].v, 0, 0, r.decs[i].v.rows(), kept));
        const ComplexMatrix un = mul(r.basis_n[i], submatrix(r.decs[i].u, 0, 0, r.decs[i].u.rows(), kept));
        p_m0.block(i) = mul(vm, adjoint(vm));
        p_n0.block(i) = mul(un, adjoint(un));
    }

    FredholmData data;
    data.m0 = Submodule(f.source(), canonicalize_projection(p_m0, tol), tol);
    data.m1 = orthogonal_complement(data.m0);
    data.n0 = Submodule(f.target(), canonicalize_projection(p_n0, tol), tol);
    data.n1 = orthogonal_complement(data.n0);
    data.f0 = AdjointableOperator(data.m0.as_module(), data.n0.as_module(), f.mat());
    data.f1 = AdjointableOperator(data.m1.as_module(), data.n1.as_module(), f.mat());
    data.index = sub(k0_class(data.m1, tol), k0_class(data.n1, tol));
    return data;
}

} // namespace

FredholmData mf_decompose(const AdjointableOperator& f, const Tolerances& tol) {
    const RestrictedSvd r = restricted_svd(f, tol);
    const double cutoff = tol.rank_rel * r.sigma_max;
    return decompose_at(f, r, cutoff, 10.0, tol);
}

FredholmData mf_decompose_with_cutoff(const AdjointableOperator& f, double cutoff,
                                      double separation, const Tolerances& tol) {
    if (cutoff < 0.0 || separation < 1.0)
        throw InvalidInput("mf_decompose_with_cutoff: need cutoff >= 0 and separation >= 1");
    const RestrictedSvd r = restricted_svd(f, tol);
    return decompose_at(f, r, cutoff, separation, tol);
}

FredholmDataCheck check_fredholm_data(const AdjointableOperator& f, const FredholmData& data,
                                      const Tolerances& tol) {
    FredholmDataCheck out;
    const MatrixOverA& pm = f.source().projection();
    out.m_side_completeness =
        max_abs_diff(add(data.m0.projection(), data.m1.projection()), pm);
    out.m_side_orthogonality = op_norm(mul(data.m0.projection(), data.m1.projection()));

    const K0Class kn = k0_class(f.target(), tol);
    const K0Class kn0 = k0_class(data.n0, tol);
    const K0Class kn1 = k0_class(data.n1, tol);
    double rank_defect = 0.0;
    for (size_t i = 0; i < kn.ranks().size(); ++i)
        rank_defect += std::abs(static_cast<double>(kn0.ranks()[i] + kn1.ranks()[i] - kn.ranks()[i]));
    out.n_side_rank_defect = rank_defect;

    // block diagonality: F maps M0 into N0 and M1 into N1
    const MatrixOverA pn = f.target().projection();
    const MatrixOverA lost0 =
        mul(sub(pn, data.n0.projection()), mul(f.mat(), data.m0.projection()));
    const MatrixOverA lost1 =
        mul(sub(pn, data.n1.projection()), mul(f.mat(), data.m1.projection()));
    out.off_diagonal = std::max(op_norm(lost0), op_norm(lost1));

    // invertibility margin of F0 on its modules
    const RestrictedSvd r0 = restricted_svd(data.f0, tol);
    double sig_min = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const Svd& d : r0.decs)
        for (double s : d.sigma) {
            any = true;
            sig_min = std::min(sig_min, s);
        }
    out.f0_sigma_min = any ? sig_min : std::numeric_limits<double>::infinity();
    return out;
}

FredholmData orthogonalize_target(const AdjointableOperator& f, const FredholmData& data,
                                  const Tolerances& tol) {
    // P = F (F*F)^{-1} F* for F restricted to M0, extended by zero
    const MatrixOverA g = mul(f.mat(), data.m0.projection());
    const MatrixOverA gram = mul(adjoint(g), g);
    const MatrixOverA p = mul(g, mul(pinv_psd(gram, tol), adjoint(g)));

    const MatrixOverA pn = f.target().projection();
    FredholmData out;
    out.m0 = data.m0;
    out.m1 = data.m1;
    out.n0 = data.n0;
    out.n1 = Submodule(f.target(), canonicalize_projection(sub(pn, p), tol), tol);
    out.f0 = data.f0;
    // F1 replaced by (1 - P) F1
    const MatrixOverA f1_mat = mul(sub(pn, p), mul(f.mat(), data.m1.projection()));
    out.f1 = AdjointableOperator(out.m1.as_module(), out.n1.as_module(), f1_mat);
    out.index = sub(k0_class(out.m1, tol), k0_class(out.n1, tol));
    return out;
}

K0Class index_via_kernels(const AdjointableOperator& f, const Tolerances& tol) {
    const Submodule ker = kernel(f, tol);
    const Submodule coker = kernel(adjoint(f), tol);  // (Im F)^perp = Ker F*
    return sub(k0_class(ker, tol), k0_class(coker, tol));
}

bool IndexTheoremReport::passed(double tol_abs) const {
    if (!indices_equal || !flags.empty()) return false;
    for (const auto& [name, value] : residuals)
        if (!(value <= tol_abs)) return false;
    return true;
}

IndexTheoremReport verify_index_theorem(const AdjointableOperator& f, const Tolerances& tol) {
    FredholmData data;
    try {
        data = mf_decompose(f, tol);
    } catch (const ToleranceAmbiguity& e) {
        IndexTheoremReport rep;
        rep.index_decomposition = K0Class::zero(f.source().shape());
        rep.index_kernels = K0Class::zero(f.source().shape());
        rep.flags.push_back(std::string("ToleranceAmbiguity(mf_decompose): ") + e.what());
        try {
            rep.index_kernels = index_via_kernels(f, tol);
        } catch (const ToleranceAmbiguity& e2) {
            rep.flags.push_back(std::string("ToleranceAmbiguity(index_via_kernels): ") + e2.what());
        }
        return rep;
    }
    return verify_index_theorem(f, data, tol);
}

IndexTheoremReport verify_index_theorem(const AdjointableOperator& f, const FredholmData& data,
                                        const Tolerances& tol) {
    IndexTheoremReport rep;
    rep.index_decomposition = data.index;
    rep.index_kernels = K0Class::zero(f.source().shape());
    try {
        rep.index_kernels = index_via_kernels(f, tol);
    } catch (const ToleranceAmbiguity& e) {
        rep.flags.push_back(std::string("ToleranceAmbiguity(index_via_kernels): ") + e.what());
        return rep;
    }
    rep.indices_equal = rep.index_decomposition == rep.index_kernels;
    if (!rep.indices_equal) rep.flags.push_back("index mismatch between the two computations");

    const double fscale = 1.0 + op_norm(f.mat());
    auto push = [&rep](const std::string& name, double value) {
        rep.residuals.emplace_back(name, value);
    };

    const FredholmDataCheck chk = check_fredholm_data(f, data, tol);
    push("m_side_completeness", chk.m_side_completeness);
    push("m_side_orthogonality", chk.m_side_orthogonality);
    push("n_side_rank_defect", chk.n_side_rank_defect);
    push("block_diagonal_off_rel", chk.off_diagonal / fscale);

    // decomposition-independence: index = [M] - [N]
    const K0Class euler = sub(k0_class(f.source(), tol), k0_class(f.target(), tol));
    if (!(euler == data.index)) rep.flags.push_back("index != [M] - [N]");

    // target orthogonalization step
    const FredholmData ortho = orthogonalize_target(f, data, tol);
    push("n_orthogonality_after",
         op_norm(mul(ortho.n0.projection(), ortho.n1.projection())));
    if (!(ortho.index == data.index))
        rep.flags.push_back("orthogonalize_target changed the index");

    // F~ = diag(F0, (1-P) F1) as a full operator M -> N
    const MatrixOverA ft_mat = add(mul(f.mat(), data.m0.projection()),
                                   mul(ortho.f1.mat(), data.m1.projection()));
    const AdjointableOperator ft(f.source(), f.target(), ft_mat);

    try {
        const Submodule ker_f = kernel(f, tol);
        const Submodule ker_ft = kernel(ft, tol);
        push("kernel_preserved", max_abs_diff(ker_f.projection(), ker_ft.projection()));
        const Submodule im_f = image(f, tol);
        const Submodule im_ft = image(ft, tol);
        push("image_preserved", max_abs_diff(im_f.projection(), im_ft.projection()));

        // refinement M1 = Ker F (+) M2, with M2 isomorphic to ((Im F)^perp)^perp in N1
        push("kernel_inside_m1",
             op_norm(sub(mul(data.m1.projection(), ker_f.projection()), ker_f.projection())));
        const Submodule m2(f.source(),
                           canonicalize_projection(sub(data.m1.projection(), ker_f.projection()), tol),
                           tol);
        const Submodule coker = kernel(adjoint(f), tol);
        push("cokernel_inside_n1",
             op_norm(sub(mul(ortho.n1.projection(), coker.projection()), coker.projection())));
        const Submodule cc(f.target(),
                           canonicalize_projection(sub(ortho.n1.projection(), coker.projection()), tol),
                           tol);

        if (!(k0_class(m2, tol) == k0_class(cc, tol)))
            rep.flags.push_back("[M2] != [((Im F)^perp)^perp]");

        // the polar part of F~ restricted to M2 is a unitary onto CC
        const AdjointableOperator f2(m2.as_module(), cc.as_module(), ft_mat);
        const MatrixOverA gram2 = mul(adjoint(f2.mat()), f2.mat());
        const MatrixOverA u_mat = mul(f2.mat(), pinv_psd(sqrt_psd(gram2, tol), tol));
        push("restricted_polar_unitary_defect",
             std::max(max_abs_diff(mul(adjoint(u_mat), u_mat), m2.projection()),
                      max_abs_diff(mul(u_mat, adjoint(u_mat)), cc.projection())));

        // three-block form: everything off diag(F0, F2, 0) vanishes
        double off3 = 0.0;
        off3 = std::max(off3, op_norm(mul(cc.projection(), mul(ft_mat, data.m0.projection()))));
        off3 = std::max(off3, op_norm(mul(coker.projection(), mul(ft_mat, data.m0.projection()))));
        off3 = std::max(off3, op_norm(mul(ortho.n0.projection(), mul(ft_mat, m2.projection()))));
        off3 = std::max(off3, op_norm(mul(coker.projection(), mul(ft_mat, m2.projection()))));
        off3 = std::max(off3, op_norm(mul(ft_mat, ker_f.projection())));
        push("three_block_off_diagonal_rel", off3 / fscale);

        // Ker F and (Im F)^perp are honest projective submodules
        push("kernel_is_projection",
             max_abs_diff(mul(ker_f.projection(), ker_f.projection()), ker_f.projection()));
        push("cokernel_is_projection",
             max_abs_diff(mul(coker.projection(), coker.projection()), coker.projection()));
    } catch (const ToleranceAmbiguity& e) {
        rep.flags.push_back(std::string("ToleranceAmbiguity(refinement): ") + e.what());
    }

    return rep;
}

} // namespace hcm
