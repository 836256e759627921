#include "hcm/operators.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hcm {

AdjointableOperator::AdjointableOperator(HilbertModule source, HilbertModule target,
                                         const MatrixOverA& mat)
    : source_(std::move(source)), target_(std::move(target)) {
    if (mat.shape() != source_.shape() || mat.shape() != target_.shape())
        throw ShapeMismatch("AdjointableOperator: algebra shape mismatch");
    if (mat.rows() != target_.ambient_rank() || mat.cols() != source_.ambient_rank())
        throw ShapeMismatch("AdjointableOperator: matrix is " + std::to_string(mat.rows()) + "x" +
                            std::to_string(mat.cols()) + " over A, expected " +
                            std::to_string(target_.ambient_rank()) + "x" +
                            std::to_string(source_.ambient_rank()));
    mat_ = mul(target_.projection(), mul(mat, source_.projection()));
}

ModuleElement AdjointableOperator::apply(const ModuleElement& x) const {
    if (!x.parent().same_space(source_))
        throw ParentMismatch("apply: element not in the source module");
    return ModuleElement(target_, mul(mat_, x.vec()));
}

AdjointableOperator identity_operator(const HilbertModule& m) {
    return AdjointableOperator(m, m, MatrixOverA::identity(m.shape(), m.ambient_rank()));
}

AdjointableOperator zero_operator(const HilbertModule& source, const HilbertModule& target) {
    return AdjointableOperator(source, target,
                               MatrixOverA(source.shape(), target.ambient_rank(), source.ambient_rank()));
}

AdjointableOperator inclusion(const Submodule& k) {
    return AdjointableOperator(k.as_module(), k.ambient(),
                               MatrixOverA::identity(k.ambient().shape(), k.ambient().ambient_rank()));
}

AdjointableOperator compose(const AdjointableOperator& s, const AdjointableOperator& t) {
    if (!t.target().same_space(s.source()))
        throw ParentMismatch("compose: inner modules do not match");
    return AdjointableOperator(t.source(), s.target(), mul(s.mat(), t.mat()));
}

AdjointableOperator add(const AdjointableOperator& s, const AdjointableOperator& t) {
    if (!s.source().same_space(t.source()) || !s.target().same_space(t.target()))
        throw ParentMismatch("add: operators between different modules");
    return AdjointableOperator(s.source(), s.target(), add(s.mat(), t.mat()));
}

AdjointableOperator sub(const AdjointableOperator& s, const AdjointableOperator& t) {
    if (!s.source().same_space(t.source()) || !s.target().same_space(t.target()))
        throw ParentMismatch("sub: operators between different modules");
    return AdjointableOperator(s.source(), s.target(), sub(s.mat(), t.mat()));
}

AdjointableOperator scale(const AdjointableOperator& t, cplx factor) {
    return AdjointableOperator(t.source(), t.target(), scale(t.mat(), factor));
}

double op_norm(const AdjointableOperator& t) { return op_norm(t.mat()); }

AdjointableOperator adjoint(const AdjointableOperator& t) {
    return AdjointableOperator(t.target(), t.source(), adjoint(t.mat()));
}

AdjointableOperator banach_dual(const AdjointableOperator& t) {
    // Lambda_M . T* . Lambda_N^{-1}; the hat identifications are identities
    // in Riesz coordinates
    return adjoint(t);
}

AdjointableOperator t_sharp(const AdjointableOperator& t) {
    // (T# m)(k) = <Tk, m> = <k, T* m>, so T# is T* into the Riesz model of K'
    return adjoint(t);
}

JSharpQPair j_sharp_q_pair(const Submodule& k) {
    JSharpQPair out;
    out.biperp = orthogonal_complement(orthogonal_complement(k));
    const HilbertModule k_dual = k.as_module();  // Riesz model of K'
    const HilbertModule kpp = out.biperp.as_module();
    // J# = T# of the inclusion J : K -> L, restricted to K^{perp perp}
    out.j_sharp = AdjointableOperator(kpp, k_dual, t_sharp(inclusion(k)).mat());
    out.q = AdjointableOperator(k_dual, kpp, k.projection());
    return out;
}

Submodule kernel(const AdjointableOperator& t, const Tolerances& tol) {
    const AlgebraShape& shape = t.source().shape();
    const int nb = shape.num_blocks();
    const std::vector<ComplexMatrix> basis = range_basis(t.source().projection(), tol);

    std::vector<Svd> decs(nb);
    double sigma_max = 0.0;
    for (int i = 0; i < nb; ++i) {
        const ComplexMatrix restricted = mul(t.mat().block(i), basis[i]);
        decs[i] = svd(restricted, tol);
        if (!decs[i].sigma.empty()) sigma_max = std::max(sigma_max, decs[i].sigma[0]);
    }
    const double cutoff = tol.rank_rel * sigma_max;
    if (sigma_max > 0.0) {
        for (int i = 0; i < nb; ++i)
            for (double s : decs[i].sigma)
                if (s >= cutoff / 10.0 && s <= cutoff * 10.0)
                    throw ToleranceAmbiguity("kernel: singular value " + std::to_string(s) +
                                             " within a factor 10 of cutoff");
    }

    // null projector within the module: basis * (I - V_kept V_kept^*) * basis^*
    MatrixOverA proj(shape, t.source().ambient_rank(), t.source().ambient_rank());
    for (int i = 0; i < nb; ++i) {
        const int r = basis[i].cols();
        ComplexMatrix inner_proj = ComplexMatrix::identity(r);
        if (sigma_max > 0.0) {
            int kept = 0;
            for (double s : decs[i].sigma)
                if (s > cutoff) ++kept;
            if (kept > 0) {
                const ComplexMatrix vk = submatrix(decs[i].v, 0, 0, r, kept);
                inner_proj = sub(inner_proj, mul(vk, adjoint(vk)));
            }
        }
        proj.block(i) = mul(mul(basis[i], inner_proj), adjoint(basis[i]));
    }
    return Submodule(t.source(), canonicalize_projection(proj, tol), tol);
}

Submodule image(const AdjointableOperator& t, const Tolerances& tol) {
    const AlgebraShape& shape = t.source().shape();
    const int nb = shape.num_blocks();

    std::vector<Svd> decs(nb);
    double sigma_max = 0.0;
    for (int i = 0; i < nb; ++i) {
        decs[i] = svd(t.mat().block(i), tol);
        if (!decs[i].sigma.empty()) sigma_max = std::max(sigma_max, decs[i].sigma[0]);
    }
    const double cutoff = tol.rank_rel * sigma_max;
    if (sigma_max > 0.0) {
        for (int i = 0; i < nb; ++i)
            for (double s : decs[i].sigma)
                if (s >= cutoff / 10.0 && s <= cutoff * 10.0)
                    throw ToleranceAmbiguity("image: singular value " + std::to_string(s) +
                                             " within a factor 10 of cutoff");
    }

    MatrixOverA proj(shape, t.target().ambient_rank(), t.target().ambient_rank());
    for (int i = 0; i < nb; ++i) {
        int kept = 0;
        if (sigma_max > 0.0)
            for (double s : decs[i].sigma)
                if (s > cutoff) ++kept;
        const ComplexMatrix uk = submatrix(decs[i].u, 0, 0, t.mat().block(i).rows(), kept);
        proj.block(i) = mul(uk, adjoint(uk));
    }
    return Submodule(t.target(), canonicalize_projection(proj, tol), tol);
}

namespace {

bool is_zero_class(const Submodule& sub, const Tolerances& tol) {
    return op_norm(sub.projection()) <= tol.invariant_abs;
}

// sigma range of a PSD matrix over A restricted to a module
void restricted_sigma_range(const MatrixOverA& s, const HilbertModule& m, const Tolerances& tol,
                            double& sig_min, double& sig_max) {
    const std::vector<ComplexMatrix> basis = range_basis(m.projection(), tol);
    sig_min = std::numeric_limits<double>::infinity();
    sig_max = 0.0;
    bool any = false;
    for (int i = 0; i < s.num_blocks(); ++i) {
        if (basis[i].cols() == 0) continue;
        const ComplexMatrix restricted = mul(mul(adjoint(basis[i]), s.block(i)), basis[i]);
        const Svd dec = svd(restricted, tol);
        for (double v : dec.sigma) {
            any = true;
            sig_min = std::min(sig_min, v);
            sig_max = std::max(sig_max, v);
        }
    }
    if (!any) {
        sig_min = 0.0;
        sig_max = 0.0;
    }
}

} // namespace

PolarIsomorphismResult polar_isomorphism(const AdjointableOperator& t, const Tolerances& tol) {
    // precondition: Ker T = 0
    if (!is_zero_class(kernel(t, tol), tol))
        throw PreconditionFailed("polar_isomorphism: Ker T is nontrivial");

    // T' : N' -> M' in Riesz coordinates
    const AdjointableOperator t_dual = banach_dual(t);
    if (!is_zero_class(kernel(t_dual, tol), tol))
        throw PreconditionFailed("polar_isomorphism: Ker T' is nontrivial");

    // (T(M))^{perp perp} must be all of N
    const Submodule im = image(t, tol);
    const Submodule im_biperp = orthogonal_complement(orthogonal_complement(im));
    if (max_abs_diff(im_biperp.projection(), t.target().projection()) > tol.invariant_abs)
        throw PreconditionFailed("polar_isomorphism: (T(M))^{perp perp} != N");

    // S = ((T')* T')^{1/2} on N'
    const MatrixOverA gram = mul(adjoint(t_dual.mat()), t_dual.mat());
    const MatrixOverA s = sqrt_psd(gram, tol);

    PolarIsomorphismResult out;
    restricted_sigma_range(s, t.target(), tol, out.sigma_min_s, out.sigma_max_s);
    const double cutoff = tol.rank_rel * global_sigma_max(s);
    if (out.sigma_max_s > 0.0 && out.sigma_min_s < cutoff)
        throw IllConditioned("polar_isomorphism: sigma_min(S) = " + std::to_string(out.sigma_min_s) +
                             " below rank cutoff; (T*T)^{-1/2} diverges");
    out.cond_s = out.sigma_min_s > 0.0 ? out.sigma_max_s / out.sigma_min_s : 0.0;

    // K = closure of S(N') = its span in finite dimensions
    const HilbertModule n_dual = t.target();  // Riesz model of N'
    const AdjointableOperator s_op(n_dual, n_dual, s);
    const Submodule k = image(s_op, tol);

    // U : K -> M' extends U0(Sf) = T'f, i.e. U = T' . pinv(S) on K
    const AdjointableOperator u(k.as_module(), t.source(), mul(t_dual.mat(), pinv_psd(s, tol)));

    // U# : M' -> K', then (J#)^{-1} = Q from the isometric pair
    const AdjointableOperator u_sharp = t_sharp(u);
    const JSharpQPair jq = j_sharp_q_pair(k);

    // Q lands in K^{perp perp} = N'; rehome to N
    const MatrixOverA v_mat = mul(jq.q.mat(), u_sharp.mat());
    out.iso = AdjointableOperator(t.source(), t.target(), v_mat);
    return out;
}

ComplementDecomposition complement_decomposition(const Submodule& k, const Tolerances& tol) {
    ComplementDecomposition out;
    const HilbertModule l = k.ambient();
    const HilbertModule k_dual = k.as_module();

    // R = i' : L' -> K' is the compression onto K in Riesz coordinates
    out.r = AdjointableOperator(l, k_dual, k.projection());
    out.r_star = adjoint(out.r);

    out.biperp = orthogonal_complement(orthogonal_complement(k));
    out.perp = orthogonal_complement(k);

    const MatrixOverA rrs = mul(out.r.mat(), out.r_star.mat());
    out.rr_star_identity_residual = max_abs_diff(rrs, k_dual.projection());

    const MatrixOverA rsr = mul(out.r_star.mat(), out.r.mat());
    out.projection_residual = max_abs_diff(mul(rsr, rsr), rsr);

    const Submodule ker_r = kernel(out.r, tol);
    out.kernel_matches_perp_residual =
        max_abs_diff(ker_r.projection(), out.perp.projection());
    return out;
}

} // namespace hcm
