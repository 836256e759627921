#pragma once

#include "hcm/duality.hpp"
#include "hcm/module.hpp"

namespace hcm {

/// A bounded A-linear map between Hilbert modules, stored as a matrix over A
/// compressed to the modules: mat = proj_target * mat * proj_source.
/// Self-duality makes every such map adjointable.
class AdjointableOperator {
public:
    AdjointableOperator() = default;
    AdjointableOperator(HilbertModule source, HilbertModule target, const MatrixOverA& mat);

    const HilbertModule& source() const { return source_; }
    const HilbertModule& target() const { return target_; }
    const MatrixOverA& mat() const { return mat_; }

    ModuleElement apply(const ModuleElement& x) const;

private:
    HilbertModule source_;
    HilbertModule target_;
    MatrixOverA mat_;
};

AdjointableOperator identity_operator(const HilbertModule& m);
AdjointableOperator zero_operator(const HilbertModule& source, const HilbertModule& target);
/// Inclusion of a submodule into its ambient module.
AdjointableOperator inclusion(const Submodule& k);

/// s . t (apply t first).
AdjointableOperator compose(const AdjointableOperator& s, const AdjointableOperator& t);
AdjointableOperator add(const AdjointableOperator& s, const AdjointableOperator& t);
AdjointableOperator sub(const AdjointableOperator& s, const AdjointableOperator& t);
AdjointableOperator scale(const AdjointableOperator& t, cplx factor);

double op_norm(const AdjointableOperator& t);

/// T* with <Tx, y> = <x, T*y>.
AdjointableOperator adjoint(const AdjointableOperator& t);

/// The Banach dual T' : N' -> M', f |-> f . T, written in Riesz coordinates
/// as Lambda_M . T* . Lambda_N^{-1}. The hat identifications Lambda are
/// coordinate identities here, so the returned matrix equals the adjoint's;
/// the commuting square is the tested contract.
AdjointableOperator banach_dual(const AdjointableOperator& t);

/// For T : K -> M, the map T# : M -> K' with (T# m)(k) = <Tk, m>.
AdjointableOperator t_sharp(const AdjointableOperator& t);

struct JSharpQPair {
    AdjointableOperator j_sharp;  ///< K^{perp perp} -> K' (Riesz: the K-module)
    AdjointableOperator q;        ///< K' -> K^{perp perp}
    Submodule biperp;             ///< K^{perp perp}, computed by double complement
};

/// The isometric pair, constructed on K^{perp perp} (in finite dimensions a
/// proper K with trivial complement cannot exist).
JSharpQPair j_sharp_q_pair(const Submodule& k);

struct PolarIsomorphismResult {
    AdjointableOperator iso;  ///< the isometric isomorphism M' -> N' (Riesz: M -> N)
    double cond_s = 0.0;      ///< condition number of S = ((T')* T')^{1/2} on N'
    double sigma_min_s = 0.0;
    double sigma_max_s = 0.0;
};

/// Runs the polar-type construction: S = ((T')* T')^{1/2}, K = span of S(N'),
/// U0(Sf) = T'f extended to K, then (J#)^{-1} . U#. Preconditions (trivial
/// kernels of T and T', density of the image) are checked numerically and
/// raise PreconditionFailed; a numerically singular S raises IllConditioned.
PolarIsomorphismResult polar_isomorphism(const AdjointableOperator& t, const Tolerances& tol = {});

struct ComplementDecomposition {
    AdjointableOperator r;       ///< R = i' : L' -> K' in Riesz coordinates
    AdjointableOperator r_star;  ///< its adjoint K' -> L'
    Submodule biperp;            ///< K^{perp perp}
    Submodule perp;              ///< K^perp
    double rr_star_identity_residual = 0.0;   ///< || R R* - id_{K'} ||
    double projection_residual = 0.0;         ///< || (R*R)^2 - R*R ||
    double kernel_matches_perp_residual = 0.0;  ///< || proj Ker R - proj K^perp ||
};

/// The orthogonal decomposition L = K^{perp perp} (+) K^perp through the
/// Banach adjoint of the inclusion; the claimed identities are computed and
/// reported as residuals.
ComplementDecomposition complement_decomposition(const Submodule& k, const Tolerances& tol = {});

/// Kernel as a submodule of the source: per block, the null space of the
/// module-restricted matrix below the global rank cutoff.
Submodule kernel(const AdjointableOperator& t, const Tolerances& tol = {});

/// Image as a submodule of the target (closed = A-linear span here).
Submodule image(const AdjointableOperator& t, const Tolerances& tol = {});

} // namespace hcm
