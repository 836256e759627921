#include <doctest.h>

#include <cmath>

#include "hcm/operators.hpp"
#include "hcm/scenarios.hpp"

using namespace hcm;

namespace {

const AlgebraShape kShape12({1, 2});

// injective T with dense image: compress a Ginibre matrix to a random module
// and cut the target down to the image
AdjointableOperator dense_injective(const AlgebraShape& shape, int k, Rng& rng) {
    const HilbertModule m = random_projective_module(shape, k, rng);
    const HilbertModule free_target = HilbertModule::free_module(shape, k);
    const AdjointableOperator t0 = random_operator(m, free_target, rng);
    const HilbertModule n = image(t0).as_module();
    return AdjointableOperator(m, n, t0.mat());
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("adjoint of the identity") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const AdjointableOperator id = identity_operator(m);
    CHECK(max_abs_diff(adjoint(id).mat(), id.mat()) == 0.0);
}

TEST_CASE("adjoint is an involution") {
    Rng rng(1);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const HilbertModule n = random_projective_module(kShape12, 2, rng);
    const AdjointableOperator t = random_operator(m, n, rng);
    CHECK(max_abs_diff(adjoint(adjoint(t)).mat(), t.mat()) < 1e-12);
}

TEST_CASE("defining property of the adjoint") {
    Rng rng(2);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const HilbertModule n = random_projective_module(kShape12, 2, rng);
    const AdjointableOperator t = random_operator(m, n, rng);
    const AdjointableOperator ts = adjoint(t);
    for (int i = 0; i < 50; ++i) {
        const ModuleElement x = random_module_element(m, rng);
        const ModuleElement y = random_module_element(n, rng);
        CHECK(max_abs_diff(inner(t.apply(x), y), inner(x, ts.apply(y))) < 1e-10);
    }
}

TEST_CASE("banach dual of the identity") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    CHECK(max_abs_diff(banach_dual(identity_operator(m)).mat(), identity_operator(m).mat()) ==
          0.0);
}

TEST_CASE("the square relating T* and T' commutes") {
    Rng rng(3);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const HilbertModule n = random_projective_module(kShape12, 2, rng);
    const AdjointableOperator t = random_operator(m, n, rng);
    const AdjointableOperator tp = banach_dual(t);
    for (int i = 0; i < 10; ++i) {
        // (T' f)(x) = f(T x) for f = hat(y)
        const ModuleElement y = random_module_element(n, rng);
        const ModuleElement x = random_module_element(m, rng);
        const DualElement tpf(m, tp.apply(y));
        CHECK(max_abs_diff(tpf.evaluate(x), hat(y).evaluate(t.apply(x))) < 1e-10);
        // around the square: Lambda_M(T* y) is the same functional
        CHECK(max_abs_diff(hat(adjoint(t).apply(y)).evaluate(x), tpf.evaluate(x)) == 0.0);
    }
}

TEST_CASE("dense image makes the Banach dual injective") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const AdjointableOperator t = dense_injective(kShape12, 3, rng);
        const Submodule ker = kernel(banach_dual(t));
        CHECK(op_norm(ker.projection()) < 1e-10);
    }
}

TEST_CASE("t_sharp satisfies its defining formula") {
    Rng rng(5);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    const AdjointableOperator t = random_operator(m, free, rng);  // K = m, M = free
    const AdjointableOperator tsh = t_sharp(t);
    for (int i = 0; i < 10; ++i) {
        const ModuleElement mm = random_module_element(free, rng);
        const ModuleElement k = random_module_element(m, rng);
        // (T# m)(k) = <T k, m>
        const DualElement f(m, tsh.apply(mm));
        CHECK(max_abs_diff(f.evaluate(k), inner(t.apply(k), mm)) < 1e-10);
    }
    CHECK(op_norm(t_sharp(zero_operator(m, free)).mat()) == 0.0);
}

TEST_CASE("t_sharp of an inclusion sends J(k) to hat(k)") {
    Rng rng(6);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    const Submodule k = random_submodule(free, 2, rng);
    const AdjointableOperator j = inclusion(k);
    const AdjointableOperator jsh = t_sharp(j);
    for (int i = 0; i < 5; ++i) {
        const ModuleElement kk = random_module_element(k.as_module(), rng);
        const ModuleElement jk = free.element(j.apply(kk).vec());
        CHECK(max_abs_diff(jsh.apply(jk).vec(), kk.vec()) < 1e-10);
    }
}

TEST_CASE("j_sharp and q invert each other on the right spaces") {
    Rng rng(7);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    SUBCASE("full submodule") {
        const JSharpQPair jq = j_sharp_q_pair(full_submodule(free));
        CHECK(max_abs_diff(compose(jq.q, jq.j_sharp).mat(), free.projection()) < 1e-12);
        CHECK(max_abs_diff(compose(jq.j_sharp, jq.q).mat(), free.projection()) < 1e-12);
    }
    SUBCASE("random submodule") {
        const Submodule k = random_submodule(free, 2, rng);
        const JSharpQPair jq = j_sharp_q_pair(k);
        CHECK(max_abs_diff(compose(jq.q, jq.j_sharp).mat(), jq.biperp.projection()) < 1e-9);
        CHECK(max_abs_diff(compose(jq.j_sharp, jq.q).mat(), k.projection()) < 1e-9);
    }
}

TEST_CASE("the exact isometry identity") {
    Rng rng(8);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    const Submodule k = random_submodule(free, 2, rng);
    const JSharpQPair jq = j_sharp_q_pair(k);
    const HilbertModule kpp = jq.biperp.as_module();
    for (int i = 0; i < 50; ++i) {
        const ModuleElement m = random_module_element(kpp, rng);
        const ModuleElement jm = jq.j_sharp.apply(m);
        CHECK(norm(sub(inner(jm, jm), inner(m, m))) < 1e-9);
    }
}

TEST_CASE("the polar-type isomorphism is unitary for a unitary input") {
    Rng rng(9);
    const HilbertModule free = HilbertModule::free_module(kShape12, 2);
    const AdjointableOperator t(free, free, random_unitary(kShape12, 2, rng));
    const PolarIsomorphismResult res = polar_isomorphism(t);
    CHECK(max_abs_diff(compose(adjoint(res.iso), res.iso).mat(), free.projection()) < 1e-10);
    CHECK(res.cond_s == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("the polar-type isomorphism on random dense injective operators") {
    Rng rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        const AdjointableOperator t = dense_injective(kShape12, 3, rng);
        const PolarIsomorphismResult res = polar_isomorphism(t);
        CHECK(max_abs_diff(compose(adjoint(res.iso), res.iso).mat(), t.source().projection()) <
              1e-8);
        CHECK(max_abs_diff(compose(res.iso, adjoint(res.iso)).mat(), t.target().projection()) <
              1e-8);
    }
}

TEST_CASE("the construction rejects operators with kernel") {
    const HilbertModule free = HilbertModule::free_module(kShape12, 2);
    CHECK_THROWS_AS(polar_isomorphism(zero_operator(free, free)), PreconditionFailed);
}

TEST_CASE("complement decomposition through the dual of the inclusion") {
    Rng rng(11);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    SUBCASE("full submodule: R is a unitary") {
        const ComplementDecomposition res = complement_decomposition(full_submodule(free));
        CHECK(res.rr_star_identity_residual < 1e-12);
        CHECK(max_abs_diff(mul(res.r_star.mat(), res.r.mat()), free.projection()) < 1e-12);
    }
    SUBCASE("zero submodule: complement is everything") {
        const ComplementDecomposition res = complement_decomposition(zero_submodule(free));
        CHECK(op_norm(res.r.mat()) == 0.0);
        CHECK(max_abs_diff(res.perp.projection(), free.projection()) < 1e-12);
    }
    SUBCASE("random submodule") {
        const Submodule k = random_submodule(free, 2, rng);
        const ComplementDecomposition res = complement_decomposition(k);
        CHECK(res.rr_star_identity_residual < 1e-9);
        CHECK(res.projection_residual < 1e-9);
        CHECK(res.kernel_matches_perp_residual < 1e-8);
        CHECK(max_abs_diff(add(res.biperp.projection(), res.perp.projection()),
                           free.projection()) < 1e-9);
    }
}

TEST_CASE("kernel and image of trivial operators") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const HilbertModule n = HilbertModule::free_module(kShape12, 3);
    const AdjointableOperator z = zero_operator(m, n);
    CHECK(max_abs_diff(kernel(z).projection(), m.projection()) == 0.0);
    CHECK(op_norm(image(z).projection()) == 0.0);
    const AdjointableOperator id = identity_operator(m);
    CHECK(op_norm(kernel(id).projection()) < 1e-12);
    CHECK(max_abs_diff(image(id).projection(), m.projection()) < 1e-12);
}

TEST_CASE("the image-complement is the kernel of the adjoint") {
    Rng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const HilbertModule m = random_projective_module(kShape12, 3, rng);
        const HilbertModule n = random_projective_module(kShape12, 2, rng);
        const AdjointableOperator t = random_operator(m, n, rng);
        CHECK(max_abs_diff(orthogonal_complement(image(t)).projection(),
                           kernel(adjoint(t)).projection()) < 1e-8);
    }
}

TEST_CASE("injective maps are unitarily equivalent to their image closure") {
    Rng rng(13);
    const AdjointableOperator t = dense_injective(kShape12, 3, rng);
    // polar part U = T (T*T)^{-1/2} restricted to the cokernel-free part
    const MatrixOverA gram = mul(adjoint(t.mat()), t.mat());
    const MatrixOverA u = mul(t.mat(), pinv_psd(sqrt_psd(gram)));
    CHECK(max_abs_diff(mul(adjoint(u), u), t.source().projection()) < 1e-8);
    CHECK(max_abs_diff(mul(u, adjoint(u)),
                       orthogonal_complement(orthogonal_complement(image(t))).projection()) <
          1e-8);
}

} // TEST_SUITE
