#include <doctest.h>

#include "hcm/scenarios.hpp"
#include "oracle.hpp"

using namespace hcm;

namespace {

const AlgebraShape kShape12({1, 2});

// unit supported on block b only
AlgebraElement block_unit(const AlgebraShape& shape, int b) {
    AlgebraElement u = AlgebraElement::zero(shape);
    u.block(b) = ComplexMatrix::identity(shape.block_dim(b));
    return u;
}

} // namespace

TEST_SUITE("module") {

TEST_CASE("inner product of the free basis is the unit") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 1);
    const std::vector<ModuleElement> basis = m.spanning_elements();
    CHECK(max_abs_diff(inner(basis[0], basis[0]), AlgebraElement::unit(kShape12)) == 0.0);
}

TEST_CASE("inner product is A-linear in the second slot") {
    Rng rng(1);
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const ModuleElement x = random_module_element(m, rng);
    const ModuleElement y = random_module_element(m, rng);
    const AlgebraElement a = random_element(kShape12, rng);
    CHECK(max_abs_diff(inner(x, module_action(y, a)), mul(inner(x, y), a)) < 1e-10);
}

TEST_CASE("inner product agrees with the flattened representation") {
    Rng rng(2);
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const ModuleElement x = random_module_element(m, rng);
    const ModuleElement y = random_module_element(m, rng);
    const oracle::Mat flat =
        oracle::mul(oracle::adjoint(oracle::flatten_matrix(x.vec())), oracle::flatten_matrix(y.vec()));
    CHECK(oracle::max_abs_diff(flat, oracle::flatten_element(inner(x, y))) < 1e-12);
}

TEST_CASE("module action basics") {
    Rng rng(3);
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const ModuleElement x = random_module_element(m, rng);
    const AlgebraElement a = random_element(kShape12, rng);
    const AlgebraElement b = random_element(kShape12, rng);
    CHECK(max_abs_diff(module_action(x, AlgebraElement::unit(kShape12)).vec(), x.vec()) == 0.0);
    CHECK(max_abs_diff(module_action(module_action(x, a), b).vec(),
                       module_action(x, mul(a, b)).vec()) < 1e-12);
}

TEST_CASE("projective modules absorb the action") {
    Rng rng(4);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const ModuleElement x = random_module_element(m, rng);
    const AlgebraElement a = random_element(kShape12, rng);
    const ModuleElement xa = module_action(x, a);
    CHECK(max_abs_diff(mul(m.projection(), xa.vec()), xa.vec()) < 1e-10);
}

TEST_CASE("submodule of the full standard basis is everything") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 3);
    const Submodule s = submodule_from_generators(m, m.spanning_elements());
    CHECK(max_abs_diff(s.projection(), m.projection()) < 1e-12);
}

TEST_CASE("submodule generated by e1 delta1 over C + C") {
    const AlgebraShape shape({1, 1});
    const HilbertModule m = HilbertModule::free_module(shape, 1);
    MatrixOverA v(shape, 1, 1);
    v.block(0)(0, 0) = 1.0;  // e1 * delta1: block 1 carries it, block 2 is zero
    const Submodule s = submodule_from_generators(m, {m.element(v)});
    CHECK(std::abs(s.projection().block(0)(0, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(s.projection().block(1)(0, 0)) < 1e-12);
}

TEST_CASE("generators of a projection recover it") {
    Rng rng(5);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    std::vector<ModuleElement> gens;
    for (int i = 0; i < 12; ++i) {
        const ModuleElement x = random_module_element(free, rng);
        gens.push_back(free.project(mul(m.projection(), x.vec())));
    }
    const Submodule s = submodule_from_generators(free, gens);
    CHECK(max_abs_diff(s.projection(), m.projection()) < 1e-8);
}

TEST_CASE("orthogonal complement basics") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const Submodule full = full_submodule(m);
    const Submodule zero = zero_submodule(m);
    CHECK(op_norm(orthogonal_complement(full).projection()) < 1e-12);
    CHECK(max_abs_diff(orthogonal_complement(zero).projection(), m.projection()) < 1e-12);
}

TEST_CASE("double complement returns the submodule") {
    Rng rng(6);
    const HilbertModule m = HilbertModule::free_module(kShape12, 3);
    const Submodule k = random_submodule(m, 2, rng);
    const Submodule kpp = orthogonal_complement(orthogonal_complement(k));
    CHECK(max_abs_diff(kpp.projection(), k.projection()) < 1e-9);
}

TEST_CASE("complement projections decompose the ambient module") {
    Rng rng(7);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const Submodule k = random_submodule(m, 2, rng);
    const Submodule kp = orthogonal_complement(k);
    CHECK(max_abs_diff(add(k.projection(), kp.projection()), m.projection()) < 1e-9);
    CHECK(op_norm(mul(k.projection(), kp.projection())) < 1e-9);
}

TEST_CASE("computed projections commute with the right action") {
    Rng rng(8);
    const HilbertModule free = HilbertModule::free_module(kShape12, 3);
    const Submodule k = random_submodule(free, 2, rng);
    for (int b = 0; b < kShape12.num_blocks(); ++b) {
        const AlgebraElement u = block_unit(kShape12, b);
        const ModuleElement x = random_module_element(free, rng);
        const ModuleElement px_u = module_action(free.project(mul(k.projection(), x.vec())), u);
        const ModuleElement p_xu = free.project(mul(k.projection(), module_action(x, u).vec()));
        CHECK(max_abs_diff(px_u.vec(), p_xu.vec()) < 1e-10);
    }
}

TEST_CASE("inner product axioms") {
    Rng rng(12);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    for (int trial = 0; trial < 5; ++trial) {
        const ModuleElement x = random_module_element(m, rng);
        const ModuleElement y = random_module_element(m, rng);
        const ModuleElement z = random_module_element(m, rng);
        CHECK(max_abs_diff(adjoint(inner(x, y)), inner(y, x)) < 1e-12);
        CHECK(max_abs_diff(inner(x, add(y, z)), add(inner(x, y), inner(x, z))) < 1e-12);
        CHECK(is_positive(inner(x, x)));
    }
}

TEST_CASE("Cauchy-Schwarz in module form") {
    Rng rng(9);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const ModuleElement x = random_module_element(m, rng);
    const ModuleElement y = random_module_element(m, rng);
    const double ny = element_norm(y);
    const AlgebraElement lhs = mul(inner(x, y), inner(y, x));
    const AlgebraElement rhs = scale(inner(x, x), ny * ny);
    const AlgebraElement gap = sub(rhs, lhs);
    for (int b = 0; b < gap.num_blocks(); ++b) {
        const HermEig eig = herm_eig(gap.block(b));
        for (double l : eig.eigenvalues) CHECK(l >= -1e-8);
    }
}

TEST_CASE("direct sums") {
    const HilbertModule a1 = HilbertModule::free_module(kShape12, 1);
    const HilbertModule sum = direct_sum(a1, a1);
    CHECK(sum.ambient_rank() == 2);
    CHECK(max_abs_diff(sum.projection(), MatrixOverA::identity(kShape12, 2)) == 0.0);
    // summing with the zero module changes nothing but the ambient bookkeeping
    const HilbertModule with_zero = direct_sum(a1, HilbertModule::free_module(kShape12, 0));
    CHECK(with_zero.ambient_rank() == 1);
    CHECK(max_abs_diff(with_zero.projection(), a1.projection()) == 0.0);
}

TEST_CASE("elements of different modules do not mix") {
    const HilbertModule m = HilbertModule::free_module(kShape12, 2);
    const HilbertModule n = HilbertModule::free_module(kShape12, 3);
    Rng rng(10);
    CHECK_THROWS_AS(inner(random_module_element(m, rng), random_module_element(n, rng)),
                    ParentMismatch);
}

TEST_CASE("ambiguous generator ranks raise") {
    const AlgebraShape shape({1});
    const HilbertModule m = HilbertModule::free_module(shape, 2);
    MatrixOverA g1(shape, 2, 1);
    g1.block(0)(0, 0) = 1.0;
    MatrixOverA g2(shape, 2, 1);
    g2.block(0)(0, 0) = 1.0;
    g2.block(0)(1, 0) = 3e-10;  // second direction sits inside the cutoff band
    CHECK_THROWS_AS(submodule_from_generators(m, {m.element(g1), m.element(g2)}),
                    ToleranceAmbiguity);
}

TEST_CASE("norms along both routes agree") {
    Rng rng(11);
    const HilbertModule m = random_projective_module(kShape12, 3, rng);
    const ModuleElement x = random_module_element(m, rng);
    CHECK(element_norm(x) == doctest::Approx(flat_norm(x)).epsilon(1e-10));
}

} // TEST_SUITE
