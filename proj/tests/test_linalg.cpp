#include <doctest.h>

#include "hcm/algebra.hpp"
#include "hcm/linalg.hpp"

using namespace hcm;

namespace {

ComplexMatrix random_complex(int rows, int cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
    const ComplexMatrix g = random_complex(n, n, rng);
    return scale(add(g, adjoint(g)), 0.5);
}

ComplexMatrix random_unitary_cm(int n, Rng& rng) {
    const Svd dec = svd(random_complex(n, n, rng));
    return mul(dec.u, adjoint(dec.v));
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("herm_eig identity") {
    const HermEig eig = herm_eig(ComplexMatrix::identity(3));
    for (double l : eig.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-14));
    // tie-break keeps the eigenvector matrix at the identity
    CHECK(max_abs_diff(eig.vectors, ComplexMatrix::identity(3)) == 0.0);
}

TEST_CASE("herm_eig diagonal with negative entry") {
    const HermEig eig = herm_eig(diag2(2.0, -1.0));
    CHECK(eig.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(max_abs_diff(eig.vectors, ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("herm_eig reconstructs a random Hermitian matrix") {
    Rng rng(7);
    const ComplexMatrix h = random_hermitian(4, rng);
    const HermEig eig = herm_eig(h);
    ComplexMatrix lam(4, 4);
    for (int i = 0; i < 4; ++i) lam(i, i) = eig.eigenvalues[i];
    const ComplexMatrix rebuilt = mul(mul(eig.vectors, lam), adjoint(eig.vectors));
    CHECK(max_abs_diff(rebuilt, h) < 1e-10);
    CHECK(max_abs_diff(mul(adjoint(eig.vectors), eig.vectors), ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("herm_eig rejects a non-Hermitian matrix") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(herm_eig(m), NotHermitian);
}

TEST_CASE("herm_eig reconstruction property across sizes") {
    Rng rng(11);
    for (int n = 1; n <= 8; ++n) {
        const ComplexMatrix h = random_hermitian(n, rng);
        const HermEig eig = herm_eig(h);
        ComplexMatrix lam(n, n);
        for (int i = 0; i < n; ++i) lam(i, i) = eig.eigenvalues[i];
        const double defect =
            max_abs_diff(mul(mul(eig.vectors, lam), adjoint(eig.vectors)), h);
        CHECK(defect <= 1e-8 * (1.0 + frobenius_norm(h)));
        for (size_t i = 1; i < eig.eigenvalues.size(); ++i)
            CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
    }
}

TEST_CASE("svd of the zero matrix") {
    const Svd dec = svd(ComplexMatrix(3, 2));
    for (double s : dec.sigma) CHECK(s == 0.0);
    CHECK(max_abs_diff(mul(adjoint(dec.u), dec.u), ComplexMatrix::identity(2)) < 1e-14);
}

TEST_CASE("svd sorts a diagonal matrix") {
    const Svd dec = svd(diag2(3.0, 4.0));
    CHECK(dec.sigma[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(dec.sigma[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("svd reconstructs a random wide matrix") {
    Rng rng(3);
    const ComplexMatrix m = random_complex(3, 5, rng);
    const Svd dec = svd(m);
    ComplexMatrix sig(static_cast<int>(dec.sigma.size()), static_cast<int>(dec.sigma.size()));
    for (size_t i = 0; i < dec.sigma.size(); ++i)
        sig(static_cast<int>(i), static_cast<int>(i)) = dec.sigma[i];
    CHECK(max_abs_diff(mul(mul(dec.u, sig), adjoint(dec.v)), m) < 1e-10);
    CHECK(max_abs_diff(mul(adjoint(dec.u), dec.u), ComplexMatrix::identity(3)) < 1e-12);
    CHECK(max_abs_diff(mul(adjoint(dec.v), dec.v), ComplexMatrix::identity(3)) < 1e-12);
}

TEST_CASE("numeric_rank") {
    CHECK(numeric_rank(ComplexMatrix(3, 3)) == 0);
    CHECK(numeric_rank(ComplexMatrix::identity(4)) == 4);
    CHECK(numeric_rank(diag2(1.0, 1e-14)) == 1);
}

TEST_CASE("numeric_rank is invariant under unitaries") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix m = random_complex(4, 4, rng);
        // kill one direction
        for (int j = 0; j < 4; ++j) m(2, j) = 0.0;
        const ComplexMatrix u = random_unitary_cm(4, rng);
        const ComplexMatrix v = random_unitary_cm(4, rng);
        CHECK(numeric_rank(mul(mul(u, m), v)) == numeric_rank(m));
    }
}

TEST_CASE("psd_sqrt and psd_pinv on diagonals") {
    CHECK(max_abs_diff(psd_sqrt(diag2(4.0, 9.0)), diag2(2.0, 3.0)) < 1e-12);
    CHECK(max_abs_diff(psd_pinv(diag2(2.0, 0.0)), diag2(0.5, 0.0)) < 1e-12);
}

TEST_CASE("psd_sqrt squares back to a random Gram matrix") {
    Rng rng(5);
    const ComplexMatrix x = random_complex(6, 4, rng);
    const ComplexMatrix g = mul(adjoint(x), x);
    const ComplexMatrix r = psd_sqrt(g);
    CHECK(max_abs_diff(mul(r, r), g) < 1e-9);
}

TEST_CASE("psd_sqrt rejects an indefinite matrix") {
    CHECK_THROWS_AS(psd_sqrt(diag2(1.0, -1.0)), NotPositive);
}

TEST_CASE("Moore-Penrose identities") {
    Rng rng(9);
    for (auto [r, c] : {std::pair{4, 4}, std::pair{5, 3}, std::pair{3, 5}}) {
        const ComplexMatrix m = random_complex(r, c, rng);
        const ComplexMatrix p = pinv(m);
        CHECK(max_abs_diff(mul(mul(m, p), m), m) < 1e-10);
        CHECK(max_abs_diff(mul(mul(p, m), p), p) < 1e-10);
        CHECK(max_abs_diff(adjoint(mul(m, p)), mul(m, p)) < 1e-10);
        CHECK(max_abs_diff(adjoint(mul(p, m)), mul(p, m)) < 1e-10);
    }
}

TEST_CASE("pinv only inverts singular values above the cutoff") {
    const ComplexMatrix p = pinv(diag2(1.0, 1e-14));
    CHECK(std::abs(p(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(p(1, 1)) == doctest::Approx(0.0));
}

} // TEST_SUITE
