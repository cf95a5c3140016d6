#include <doctest.h>

#include "agpk/errors.hpp"
#include "agpk/linalg.hpp"
#include "support.hpp"

using namespace agpk;
using namespace agpk::linalg;
using agpk::testing::random_hermitian;
using agpk::testing::random_matrix;

namespace {

CMatrix real2(double a, double b, double c, double d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("hermitian_eig on small fixed inputs") {
    const HermEig diag = hermitian_eig(real2(3, 0, 0, 1));
    CHECK(diag.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(diag.eigenvalues(1) == doctest::Approx(3.0));
    // eigenvectors are a permutation of the identity up to phase
    CHECK(std::abs(diag.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(diag.eigenvectors(0, 1)) == doctest::Approx(1.0));

    const HermEig pauli = hermitian_eig(real2(0, 1, 1, 0));
    CHECK(pauli.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(pauli.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig rejects bad input") {
    CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), DimensionError);
    CHECK_THROWS_AS(hermitian_eig(real2(0, 1, 0, 0)), ShapeError);
    // within tolerance: symmetrized, not rejected
    CMatrix near = real2(1, 1, 1, 1);
    near(0, 1) += 1e-12;
    CHECK_NOTHROW(hermitian_eig(near));
}

TEST_CASE("hermitian_eig reconstruction and orthonormality") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 12; ++n) {
        const CMatrix a = random_hermitian(rng, n);
        const HermEig e = hermitian_eig(a);
        const CMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
        CHECK((back - a).norm() < 1e-10 * (1.0 + a.norm()));
        CHECK((e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(n, n)).norm() < 1e-10);
        for (int i = 1; i < n; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
    }
}

TEST_CASE("psd_project examples") {
    const CMatrix psd = real2(2, 1, 1, 2);
    CHECK((psd_project(psd) - psd).norm() < 1e-10);
    CHECK((psd_project(real2(2, 0, 0, -1)) - real2(2, 0, 0, 0)).norm() < 1e-12);
    // λ = ±1 with eigenvectors (1,±1)/√2; keep only the + part
    CHECK((psd_project(real2(0, 1, 1, 0)) - real2(0.5, 0.5, 0.5, 0.5)).norm() < 1e-12);
}

TEST_CASE("psd_project is idempotent and nearest") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix a = random_hermitian(rng, 2 + trial % 5);
        const CMatrix p = psd_project(a);
        CHECK(min_eigenvalue(p) >= -1e-12);
        CHECK((psd_project(p) - p).norm() < 1e-10);
        const double dist = (a - p).norm();
        for (int q = 0; q < 100; ++q) {
            const CMatrix b = random_matrix(rng, a.rows(), a.rows());
            const CMatrix other = b * b.adjoint();
            CHECK(dist <= (a - other).norm() + 1e-9);
        }
    }
}

TEST_CASE("op_norm examples") {
    CHECK(op_norm(CMatrix::Identity(4, 4)) == doctest::Approx(1.0));
    CHECK(op_norm(real2(1, 1, 0, 0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CMatrix row(1, 2);
    row << 0.6, 0.8;
    CHECK(op_norm(row) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm(row.transpose()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm(CMatrix(0, 0)) == 0.0);
}

TEST_CASE("op_norm agrees with SVD and is multiplicative on tensor products") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const CMatrix a = random_matrix(rng, 1 + trial % 3, 1 + trial % 4);
        const CMatrix b = random_matrix(rng, 2, 1 + trial % 2);
        const double svd = Eigen::JacobiSVD<CMatrix>(a).singularValues()(0);
        CHECK(op_norm(a) == doctest::Approx(svd).epsilon(1e-10));
        CHECK(op_norm(kron(a, b)) == doctest::Approx(op_norm(a) * op_norm(b)).epsilon(1e-9));
    }
}

TEST_CASE("herm_to_vec is an isometry and inverts") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 6; ++n) {
        const CMatrix a = random_hermitian(rng, n);
        const RVector v = herm_to_vec(a);
        CHECK(v.size() == n * n);
        CHECK(v.norm() == doctest::Approx(a.norm()).epsilon(1e-12));
        CHECK((vec_to_herm(v, n) - a).norm() < 1e-12);
    }
}

TEST_CASE("adjoint is an involution") {
    std::mt19937_64 rng(23);
    const CMatrix a = random_matrix(rng, 3, 5);
    CHECK(a.adjoint().adjoint() == a);
}
