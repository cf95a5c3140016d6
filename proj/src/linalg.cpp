#include "agpk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agpk/errors.hpp"

namespace agpk::linalg {

bool is_hermitian(const CMatrix& a, double rel_tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).norm() <= rel_tol * (1.0 + a.norm());
}

HermEig hermitian_eig(const CMatrix& a, const Tolerances& tol) {
    if (a.rows() != a.cols()) {
        throw DimensionError("hermitian_eig: matrix is " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + ", expected square");
    }
    if (!is_hermitian(a, tol.hermitian_check)) {
        throw ShapeError("hermitian_eig: matrix is not Hermitian within tolerance");
    }
    if (a.rows() == 0) return {RVector(0), CMatrix(0, 0)};
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix psd_project(const CMatrix& a, const Tolerances& tol) {
    const HermEig eig = hermitian_eig(a, tol);
    const RVector clipped = eig.eigenvalues.cwiseMax(0.0);
    CMatrix out = eig.eigenvectors * clipped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

double op_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    // Gram matrix on the smaller side.
    const CMatrix gram = a.rows() >= a.cols() ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double min_eigenvalue(const CMatrix& a, const Tolerances& tol) {
    if (a.size() == 0) return 0.0;
    if (a.rows() != a.cols()) throw DimensionError("min_eigenvalue: matrix is not square");
    if (!is_hermitian(a, tol.hermitian_check)) {
        throw ShapeError("min_eigenvalue: matrix is not Hermitian within tolerance");
    }
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

RVector herm_to_vec(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    RVector v(n * n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
    const double s = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // average both triangles so slightly non-Hermitian input projects
            const Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
            v(k++) = s * z.real();
            v(k++) = s * z.imag();
        }
    }
    return v;
}

CMatrix vec_to_herm(const Eigen::Ref<const RVector>& v, Eigen::Index n) {
    if (v.size() != n * n) throw DimensionError("vec_to_herm: vector length does not match n*n");
    CMatrix h(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = Complex(v(k++), 0.0);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Complex z(s * v(k), s * v(k + 1));
            k += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

}  // namespace agpk::linalg
