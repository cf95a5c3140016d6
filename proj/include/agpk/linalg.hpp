#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "agpk/config.hpp"

/// Dense complex matrix kernel. Everything above this layer works with
/// CMatrix values and the handful of spectral helpers declared here.
namespace agpk::linalg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct HermEig {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // unitary, columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (A + A*)/2 first. Throws DimensionError for non-square input and
/// ShapeError when ‖A − A*‖_F > tol.hermitian_check·(1 + ‖A‖_F).
HermEig hermitian_eig(const CMatrix& a, const Tolerances& tol = default_tolerances());

/// Nearest positive semidefinite matrix in Frobenius norm: U diag(max(λ,0)) U*.
CMatrix psd_project(const CMatrix& a, const Tolerances& tol = default_tolerances());

/// Largest singular value.
double op_norm(const CMatrix& a);

double min_eigenvalue(const CMatrix& a, const Tolerances& tol = default_tolerances());

CMatrix kron(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& a, double rel_tol);

/// Isometric real coordinates for n×n Hermitian matrices (n² reals): the
/// diagonal, then √2·Re and √2·Im of the strict upper triangle. Frobenius
/// inner products become Euclidean dot products.
RVector herm_to_vec(const CMatrix& h);
CMatrix vec_to_herm(const Eigen::Ref<const RVector>& v, Eigen::Index n);

}  // namespace agpk::linalg
