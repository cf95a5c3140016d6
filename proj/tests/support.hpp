#pragma once

#include <complex>
#include <random>
#include <vector>

#include "agpk/linalg.hpp"

namespace agpk::testing {

using linalg::CMatrix;
using linalg::Complex;

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    const CMatrix a = random_matrix(rng, n, n);
    return (a + a.adjoint()) / 2.0;
}

/// Uniform in the disk of the given radius.
inline Complex random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double th = 2.0 * 3.14159265358979323846 * u(rng);
    return std::polar(r, th);
}

inline CMatrix scalar(Complex c) { return CMatrix::Constant(1, 1, c); }

}  // namespace agpk::testing
