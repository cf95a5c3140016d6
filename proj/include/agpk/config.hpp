#pragma once

#include <cstddef>

namespace agpk {

/// Numerical thresholds shared by every module. Each entry point receives
/// one of these explicitly; there are no hidden globals.
struct Tolerances {
    // linalg_core
    double hermitian_check = 1e-9;  // relative ‖A − A*‖_F allowed before symmetrizing
    double psd_floor = 1e-12;       // eigenvalues clipped by psd_project stay above −psd_floor

    // presentation
    double pole = 1e-14;            // |den(z)| at or below this is a pole
    double commutator = 1e-10;      // Frobenius bound on [T_i, T_j]
    double singular_den = 1e-10;    // min singular value of den(T)

    // pick_sdp
    double feasibility = 1e-7;      // solver residual needed to report Feasible
    double stall = 1e-9;            // residual improvement per stall window
    std::size_t stall_window = 500;
    std::size_t max_iter = 20000;
    double cert_residual = 1e-6;    // verify_certificate residual bound
    double cert_min_eig = -1e-8;    // verify_certificate eigenvalue floor
    double pick_relative = 1e-10;   // classical Pick test floor, scaled by t²

    // idempotent_lab / repsearch
    double idempotent_relation = 1e-9;
    double kernel_psd_relative = 1e-10;
    double admissible_margin = -1e-9;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace agpk
