#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "agpk/config.hpp"
#include "agpk/linalg.hpp"
#include "agpk/presentation.hpp"

namespace agpk {

/// span{E_1,…,E_k} with E_iE_j = δ_ij E_i and ΣE_i = I.
struct KIdempotentAlgebra {
    std::vector<CMatrix> idempotents;

    std::size_t k() const noexcept { return idempotents.size(); }
    Eigen::Index dim() const { return idempotents.empty() ? 0 : idempotents.front().rows(); }

    /// max of ‖E_iE_j − δ_ij E_i‖_F and ‖ΣE_i − I‖_F.
    double relation_defect() const;
    /// Throws DimensionError / ShapeError when the relations fail.
    void validate(const Tolerances& tol = default_tolerances()) const;
};

/// Largest over smallest singular value.
double condition_number(const CMatrix& s);

/// E_i = S·P_i·S⁻¹ where P_i is the coordinate projection onto
/// {c : groups[c] == i}. Every group in 0..k-1 must be nonempty.
KIdempotentAlgebra idempotents_from_similarity(const CMatrix& s, const std::vector<std::size_t>& groups,
                                               std::size_t k);

/// Random d×d similarity U·diag(σ)·V* with Haar-random unitaries and σ
/// log-uniform in [1, cond]. With pin_extremes the spectrum spans exactly
/// [1, cond], so condition_number ≈ cond.
CMatrix random_similarity(std::size_t d, double cond, std::uint64_t seed, bool pin_extremes = false);

/// Random partition of d coordinates into k nonempty groups, then a random
/// similarity with condition number ≤ cond_cap. Throws ParameterError if k > d.
KIdempotentAlgebra random_idempotents(std::size_t k, std::size_t d, std::uint64_t seed, double cond_cap = 20.0);

/// ‖Σ A_i ⊗ E_i‖ on ℂᵖ ⊗ ℂᵈ.
double algebra_norm(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs);
double algebra_norm(const KIdempotentAlgebra& alg, const std::vector<Complex>& coeffs);

/// [(C²I_p − A_iA_j*) ⊗ E_iE_j*]_{i,j}.
CMatrix multiplier_kernel_matrix(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs, double c);

/// Least C (bisection to `tol`) for which the kernel matrix is PSD, i.e. the
/// multiplier norm of x_i ↦ A_i for the kernel K(x_i,x_j) = E_iE_j*.
double multiplier_norm_via_kernel(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs, double tol = 1e-6,
                                  const Tolerances& tolerances = default_tolerances());
double multiplier_norm_via_kernel(const KIdempotentAlgebra& alg, const std::vector<Complex>& coeffs, double tol = 1e-6,
                                  const Tolerances& tolerances = default_tolerances());

/// Commuting matrix tuple with ‖F_k(T)‖ ≤ 1 for every constraint.
struct AdmissibleTuple {
    struct Provenance {
        std::vector<Point> points;          // spectrum Y when built by quotient_rep
        std::optional<std::uint64_t> seed;  // search seed, when produced by repsearch
        std::optional<std::size_t> restart;
    };

    std::vector<CMatrix> matrices;
    std::vector<double> margins;  // 1 − ‖F_k(T)‖
    Provenance provenance;

    Eigen::Index dim() const { return matrices.empty() ? 0 : matrices.front().rows(); }
};

/// quotient_rep result when some margin is below the admissibility floor.
struct Rejection {
    std::vector<double> margins;
    std::vector<std::size_t> violated;
};

using QuotientRep = std::variant<AdmissibleTuple, Rejection>;

/// T_j = Σ_i y_{i,j} E_i.
std::vector<CMatrix> quotient_tuple(const std::vector<Point>& points, const KIdempotentAlgebra& alg);

/// 1 − ‖F_k(T)‖ for every k.
std::vector<double> tuple_margins(const Presentation& p, const std::vector<CMatrix>& tuple,
                                  const Tolerances& tol = default_tolerances());

/// Builds T from Y and the algebra and tags it admissible iff every margin
/// is ≥ tol.admissible_margin. Throws ParameterError when |Y| ≠ k and
/// DomainError for a point outside G.
QuotientRep quotient_rep(const Presentation& p, const std::vector<Point>& points, const KIdempotentAlgebra& alg,
                         const Tolerances& tol = default_tolerances());

/// One randomized comparison of algebra_norm against
/// multiplier_norm_via_kernel: k ∈ [2, k_max], d ∈ [k, d_max], similarity
/// with condition number ≤ cond_cap, coefficients p×p complex Gaussian
/// (scalars when p = 1). Deterministic in (seed, trial).
struct NormAgreementTrial {
    std::size_t k = 0;
    std::size_t d = 0;
    std::size_t p = 1;
    double algebra = 0.0;
    double multiplier = 0.0;
    double deviation() const { return std::abs(algebra - multiplier); }
    double relative_deviation() const { return deviation() / (1.0 + algebra); }
};

NormAgreementTrial norm_agreement_trial(std::uint64_t seed, std::size_t trial, std::size_t k_max = 4,
                                   std::size_t d_max = 6, double cond_cap = 20.0, std::size_t p = 1,
                                   double tol = 1e-7, const Tolerances& tolerances = default_tolerances());

}  // namespace agpk
