#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "agpk/config.hpp"
#include "agpk/errors.hpp"
#include "agpk/linalg.hpp"
#include "agpk/presentation.hpp"

namespace agpk {

/// A finite interpolation problem: find g in the algebra of the
/// presentation with g(x_i) = W_i and norm at most one.
class InterpolationProblem {
  public:
    /// Validates: points pairwise distinct (DuplicatePointError), interior
    /// (DomainError with the margin), targets of a common shape.
    InterpolationProblem(Presentation presentation, std::vector<Point> points, std::vector<CMatrix> targets,
                         const Tolerances& tol = default_tolerances());

    const Presentation& presentation() const noexcept { return presentation_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    const std::vector<CMatrix>& targets() const noexcept { return targets_; }
    const std::vector<double>& margins() const noexcept { return margins_; }
    std::size_t size() const noexcept { return points_.size(); }
    Eigen::Index target_rows() const { return targets_.front().rows(); }
    Eigen::Index target_cols() const { return targets_.front().cols(); }

    /// Same points, targets divided by level.
    InterpolationProblem scaled(double level) const;

  private:
    InterpolationProblem() = default;
    Presentation presentation_;
    std::vector<Point> points_;
    std::vector<CMatrix> targets_;
    std::vector<double> margins_;
};

/// For each constraint k, the ℓ·m_k square Hermitian matrix whose (i,j)
/// block is I − F_k(x_i)F_k(x_j)*.
struct DeltaBlocks {
    std::vector<CMatrix> blocks;
    std::vector<Eigen::Index> block_sizes;  // m_k
};

DeltaBlocks compute_delta_blocks(const InterpolationProblem& prob, const Tolerances& tol = default_tolerances());

/// PSD Gram data for I − W_iW_j* = R + Γ₀(i,j) + Σ_k Σ_{a,b} Δ_k(i,j)_{ab} Γ_k[(i,a),(j,b)].
struct Certificate {
    CMatrix gamma0;               // ℓm × ℓm
    std::vector<CMatrix> gammas;  // ℓ·m_k·m square, rows ordered (i, a, row)
    std::optional<CMatrix> r;     // m × m, present when solved with strict_eps > 0
    double residual = 0.0;
    double min_eig = 0.0;
    /// Norm level the certificate was produced at (targets divided by it).
    double level = 1.0;
};

/// The linear operator (Γ₀, Γ₁…Γ_K, R) ↦ ℓm × ℓm Hermitian block array, in
/// isometric real coordinates, with its normal-equation factorization.
/// Independent of the targets, so one instance is shared across levels.
struct ConstraintOperator {
    Eigen::Index points = 0;           // ℓ
    Eigen::Index m = 0;                // target rows
    std::vector<Eigen::Index> blocks;  // side length of every unknown block, Γ₀ first, R last if present
    bool has_r = false;
    linalg::RMatrix a;                 // constraints × variables
    Eigen::LLT<linalg::RMatrix> normal; // factorization of A Aᵀ

    Eigen::Index variables() const { return a.cols(); }
    Eigen::Index constraints() const { return a.rows(); }
};

struct LmiDescriptor {
    DeltaBlocks delta;
    CMatrix target_blocks;  // ℓm × ℓm with blocks S(i,j) = I − W_iW_j*
    double strict_eps = 0.0;
    std::shared_ptr<const ConstraintOperator> op;
    linalg::RVector rhs;    // herm_to_vec(target_blocks)

    Eigen::Index points() const { return op->points; }
    Eigen::Index m() const { return op->m; }
    /// Same operator, new targets (used by bisection over levels).
    LmiDescriptor with_targets(const std::vector<CMatrix>& targets) const;
};

/// Linearize the factorization identity over the problem's point set.
/// strict_eps > 0 adds the unknown R with R ⪰ strict_eps·I.
LmiDescriptor build_lmi(const InterpolationProblem& prob, double strict_eps = 0.0,
                        const Tolerances& tol = default_tolerances());

/// Residual block array S − A(Γ₀, Γ_k, R) for a candidate certificate using
/// the descriptor's operator.
CMatrix lmi_residual_blocks(const LmiDescriptor& lmi, const Certificate& cert);

enum class SolverMethod {
    /// L-BFGS on ½·dist²(y, PSD cone) over the affine set. A unit gradient
    /// step of this function is one round of alternating projections.
    accelerated,
    /// Plain Dykstra alternating projections.
    dykstra,
};

struct SolverOptions {
    double tol_feas = 1e-7;
    double tol_stall = 1e-9;
    std::size_t stall_window = 500;
    std::size_t max_iter = 20000;
    SolverMethod method = SolverMethod::accelerated;
    std::size_t memory = 12;  // L-BFGS history length

    static SolverOptions from(const Tolerances& tol) {
        SolverOptions opts;
        opts.tol_feas = tol.feasibility;
        opts.tol_stall = tol.stall;
        opts.stall_window = tol.stall_window;
        opts.max_iter = tol.max_iter;
        return opts;
    }
};

struct Feasible {
    Certificate certificate;
    std::size_t iterations = 0;
};

/// Residual stopped improving. Numerical evidence of infeasibility, not a proof.
struct Stalled {
    double gap = 0.0;
    Certificate best;
    std::size_t iterations = 0;
};

using SolveOutcome = std::variant<Feasible, Stalled>;

/// max_iter reached while the residual was still improving.
class InconclusiveError : public Error {
  public:
    InconclusiveError(const std::string& what, Certificate best, std::size_t iterations)
        : Error(what), best_(std::move(best)), iterations_(iterations) {}
    const Certificate& best() const noexcept { return best_; }
    std::size_t iterations() const noexcept { return iterations_; }

  private:
    Certificate best_;
    std::size_t iterations_;
};

/// Finds a point of (product PSD cone) ∩ (affine constraint set) by
/// projections onto each. Feasible when the PSD iterate's residual drops
/// below tol_feas; Stalled when the best residual improves by less than
/// tol_stall over stall_window iterations (or the accelerated method has
/// converged to a positive distance). Throws InconclusiveError at max_iter.
SolveOutcome solve_feasibility(const LmiDescriptor& lmi, const SolverOptions& opts = {},
                               const Tolerances& tol = default_tolerances());

struct VerificationReport {
    double residual = 0.0;
    std::vector<double> min_eig_per_block;  // Γ₀, Γ₁…Γ_K, then R if present
    bool verdict = false;
};

/// Recomputes the identity and block spectra from the problem data alone,
/// without the solver's operator. Targets are divided by cert.level.
VerificationReport verify_certificate(const InterpolationProblem& prob, const Certificate& cert,
                                      const Tolerances& tol = default_tolerances());

/// [(t² − w_i w̄_j)/(1 − z_i z̄_j)].
CMatrix pick_matrix(const std::vector<Complex>& points, const std::vector<Complex>& targets, double level);

/// Classical disk test: Pick matrix min eigenvalue ≥ −tol.pick_relative·t².
/// Throws DuplicatePointError, DomainError (|z| ≥ 1), DimensionError.
bool classical_pick_test(const std::vector<Complex>& points, const std::vector<Complex>& targets, double level,
                         const Tolerances& tol = default_tolerances());

}  // namespace agpk
