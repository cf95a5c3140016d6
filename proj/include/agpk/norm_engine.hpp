#pragma once

#include <cstdint>
#include <vector>

#include "agpk/pick_sdp.hpp"
#include "agpk/presentation.hpp"

namespace agpk {

struct BisectionOptions {
    double tol = 1e-4;           // absolute width of the final bracket
    double strict_eps = 0.0;
    SolverOptions solver{};
    std::size_t max_doublings = 60;
};

/// Bracket [lower, upper] for a quotient norm, with the certificate proving
/// feasibility at `upper`.
///
/// `upper` is backed by a verified certificate. `lower` is the largest level
/// at which the solver stalled (or ran out of iterations); that is numerical
/// evidence only, so the true value may sit slightly below it when a
/// near-boundary level was misclassified. The band is at most 2·tol wide for
/// well-separated instances.
struct NormResult {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<Point> witness;
    Certificate certificate;
    std::size_t iterations = 0;    // feasibility solves performed
    std::size_t stalled = 0;       // solves classified infeasible by stall
    std::size_t inconclusive = 0;  // solves that hit max_iter, treated as infeasible
};

class InconclusiveNormError : public Error {
  public:
    using Error::Error;
};

/// ‖π_Y(f)‖ for any f with f(y_i) = W_i: bisection over the level t of the
/// feasibility problem with targets W/t, starting at t = max_i ‖W_i‖ and
/// doubling until feasible. Throws InconclusiveNormError if no feasible level
/// is found within max_doublings.
NormResult quotient_norm(const Presentation& p, const std::vector<Point>& points, const std::vector<CMatrix>& targets,
                         const BisectionOptions& opts = {}, const Tolerances& tol = default_tolerances());

enum class SamplerKind { grid, random, explicit_points };

struct SamplerOptions {
    SamplerKind kind = SamplerKind::random;
    /// random: number of accepted points. grid: points per real axis.
    std::size_t count = 12;
    std::uint64_t seed = 0;
    double margin_floor = 0.02;      // generated points must have margin ≥ this
    std::vector<Point> points;       // explicit_points
    std::size_t max_subset = 5;      // ℓ_max
    std::size_t candidate_cap = 12;  // candidates tried per greedy growth step
};

/// Interior sample points for a presentation, deterministic given the seed.
std::vector<Point> sample_points(const Presentation& p, const SamplerOptions& sampler,
                                 const Tolerances& tol = default_tolerances());

/// Lower estimate of ‖f‖_ℛ: the largest quotient norm over the sampled
/// singletons and over one greedily grown nest of subsets (up to
/// max_subset points). Monotone from below in the sampled subsets; never
/// an upper bound for the supremum itself.
NormResult schur_agler_norm_estimate(const FnMatrix& f, const Presentation& p, const SamplerOptions& sampler,
                                     const BisectionOptions& opts = {}, const Tolerances& tol = default_tolerances());

/// max over samples of ‖f(z)‖.
double sup_norm_lower(const FnMatrix& f, const Presentation& p, const std::vector<Point>& samples,
                      const Tolerances& tol = default_tolerances());

/// f(y_i) for every point.
std::vector<CMatrix> evaluate_targets(const FnMatrix& f, const std::vector<Point>& points,
                                      const Tolerances& tol = default_tolerances());

}  // namespace agpk
