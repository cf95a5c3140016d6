#pragma once

#include <cstdint>
#include <vector>

#include "agpk/idempotent_lab.hpp"
#include "agpk/presentation.hpp"

namespace agpk {

struct SearchOptions {
    std::size_t restarts = 32;
    std::size_t steps = 200;
    std::uint64_t seed = 0;
    double initial_step = 0.5;
    double step_decay = 0.98;
    std::size_t dim = 0;         // size of the representing matrices; 0 means |Y|
    std::size_t dim_cap = 6;     // |Y| and dim may not exceed this
    double cond_limit = 1e4;     // similarities beyond this are rejected
};

struct LowerBound {
    double value = 0.0;
    AdmissibleTuple best;
};

/// Randomized local search over similarities S with E_i = S·P_i·S⁻¹ and
/// T = Σ y_i E_i. Only tuples whose margins are all ≥ 0 are kept, so the
/// returned value is ‖f(T)‖ for a verifiably admissible T with spectrum Y.
/// Restart 0 starts from orthogonal idempotents (value max_i ‖f(y_i)‖);
/// restart r draws from its own stream seeded by (seed, r), so adding
/// restarts never lowers the value. Ties go to the lowest restart index.
LowerBound lower_bound(const FnMatrix& f, const Presentation& p, const std::vector<Point>& points,
                       const SearchOptions& opts = {}, const Tolerances& tol = default_tolerances());

struct Evaluation {
    double value = 0.0;
    std::vector<double> margins;
};

/// ‖f(T)‖ with margins recomputed from scratch. Throws CommutativityError,
/// AdmissibilityError (naming the first violated constraint) or DomainError
/// when a joint eigenvalue of T lies outside G.
Evaluation evaluate_admissible(const FnMatrix& f, const Presentation& p, const AdmissibleTuple& tuple,
                               const Tolerances& tol = default_tolerances());

}  // namespace agpk
