#include "agpk/repsearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "agpk/errors.hpp"
#include "agpk/parallel.hpp"

namespace agpk {

namespace {

struct Candidate {
    double value = -1.0;
    CMatrix similarity;
    std::vector<CMatrix> tuple;
    std::vector<double> margins;
};

/// Candidate for similarity s, or nullopt when inadmissible or ill-conditioned.
std::optional<Candidate> try_similarity(const FnMatrix& f, const Presentation& p, const std::vector<Point>& points,
                                        const std::vector<std::size_t>& groups, const CMatrix& s, double cond_limit,
                                        const Tolerances& tol) {
    if (condition_number(s) > cond_limit) return std::nullopt;
    const KIdempotentAlgebra alg = idempotents_from_similarity(s, groups, points.size());
    Candidate c;
    try {
        c.tuple = quotient_tuple(points, alg);
        c.margins = tuple_margins(p, c.tuple, tol);
        if (std::any_of(c.margins.begin(), c.margins.end(), [](double m) { return m < 0.0; })) return std::nullopt;
        c.value = linalg::op_norm(eval_on_tuple(f, c.tuple, tol));
    } catch (const Error&) {
        return std::nullopt;
    }
    c.similarity = s;
    return c;
}

CMatrix gaussian(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    return g / g.norm();
}

}  // namespace

LowerBound lower_bound(const FnMatrix& f, const Presentation& p, const std::vector<Point>& points,
                       const SearchOptions& opts, const Tolerances& tol) {
    if (points.empty()) throw ParameterError("lower_bound needs at least one point");
    if (f.dim() != p.dim) throw DimensionError("function and domain dimensions differ");
    const std::size_t k = points.size();
    const std::size_t d = opts.dim == 0 ? k : opts.dim;
    if (k > opts.dim_cap || d > opts.dim_cap) {
        throw ParameterError("lower_bound: |Y|=" + std::to_string(k) + " or dim=" + std::to_string(d) +
                             " exceeds the cap " + std::to_string(opts.dim_cap));
    }
    if (d < k) throw ParameterError("lower_bound: dim must be at least |Y|");
    for (std::size_t i = 0; i < k; ++i) {
        const DomainMembership mem = in_domain(p, points[i], tol);
        if (!mem.inside) {
            std::ostringstream msg;
            msg << "lower_bound: point " << i << " is outside the domain (margin " << mem.margin << ")";
            throw DomainError(msg.str(), mem.margin);
        }
    }
    std::vector<std::size_t> groups(d);
    for (std::size_t c = 0; c < d; ++c) groups[c] = c % k;
    const auto n = static_cast<Eigen::Index>(d);
    const CMatrix identity = CMatrix::Identity(n, n);

    // orthogonal idempotents: block-diagonal calculus, always admissible
    auto orthogonal = try_similarity(f, p, points, groups, identity, opts.cond_limit, tol);
    if (!orthogonal) throw AdmissibilityError("orthogonal idempotents are not admissible", 0, 0.0);

    const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
    std::vector<Candidate> results(restarts);
    parallel_for(restarts, [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        Candidate current = *orthogonal;
        if (r > 0) {
            // random admissible starting similarity near the identity
            for (int attempt = 0; attempt < 20; ++attempt) {
                const CMatrix s = identity + opts.initial_step * std::sqrt(static_cast<double>(d)) * gaussian(n, rng);
                if (auto c = try_similarity(f, p, points, groups, s, opts.cond_limit, tol)) {
                    current = std::move(*c);
                    break;
                }
            }
        }
        double step = opts.initial_step;
        for (std::size_t it = 0; it < opts.steps; ++it, step *= opts.step_decay) {
            const CMatrix proposal = current.similarity + step * current.similarity.norm() * gaussian(n, rng);
            auto c = try_similarity(f, p, points, groups, proposal, opts.cond_limit, tol);
            if (c && c->value > current.value) current = std::move(*c);
        }
        results[r] = std::move(current);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (results[r].value > results[best].value) best = r;
    }
    LowerBound out;
    out.value = results[best].value;
    out.best.matrices = results[best].tuple;
    out.best.margins = results[best].margins;
    out.best.provenance.points = points;
    out.best.provenance.seed = opts.seed;
    out.best.provenance.restart = best;
    return out;
}

Evaluation evaluate_admissible(const FnMatrix& f, const Presentation& p, const AdmissibleTuple& tuple,
                               const Tolerances& tol) {
    if (tuple.matrices.size() != p.dim) throw DimensionError("tuple length does not match the domain dimension");
    const double comm = max_commutator(tuple.matrices);
    if (comm >= tol.commutator) {
        std::ostringstream msg;
        msg << "tuple does not commute: max commutator norm " << comm;
        throw CommutativityError(msg.str());
    }
    Evaluation out;
    out.margins = tuple_margins(p, tuple.matrices, tol);
    for (std::size_t k = 0; k < out.margins.size(); ++k) {
        if (out.margins[k] < tol.admissible_margin) {
            std::ostringstream msg;
            msg << "tuple is not admissible: constraint " << k << " has margin " << out.margins[k];
            throw AdmissibilityError(msg.str(), k, out.margins[k]);
        }
    }
    const auto spectrum = joint_eigenvalues(tuple.matrices);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        DomainMembership mem{false, 0.0};
        try {
            mem = in_domain(p, spectrum[i], tol);
        } catch (const EvaluationError&) {
            mem.margin = -std::numeric_limits<double>::infinity();
        }
        if (!mem.inside) {
            std::ostringstream msg;
            msg << "joint eigenvalue " << i << " lies outside the domain (margin " << mem.margin << ")";
            throw DomainError(msg.str(), mem.margin);
        }
    }
    out.value = linalg::op_norm(eval_on_tuple(f, tuple.matrices, tol));
    return out;
}

}  // namespace agpk
