#include "agpk/norm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "agpk/parallel.hpp"

namespace agpk {

namespace {

struct LevelOutcome {
    enum class Kind { feasible, stalled, inconclusive } kind;
    std::optional<Certificate> certificate;
};

LevelOutcome solve_at(const LmiDescriptor& base, const std::vector<CMatrix>& targets, double level,
                      const BisectionOptions& opts, const Tolerances& tol) {
    std::vector<CMatrix> scaled;
    for (const auto& w : targets) scaled.push_back(w / level);
    const LmiDescriptor lmi = base.with_targets(scaled);
    try {
        SolveOutcome out = solve_feasibility(lmi, opts.solver, tol);
        if (auto* f = std::get_if<Feasible>(&out)) {
            f->certificate.level = level;
            return {LevelOutcome::Kind::feasible, std::move(f->certificate)};
        }
        return {LevelOutcome::Kind::stalled, std::nullopt};
    } catch (const InconclusiveError&) {
        return {LevelOutcome::Kind::inconclusive, std::nullopt};
    }
}

}  // namespace

std::vector<CMatrix> evaluate_targets(const FnMatrix& f, const std::vector<Point>& points, const Tolerances& tol) {
    std::vector<CMatrix> out;
    out.reserve(points.size());
    for (const auto& x : points) out.push_back(eval_fn(f, x, tol));
    return out;
}

NormResult quotient_norm(const Presentation& p, const std::vector<Point>& points, const std::vector<CMatrix>& targets,
                         const BisectionOptions& opts, const Tolerances& tol) {
    if (!(opts.tol > 0.0)) throw ParameterError("bisection tolerance must be positive");
    const InterpolationProblem prob(p, points, targets, tol);
    const LmiDescriptor base = build_lmi(prob, opts.strict_eps, tol);

    NormResult result;
    result.witness = points;
    auto attempt = [&](double level) {
        LevelOutcome out = solve_at(base, targets, level, opts, tol);
        ++result.iterations;
        if (out.kind == LevelOutcome::Kind::stalled) ++result.stalled;
        if (out.kind == LevelOutcome::Kind::inconclusive) ++result.inconclusive;
        return out;
    };

    double lo = 0.0;
    for (const auto& w : targets) lo = std::max(lo, linalg::op_norm(w));

    if (lo == 0.0) {
        // f vanishes on Y: the zero function interpolates; certificate at level 1
        LevelOutcome out = attempt(1.0);
        if (!out.certificate) throw InconclusiveNormError("quotient_norm: zero targets not certified at level 1");
        result.certificate = std::move(*out.certificate);
        return result;
    }

    // single-point sets and constant data are feasible at the trivial lower bound
    if (LevelOutcome out = attempt(lo); out.certificate) {
        result.lower = result.upper = lo;
        result.certificate = std::move(*out.certificate);
        return result;
    }

    double hi = 2.0 * lo;
    std::optional<Certificate> best;
    for (std::size_t d = 0; d < opts.max_doublings; ++d, hi *= 2.0) {
        LevelOutcome out = attempt(hi);
        if (out.certificate) {
            best = std::move(out.certificate);
            break;
        }
        lo = hi;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "quotient_norm: no feasible level found up to " << hi << " after " << result.iterations
            << " solves (" << result.stalled << " stalled, " << result.inconclusive << " inconclusive)";
        throw InconclusiveNormError(msg.str());
    }

    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        LevelOutcome out = attempt(mid);
        if (out.certificate) {
            hi = mid;
            best = std::move(out.certificate);
        } else {
            lo = mid;
        }
    }
    result.lower = lo;
    result.upper = hi;
    result.certificate = std::move(*best);
    return result;
}

std::vector<Point> sample_points(const Presentation& p, const SamplerOptions& sampler, const Tolerances& tol) {
    p.validate();
    if (sampler.kind == SamplerKind::explicit_points) {
        // explicit points are trusted to the caller, but must be interior
        for (const auto& z : sampler.points) {
            const DomainMembership dm = in_domain(p, z, tol);
            if (!dm.inside) throw DomainError("explicit sample point outside the domain", dm.margin);
        }
        return sampler.points;
    }

    const Point center = p.center();
    const double radius = p.sample_radius;
    auto admit = [&](const Point& z) {
        try {
            return in_domain(p, z, tol).margin >= sampler.margin_floor;
        } catch (const EvaluationError&) {
            return false;
        }
    };

    std::vector<Point> out;
    if (sampler.kind == SamplerKind::grid) {
        const std::size_t g = std::max<std::size_t>(sampler.count, 1);
        const std::size_t axes = 2 * p.dim;
        std::vector<std::size_t> idx(axes, 0);
        auto coord = [&](std::size_t i) { return radius * (-1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(g)); };
        while (true) {
            Point z(p.dim);
            for (std::size_t j = 0; j < p.dim; ++j) z[j] = center[j] + Complex(coord(idx[2 * j]), coord(idx[2 * j + 1]));
            if (admit(z)) out.push_back(std::move(z));
            std::size_t a = 0;
            while (a < axes && ++idx[a] == g) idx[a++] = 0;
            if (a == axes) break;
        }
        return out;
    }

    std::mt19937_64 rng(sampler.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t max_attempts = 1000 * std::max<std::size_t>(sampler.count, 1);
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < sampler.count; ++attempt) {
        Point z(p.dim);
        for (std::size_t j = 0; j < p.dim; ++j) {
            const double re = unit(rng);
            const double im = unit(rng);
            z[j] = center[j] + radius * Complex(re, im);
        }
        if (admit(z)) out.push_back(std::move(z));
    }
    return out;
}

NormResult schur_agler_norm_estimate(const FnMatrix& f, const Presentation& p, const SamplerOptions& sampler,
                                     const BisectionOptions& opts, const Tolerances& tol) {
    if (!f.is_polynomial()) throw ParameterError("schur_agler_norm_estimate: f must have polynomial entries");
    if (f.dim() != p.dim) throw DimensionError("function and domain dimensions differ");
    const std::vector<Point> samples = sample_points(p, sampler, tol);
    if (samples.empty()) throw ParameterError("sampler produced no interior points");
    const std::vector<CMatrix> values = evaluate_targets(f, samples, tol);

    auto norm_of = [&](const std::vector<std::size_t>& subset) {
        std::vector<Point> pts;
        std::vector<CMatrix> tg;
        for (std::size_t i : subset) {
            pts.push_back(samples[i]);
            tg.push_back(values[i]);
        }
        return quotient_norm(p, pts, tg, opts, tol);
    };
    // strictly larger upper wins; ties keep the earlier candidate
    auto better = [](const NormResult& a, const NormResult& b) { return a.upper > b.upper; };

    std::vector<std::optional<NormResult>> singles(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { singles[i] = norm_of({i}); });

    std::size_t start = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (better(*singles[i], *singles[start])) start = i;
    }
    NormResult best = *singles[start];
    std::size_t total_solves = 0;
    for (const auto& s : singles) total_solves += s->iterations;

    std::vector<std::size_t> chain{start};
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(sampler.seed ^ 0x9e3779b97f4a7c15ULL);

    while (chain.size() < std::min(sampler.max_subset, samples.size())) {
        std::vector<std::size_t> candidates;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            if (std::find(chain.begin(), chain.end(), i) == chain.end()) candidates.push_back(i);
            if (candidates.size() == sampler.candidate_cap) break;
        }
        std::sort(candidates.begin(), candidates.end());
        std::vector<std::optional<NormResult>> grown(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t c) {
            auto subset = chain;
            subset.push_back(candidates[c]);
            grown[c] = norm_of(subset);
        });
        std::size_t pick = 0;
        for (std::size_t c = 0; c < grown.size(); ++c) {
            total_solves += grown[c]->iterations;
            if (better(*grown[c], *grown[pick])) pick = c;
        }
        chain.push_back(candidates[pick]);
        if (better(*grown[pick], best)) best = *grown[pick];
    }
    best.iterations = total_solves;
    return best;
}

double sup_norm_lower(const FnMatrix& f, const Presentation& p, const std::vector<Point>& samples,
                      const Tolerances& tol) {
    if (f.dim() != p.dim) throw DimensionError("function and domain dimensions differ");
    double best = 0.0;
    for (const auto& z : samples) best = std::max(best, linalg::op_norm(eval_fn(f, z, tol)));
    return best;
}

}  // namespace agpk
