#include "agpk/pick_sdp.hpp"

#include <algorithm>
#include <deque>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace agpk {

using linalg::RMatrix;
using linalg::RVector;

// -- InterpolationProblem ------------------------------------------------------

InterpolationProblem::InterpolationProblem(Presentation presentation, std::vector<Point> points,
                                           std::vector<CMatrix> targets, const Tolerances& tol)
    : presentation_(std::move(presentation)), points_(std::move(points)), targets_(std::move(targets)) {
    presentation_.validate();
    if (points_.empty()) throw ParameterError("interpolation problem needs at least one point");
    if (targets_.size() != points_.size()) {
        throw DimensionError("got " + std::to_string(targets_.size()) + " targets for " +
                             std::to_string(points_.size()) + " points");
    }
    for (const auto& w : targets_) {
        if (w.rows() != targets_.front().rows() || w.cols() != targets_.front().cols() || w.size() == 0) {
            throw DimensionError("targets must share one non-empty shape");
        }
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != presentation_.dim) {
            throw DimensionError("point " + std::to_string(i) + " has " + std::to_string(points_[i].size()) +
                                 " coordinates, domain dimension is " + std::to_string(presentation_.dim));
        }
        for (std::size_t j = 0; j < i; ++j) {
            double dist = 0.0;
            for (std::size_t c = 0; c < points_[i].size(); ++c) dist += std::norm(points_[i][c] - points_[j][c]);
            if (std::sqrt(dist) <= 1e-12) {
                throw DuplicatePointError("points " + std::to_string(j) + " and " + std::to_string(i) +
                                          " coincide");
            }
        }
        const DomainMembership mem = in_domain(presentation_, points_[i], tol);
        if (!mem.inside) {
            std::ostringstream msg;
            msg << "point " << i << " is outside the domain: margin " << mem.margin;
            throw DomainError(msg.str(), mem.margin);
        }
        margins_.push_back(mem.margin);
    }
}

InterpolationProblem InterpolationProblem::scaled(double level) const {
    if (!(level > 0.0)) throw ParameterError("level must be positive");
    InterpolationProblem out;
    out.presentation_ = presentation_;
    out.points_ = points_;
    out.margins_ = margins_;
    for (const auto& w : targets_) out.targets_.push_back(w / level);
    return out;
}

// -- LMI assembly --------------------------------------------------------------

DeltaBlocks compute_delta_blocks(const InterpolationProblem& prob, const Tolerances& tol) {
    const auto ell = static_cast<Eigen::Index>(prob.size());
    DeltaBlocks out;
    for (const auto& f : prob.presentation().functions) {
        const auto mk = static_cast<Eigen::Index>(f.rows());
        std::vector<CMatrix> values;
        for (const auto& x : prob.points()) values.push_back(eval_fn(f, x, tol));
        CMatrix delta(ell * mk, ell * mk);
        for (Eigen::Index i = 0; i < ell; ++i) {
            for (Eigen::Index j = 0; j < ell; ++j) {
                delta.block(i * mk, j * mk, mk, mk) =
                    CMatrix::Identity(mk, mk) - values[static_cast<std::size_t>(i)] *
                                                    values[static_cast<std::size_t>(j)].adjoint();
            }
        }
        out.blocks.push_back(std::move(delta));
        out.block_sizes.push_back(mk);
    }
    return out;
}

namespace {

CMatrix target_block_matrix(const std::vector<CMatrix>& targets) {
    const auto ell = static_cast<Eigen::Index>(targets.size());
    const Eigen::Index m = targets.front().rows();
    CMatrix s(ell * m, ell * m);
    for (Eigen::Index i = 0; i < ell; ++i) {
        for (Eigen::Index j = 0; j < ell; ++j) {
            s.block(i * m, j * m, m, m) = CMatrix::Identity(m, m) - targets[static_cast<std::size_t>(i)] *
                                                                        targets[static_cast<std::size_t>(j)].adjoint();
        }
    }
    return s;
}

/// A(Γ₀, Γ₁…Γ_K, R) as an ℓm × ℓm matrix. `unknowns` follows the operator's block order.
CMatrix apply_operator(const DeltaBlocks& delta, Eigen::Index ell, Eigen::Index m, bool has_r,
                       const std::vector<CMatrix>& unknowns) {
    CMatrix out = unknowns.front();
    for (std::size_t k = 0; k < delta.blocks.size(); ++k) {
        const Eigen::Index mk = delta.block_sizes[k];
        const CMatrix& d = delta.blocks[k];
        const CMatrix& g = unknowns[k + 1];
        for (Eigen::Index i = 0; i < ell; ++i) {
            for (Eigen::Index j = 0; j < ell; ++j) {
                auto blk = out.block(i * m, j * m, m, m);
                for (Eigen::Index a = 0; a < mk; ++a) {
                    for (Eigen::Index b = 0; b < mk; ++b) {
                        const Complex coeff = d(i * mk + a, j * mk + b);
                        if (coeff == Complex(0.0)) continue;
                        blk += coeff * g.block((i * mk + a) * m, (j * mk + b) * m, m, m);
                    }
                }
            }
        }
    }
    if (has_r) {
        const CMatrix& r = unknowns.back();
        for (Eigen::Index i = 0; i < ell; ++i) {
            for (Eigen::Index j = 0; j < ell; ++j) out.block(i * m, j * m, m, m) += r;
        }
    }
    return out;
}

std::vector<CMatrix> unpack(const ConstraintOperator& op, const RVector& x) {
    std::vector<CMatrix> out;
    Eigen::Index offset = 0;
    for (Eigen::Index n : op.blocks) {
        out.push_back(linalg::vec_to_herm(x.segment(offset, n * n), n));
        offset += n * n;
    }
    return out;
}

std::vector<CMatrix> certificate_blocks(const Certificate& cert) {
    std::vector<CMatrix> blocks{cert.gamma0};
    blocks.insert(blocks.end(), cert.gammas.begin(), cert.gammas.end());
    if (cert.r) blocks.push_back(*cert.r);
    return blocks;
}

double max_block_frobenius(const CMatrix& residual, Eigen::Index ell, Eigen::Index m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < ell; ++i) {
        for (Eigen::Index j = 0; j < ell; ++j) worst = std::max(worst, residual.block(i * m, j * m, m, m).norm());
    }
    return worst;
}

}  // namespace

LmiDescriptor LmiDescriptor::with_targets(const std::vector<CMatrix>& targets) const {
    if (static_cast<Eigen::Index>(targets.size()) != op->points || targets.front().rows() != op->m) {
        throw DimensionError("with_targets: targets do not match the operator");
    }
    LmiDescriptor out = *this;
    out.target_blocks = target_block_matrix(targets);
    out.rhs = linalg::herm_to_vec(out.target_blocks);
    return out;
}

LmiDescriptor build_lmi(const InterpolationProblem& prob, double strict_eps, const Tolerances& tol) {
    if (strict_eps < 0.0) throw ParameterError("strict_eps must be nonnegative");
    LmiDescriptor lmi;
    lmi.delta = compute_delta_blocks(prob, tol);
    lmi.strict_eps = strict_eps;

    auto op = std::make_shared<ConstraintOperator>();
    op->points = static_cast<Eigen::Index>(prob.size());
    op->m = prob.target_rows();
    op->has_r = strict_eps > 0.0;
    op->blocks.push_back(op->points * op->m);
    for (Eigen::Index mk : lmi.delta.block_sizes) op->blocks.push_back(op->points * mk * op->m);
    if (op->has_r) op->blocks.push_back(op->m);

    Eigen::Index nvar = 0;
    for (Eigen::Index n : op->blocks) nvar += n * n;
    const Eigen::Index side = op->points * op->m;
    op->a.resize(side * side, nvar);

    // Column c is the image of the c-th coordinate basis element.
    std::vector<CMatrix> unknowns;
    for (Eigen::Index n : op->blocks) unknowns.push_back(CMatrix::Zero(n, n));
    Eigen::Index col = 0;
    for (std::size_t b = 0; b < op->blocks.size(); ++b) {
        const Eigen::Index n = op->blocks[b];
        for (Eigen::Index c = 0; c < n * n; ++c, ++col) {
            RVector e = RVector::Zero(n * n);
            e(c) = 1.0;
            unknowns[b] = linalg::vec_to_herm(e, n);
            op->a.col(col) = linalg::herm_to_vec(apply_operator(lmi.delta, op->points, op->m, op->has_r, unknowns));
            unknowns[b].setZero();
        }
    }
    op->normal.compute(op->a * op->a.transpose());
    if (op->normal.info() != Eigen::Success) throw Error("build_lmi: normal equations are not positive definite");

    lmi.op = std::move(op);
    lmi.target_blocks = target_block_matrix(prob.targets());
    lmi.rhs = linalg::herm_to_vec(lmi.target_blocks);
    return lmi;
}

CMatrix lmi_residual_blocks(const LmiDescriptor& lmi, const Certificate& cert) {
    const auto blocks = certificate_blocks(cert);
    if (blocks.size() != lmi.op->blocks.size()) throw DimensionError("certificate does not match descriptor");
    return lmi.target_blocks - apply_operator(lmi.delta, lmi.points(), lmi.m(), lmi.op->has_r, blocks);
}

// -- feasibility solver ------------------------------------------------------------

namespace {

Certificate make_certificate(const LmiDescriptor& lmi, const RVector& x, double residual, const Tolerances& tol) {
    const ConstraintOperator& op = *lmi.op;
    auto blocks = unpack(op, x);
    Certificate cert;
    cert.gamma0 = blocks.front();
    for (std::size_t k = 0; k < lmi.delta.blocks.size(); ++k) cert.gammas.push_back(blocks[k + 1]);
    if (op.has_r) cert.r = blocks.back();
    cert.residual = residual;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) worst = std::min(worst, linalg::min_eigenvalue(b, tol));
    cert.min_eig = worst;
    return cert;
}

/// Projections and residuals for one descriptor.
class Projector {
  public:
    Projector(const LmiDescriptor& lmi, const Tolerances& tol) : lmi_(lmi), op_(*lmi.op), tol_(tol) {}

    RVector affine(const RVector& x) const { return x - op_.a.transpose() * op_.normal.solve(op_.a * x - lmi_.rhs); }

    /// Component of v in the null space of A.
    RVector tangent(const RVector& v) const { return v - op_.a.transpose() * op_.normal.solve(op_.a * v); }

    RVector cone(const RVector& x) const {
        RVector out(x.size());
        Eigen::Index offset = 0;
        for (std::size_t b = 0; b < op_.blocks.size(); ++b) {
            const Eigen::Index n = op_.blocks[b];
            CMatrix h = linalg::vec_to_herm(x.segment(offset, n * n), n);
            // R ⪰ strict_eps·I: project the shifted block
            const double shift = op_.has_r && b + 1 == op_.blocks.size() ? lmi_.strict_eps : 0.0;
            if (shift > 0.0) h -= shift * CMatrix::Identity(n, n);
            CMatrix p = linalg::psd_project(h, tol_);
            if (shift > 0.0) p += shift * CMatrix::Identity(n, n);
            out.segment(offset, n * n) = linalg::herm_to_vec(p);
            offset += n * n;
        }
        return out;
    }

    double residual(const RVector& z) const {
        const RVector r = op_.a * z - lmi_.rhs;
        return max_block_frobenius(linalg::vec_to_herm(r, op_.points * op_.m), op_.points, op_.m);
    }

    Eigen::Index size() const { return op_.variables(); }

  private:
    const LmiDescriptor& lmi_;
    const ConstraintOperator& op_;
    const Tolerances& tol_;
};

/// Best-residual bookkeeping and the windowed stall rule shared by both methods.
class Progress {
  public:
    explicit Progress(const SolverOptions& opts) : opts_(opts) {}

    void record(const RVector& z, double residual) {
        if (residual < best_residual_) {
            best_residual_ = residual;
            best_ = z;
        }
    }

    /// Call once per iteration; true when the window closed without enough improvement.
    bool stalled(std::size_t it) {
        if (it % opts_.stall_window != 0) return false;
        const bool stall = window_reference_ - best_residual_ < opts_.tol_stall;
        window_reference_ = best_residual_;
        return stall;
    }

    double best_residual() const { return best_residual_; }
    const RVector& best() const { return best_; }

  private:
    const SolverOptions& opts_;
    double best_residual_ = std::numeric_limits<double>::infinity();
    double window_reference_ = std::numeric_limits<double>::infinity();
    RVector best_;
};

SolveOutcome stalled_outcome(const LmiDescriptor& lmi, const Progress& progress, std::size_t it,
                             const Tolerances& tol) {
    return Stalled{progress.best_residual(), make_certificate(lmi, progress.best(), progress.best_residual(), tol), it};
}

[[noreturn]] void throw_inconclusive(const LmiDescriptor& lmi, const SolverOptions& opts, const Progress& progress,
                                     const Tolerances& tol) {
    std::ostringstream msg;
    msg << "solver reached max_iter=" << opts.max_iter << " while still improving (residual "
        << progress.best_residual() << ")";
    throw InconclusiveError(msg.str(), make_certificate(lmi, progress.best(), progress.best_residual(), tol),
                            opts.max_iter);
}

std::optional<Feasible> accept(const LmiDescriptor& lmi, const SolverOptions& opts, const RVector& z, double residual,
                               std::size_t it, const Tolerances& tol) {
    if (residual >= opts.tol_feas) return std::nullopt;
    Certificate cert = make_certificate(lmi, z, residual, tol);
    if (cert.min_eig < tol.cert_min_eig) return std::nullopt;
    return Feasible{std::move(cert), it};
}

SolveOutcome run_dykstra(const LmiDescriptor& lmi, const SolverOptions& opts, const Tolerances& tol) {
    const Projector proj(lmi, tol);
    Progress progress(opts);
    RVector x = RVector::Zero(proj.size());
    RVector correction = RVector::Zero(proj.size());
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        // the affine set needs no correction term
        const RVector y = proj.affine(x);
        const RVector shifted = y + correction;
        const RVector z = proj.cone(shifted);
        correction = shifted - z;
        x = z;

        const double res = proj.residual(z);
        progress.record(z, res);
        if (auto done = accept(lmi, opts, z, res, it, tol)) return std::move(*done);
        if (progress.stalled(it)) return stalled_outcome(lmi, progress, it, tol);
    }
    throw_inconclusive(lmi, opts, progress, tol);
}

SolveOutcome run_accelerated(const LmiDescriptor& lmi, const SolverOptions& opts, const Tolerances& tol) {
    const Projector proj(lmi, tol);
    Progress progress(opts);

    // f(y) = ½‖y − P_cone(y)‖² on {Ay = b}; ∇f = tangent(y − P_cone(y)).
    struct State {
        RVector y, z, grad;
        double f = 0.0;
    };
    auto evaluate = [&](RVector y) {
        State s;
        s.z = proj.cone(y);
        const RVector diff = y - s.z;
        s.f = 0.5 * diff.squaredNorm();
        s.grad = proj.tangent(diff);
        s.y = std::move(y);
        return s;
    };

    State cur = evaluate(proj.affine(RVector::Zero(proj.size())));
    std::deque<std::pair<RVector, RVector>> history;  // (s, Δgrad)
    bool fresh = true;                                  // cur.y was just projected onto the affine set

    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        const double res = proj.residual(cur.z);
        progress.record(cur.z, res);
        if (auto done = accept(lmi, opts, cur.z, res, it, tol)) return std::move(*done);
        if (progress.stalled(it)) return stalled_outcome(lmi, progress, it, tol);
        // zero gradient off the affine set is drift, not a minimum; re-project once before giving up
        if (cur.grad.norm() <= 1e-15 * (1.0 + cur.y.norm())) {
            if (fresh) return stalled_outcome(lmi, progress, it, tol);
            cur = evaluate(proj.affine(cur.y));
            history.clear();
            fresh = true;
            continue;
        }
        fresh = false;

        // two-loop recursion
        RVector q = cur.grad;
        std::vector<double> alphas(history.size());
        for (std::size_t h = history.size(); h-- > 0;) {
            const auto& [s, yv] = history[h];
            alphas[h] = s.dot(q) / yv.dot(s);
            q -= alphas[h] * yv;
        }
        if (!history.empty()) {
            const auto& [s, yv] = history.back();
            q *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            const auto& [s, yv] = history[h];
            const double beta = yv.dot(q) / yv.dot(s);
            q += (alphas[h] - beta) * s;
        }
        RVector dir = -q;
        double slope = cur.grad.dot(dir);
        if (!(slope < 0.0)) {
            history.clear();
            dir = -cur.grad;
            slope = -cur.grad.squaredNorm();
        }

        // Armijo backtracking; a unit step along −∇f always satisfies it (L = 1)
        double step = 1.0;
        State next;
        bool found = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            next = evaluate(cur.y + step * dir);
            if (next.f <= cur.f + 1e-4 * step * slope) {
                found = true;
                break;
            }
            step *= 0.5;
        }
        if (!found) {
            history.clear();
            next = evaluate(cur.y - cur.grad);
        }
        if (it % 64 == 0) next = evaluate(proj.affine(next.y));  // remove drift off the affine set
        fresh = it % 64 == 0;

        RVector s = next.y - cur.y;
        RVector yv = next.grad - cur.grad;
        if (s.dot(yv) > 1e-14 * s.norm() * yv.norm()) {
            history.emplace_back(std::move(s), std::move(yv));
            if (history.size() > opts.memory) history.pop_front();
        }
        cur = std::move(next);
    }
    throw_inconclusive(lmi, opts, progress, tol);
}

}  // namespace

SolveOutcome solve_feasibility(const LmiDescriptor& lmi, const SolverOptions& opts, const Tolerances& tol) {
    if (!lmi.op) throw ParameterError("solve_feasibility: descriptor has no constraint operator");
    if (opts.stall_window == 0 || opts.max_iter == 0) throw ParameterError("solver iteration limits must be positive");
    return opts.method == SolverMethod::dykstra ? run_dykstra(lmi, opts, tol) : run_accelerated(lmi, opts, tol);
}

// -- verification ----------------------------------------------------------------

VerificationReport verify_certificate(const InterpolationProblem& prob, const Certificate& cert,
                                      const Tolerances& tol) {
    const auto& pres = prob.presentation();
    const std::size_t ell = prob.size();
    const Eigen::Index m = prob.target_rows();
    const auto sl = static_cast<Eigen::Index>(ell);
    if (!(cert.level > 0.0)) throw ParameterError("certificate level must be positive");
    if (cert.gamma0.rows() != sl * m || cert.gamma0.cols() != sl * m) {
        throw DimensionError("gamma0 must be " + std::to_string(sl * m) + " square");
    }
    if (cert.gammas.size() != pres.size()) {
        throw DimensionError("certificate has " + std::to_string(cert.gammas.size()) + " Gram blocks, domain has " +
                             std::to_string(pres.size()) + " constraints");
    }
    for (std::size_t k = 0; k < pres.size(); ++k) {
        const auto n = sl * static_cast<Eigen::Index>(pres.functions[k].rows()) * m;
        if (cert.gammas[k].rows() != n || cert.gammas[k].cols() != n) {
            throw DimensionError("Gram block " + std::to_string(k + 1) + " must be " + std::to_string(n) + " square");
        }
    }
    if (cert.r && (cert.r->rows() != m || cert.r->cols() != m)) throw DimensionError("R must be m x m");

    // values[k][i] = F_k(x_i)
    std::vector<std::vector<CMatrix>> values(pres.size());
    for (std::size_t k = 0; k < pres.size(); ++k) {
        for (const auto& x : prob.points()) values[k].push_back(eval_fn(pres.functions[k], x, tol));
    }
    std::vector<CMatrix> w;
    for (const auto& t : prob.targets()) w.push_back(t / cert.level);

    double residual = 0.0;
    for (std::size_t i = 0; i < ell; ++i) {
        for (std::size_t j = 0; j < ell; ++j) {
            const auto bi = static_cast<Eigen::Index>(i);
            const auto bj = static_cast<Eigen::Index>(j);
            CMatrix rest = CMatrix::Identity(m, m) - w[i] * w[j].adjoint();
            rest -= cert.gamma0.block(bi * m, bj * m, m, m);
            if (cert.r) rest -= *cert.r;
            for (std::size_t k = 0; k < pres.size(); ++k) {
                const auto mk = static_cast<Eigen::Index>(pres.functions[k].rows());
                const CMatrix kernel = CMatrix::Identity(mk, mk) - values[k][i] * values[k][j].adjoint();
                for (Eigen::Index a = 0; a < mk; ++a) {
                    for (Eigen::Index b = 0; b < mk; ++b) {
                        rest -= kernel(a, b) * cert.gammas[k].block((bi * mk + a) * m, (bj * mk + b) * m, m, m);
                    }
                }
            }
            residual = std::max(residual, rest.norm());
        }
    }

    VerificationReport report;
    report.residual = residual;
    bool hermitian = true;
    auto spectrum_floor = [&](const CMatrix& g) {
        if (!linalg::is_hermitian(g, tol.hermitian_check)) hermitian = false;
        const CMatrix sym = 0.5 * (g + g.adjoint());
        return linalg::hermitian_eig(sym, tol).eigenvalues(0);
    };
    report.min_eig_per_block.push_back(spectrum_floor(cert.gamma0));
    for (const auto& g : cert.gammas) report.min_eig_per_block.push_back(spectrum_floor(g));
    if (cert.r) report.min_eig_per_block.push_back(spectrum_floor(*cert.r));
    const double floor = *std::min_element(report.min_eig_per_block.begin(), report.min_eig_per_block.end());
    report.verdict = hermitian && residual < tol.cert_residual && floor >= tol.cert_min_eig;
    return report;
}

// -- classical Pick ----------------------------------------------------------------

CMatrix pick_matrix(const std::vector<Complex>& points, const std::vector<Complex>& targets, double level) {
    const auto n = static_cast<Eigen::Index>(points.size());
    CMatrix p(n, n);
    const double t2 = level * level;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            p(i, j) = (t2 - targets[si] * std::conj(targets[sj])) / (1.0 - points[si] * std::conj(points[sj]));
        }
    }
    return p;
}

bool classical_pick_test(const std::vector<Complex>& points, const std::vector<Complex>& targets, double level,
                         const Tolerances& tol) {
    if (points.size() != targets.size()) throw DimensionError("points and targets differ in length");
    if (points.empty()) throw ParameterError("classical_pick_test needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (std::abs(points[i]) >= 1.0) {
            throw DomainError("point " + std::to_string(i) + " is outside the disk", 1.0 - std::abs(points[i]));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (points[i] == points[j]) {
                throw DuplicatePointError("points " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
            }
        }
    }
    const CMatrix p = pick_matrix(points, targets, level);
    return linalg::min_eigenvalue(p, tol) >= -tol.pick_relative * level * level;
}

}  // namespace agpk
