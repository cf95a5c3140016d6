#include "agpk/idempotent_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "agpk/errors.hpp"

namespace agpk {

double KIdempotentAlgebra::relation_defect() const {
    const Eigen::Index d = dim();
    double worst = 0.0;
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < k(); ++i) {
        sum += idempotents[i];
        for (std::size_t j = 0; j < k(); ++j) {
            CMatrix prod = idempotents[i] * idempotents[j];
            if (i == j) prod -= idempotents[i];
            worst = std::max(worst, prod.norm());
        }
    }
    return std::max(worst, (sum - CMatrix::Identity(d, d)).norm());
}

void KIdempotentAlgebra::validate(const Tolerances& tol) const {
    if (idempotents.empty()) throw DimensionError("algebra has no idempotents");
    for (const auto& e : idempotents) {
        if (e.rows() != dim() || e.cols() != dim()) throw DimensionError("idempotents must be square of equal size");
    }
    const double defect = relation_defect();
    if (defect >= tol.idempotent_relation) {
        std::ostringstream msg;
        msg << "idempotent relations fail: defect " << defect;
        throw ShapeError(msg.str());
    }
}

double condition_number(const CMatrix& s) {
    Eigen::JacobiSVD<CMatrix> svd(s);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

KIdempotentAlgebra idempotents_from_similarity(const CMatrix& s, const std::vector<std::size_t>& groups,
                                               std::size_t k) {
    const auto d = static_cast<Eigen::Index>(groups.size());
    if (s.rows() != d || s.cols() != d) throw DimensionError("similarity size does not match the partition");
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t g : groups) {
        if (g >= k) throw ParameterError("group index out of range");
        ++counts[g];
    }
    if (std::find(counts.begin(), counts.end(), 0u) != counts.end()) throw ParameterError("empty idempotent group");
    Eigen::PartialPivLU<CMatrix> lu(s);
    const CMatrix s_inv = lu.inverse();
    KIdempotentAlgebra alg;
    for (std::size_t i = 0; i < k; ++i) {
        CMatrix p = CMatrix::Zero(d, d);
        for (Eigen::Index c = 0; c < d; ++c) {
            if (groups[static_cast<std::size_t>(c)] == i) p(c, c) = 1.0;
        }
        alg.idempotents.push_back(s * p * s_inv);
    }
    return alg;
}

namespace {

CMatrix haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex diag = r(j, j);
        if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

}  // namespace

CMatrix random_similarity(std::size_t d, double cond, std::uint64_t seed, bool pin_extremes) {
    if (d == 0) throw ParameterError("similarity dimension must be positive");
    if (!(cond >= 1.0)) throw ParameterError("condition cap must be at least 1");
    std::mt19937_64 rng(seed);
    const auto n = static_cast<Eigen::Index>(d);
    const CMatrix u = haar_unitary(n, rng);
    const CMatrix v = haar_unitary(n, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    linalg::RVector sigma(n);
    for (Eigen::Index i = 0; i < n; ++i) sigma(i) = std::pow(cond, unit(rng));
    if (pin_extremes) {
        sigma(0) = 1.0;
        sigma(n - 1) = cond;
    }
    return u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
}

KIdempotentAlgebra random_idempotents(std::size_t k, std::size_t d, std::uint64_t seed, double cond_cap) {
    if (k == 0) throw ParameterError("k must be at least 1");
    if (k > d) {
        throw ParameterError("random_idempotents: k=" + std::to_string(k) + " exceeds d=" + std::to_string(d));
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> groups(d);
    std::vector<std::size_t> labels(k);
    std::iota(labels.begin(), labels.end(), 0);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t c = 0; c < d; ++c) groups[c] = c < k ? labels[c] : pick(rng);
    std::shuffle(groups.begin(), groups.end(), rng);
    const CMatrix s = random_similarity(d, cond_cap, rng());
    return idempotents_from_similarity(s, groups, k);
}

double algebra_norm(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs) {
    if (coeffs.size() != alg.k()) {
        throw DimensionError("expected " + std::to_string(alg.k()) + " coefficients, got " +
                             std::to_string(coeffs.size()));
    }
    const Eigen::Index p = coeffs.front().rows();
    for (const auto& a : coeffs) {
        if (a.rows() != p || a.cols() != p) throw DimensionError("coefficients must be square of equal size");
    }
    CMatrix b = CMatrix::Zero(p * alg.dim(), p * alg.dim());
    for (std::size_t i = 0; i < alg.k(); ++i) b += linalg::kron(coeffs[i], alg.idempotents[i]);
    return linalg::op_norm(b);
}

namespace {

std::vector<CMatrix> as_matrices(const std::vector<Complex>& coeffs) {
    std::vector<CMatrix> out;
    for (const Complex c : coeffs) out.push_back(CMatrix::Constant(1, 1, c));
    return out;
}

}  // namespace

double algebra_norm(const KIdempotentAlgebra& alg, const std::vector<Complex>& coeffs) {
    return algebra_norm(alg, as_matrices(coeffs));
}

CMatrix multiplier_kernel_matrix(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs, double c) {
    if (coeffs.size() != alg.k()) throw DimensionError("coefficient count does not match k");
    const Eigen::Index p = coeffs.front().rows();
    const Eigen::Index d = alg.dim();
    const Eigen::Index blk = p * d;
    const auto k = static_cast<Eigen::Index>(alg.k());
    CMatrix out(k * blk, k * blk);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            const CMatrix scalar = c * c * CMatrix::Identity(p, p) - coeffs[si] * coeffs[sj].adjoint();
            const CMatrix kernel = alg.idempotents[si] * alg.idempotents[sj].adjoint();
            out.block(i * blk, j * blk, blk, blk) = linalg::kron(scalar, kernel);
        }
    }
    return out;
}

double multiplier_norm_via_kernel(const KIdempotentAlgebra& alg, const std::vector<CMatrix>& coeffs, double tol,
                                  const Tolerances& tolerances) {
    if (!(tol > 0.0)) throw ParameterError("bisection tolerance must be positive");
    alg.validate(tolerances);
    if (coeffs.size() != alg.k()) throw DimensionError("coefficient count does not match k");
    auto contractive_at = [&](double c) {
        const CMatrix kernel = multiplier_kernel_matrix(alg, coeffs, c);
        return linalg::min_eigenvalue(kernel, tolerances) >= -tolerances.kernel_psd_relative * c * c;
    };
    // point evaluations are contractive, so max ‖A_i‖ is a lower bound
    double lo = 0.0;
    for (const auto& a : coeffs) lo = std::max(lo, linalg::op_norm(a));
    if (lo == 0.0) return 0.0;
    if (contractive_at(lo)) return lo;
    double hi = 2.0 * lo;
    while (!contractive_at(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (contractive_at(mid) ? hi : lo) = mid;
    }
    return hi;
}

double multiplier_norm_via_kernel(const KIdempotentAlgebra& alg, const std::vector<Complex>& coeffs, double tol,
                                  const Tolerances& tolerances) {
    return multiplier_norm_via_kernel(alg, as_matrices(coeffs), tol, tolerances);
}

std::vector<CMatrix> quotient_tuple(const std::vector<Point>& points, const KIdempotentAlgebra& alg) {
    if (points.size() != alg.k()) {
        throw ParameterError("quotient representation needs |Y| = k; got " + std::to_string(points.size()) +
                             " points for k=" + std::to_string(alg.k()));
    }
    const std::size_t n = points.front().size();
    const Eigen::Index d = alg.dim();
    std::vector<CMatrix> tuple(n, CMatrix::Zero(d, d));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != n) throw DimensionError("points of mixed dimension");
        for (std::size_t j = 0; j < n; ++j) tuple[j] += points[i][j] * alg.idempotents[i];
    }
    return tuple;
}

std::vector<double> tuple_margins(const Presentation& p, const std::vector<CMatrix>& tuple, const Tolerances& tol) {
    std::vector<double> margins;
    for (const auto& f : p.functions) margins.push_back(1.0 - linalg::op_norm(eval_on_tuple(f, tuple, tol)));
    return margins;
}

QuotientRep quotient_rep(const Presentation& p, const std::vector<Point>& points, const KIdempotentAlgebra& alg,
                         const Tolerances& tol) {
    if (points.size() != alg.k()) {
        throw ParameterError("quotient_rep: |Y|=" + std::to_string(points.size()) + " but k=" +
                             std::to_string(alg.k()));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const DomainMembership mem = in_domain(p, points[i], tol);
        if (!mem.inside) {
            std::ostringstream msg;
            msg << "quotient_rep: point " << i << " is outside the domain (margin " << mem.margin << ")";
            throw DomainError(msg.str(), mem.margin);
        }
    }
    std::vector<CMatrix> tuple = quotient_tuple(points, alg);
    std::vector<double> margins = tuple_margins(p, tuple, tol);
    Rejection rejection{margins, {}};
    for (std::size_t k = 0; k < margins.size(); ++k) {
        if (margins[k] < tol.admissible_margin) rejection.violated.push_back(k);
    }
    if (!rejection.violated.empty()) return rejection;
    AdmissibleTuple out;
    out.matrices = std::move(tuple);
    out.margins = std::move(margins);
    out.provenance.points = points;
    return out;
}

NormAgreementTrial norm_agreement_trial(std::uint64_t seed, std::size_t trial, std::size_t k_max, std::size_t d_max,
                                   double cond_cap, std::size_t p, double tol, const Tolerances& tolerances) {
    if (k_max < 2 || d_max < k_max || p == 0) throw ParameterError("norm_agreement_trial: need 2 <= k_max <= d_max, p >= 1");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    NormAgreementTrial out;
    out.k = std::uniform_int_distribution<std::size_t>(2, k_max)(rng);
    out.d = std::uniform_int_distribution<std::size_t>(out.k, d_max)(rng);
    out.p = p;
    const KIdempotentAlgebra alg = random_idempotents(out.k, out.d, rng(), cond_cap);
    std::normal_distribution<double> normal;
    std::vector<CMatrix> coeffs;
    const auto n = static_cast<Eigen::Index>(p);
    for (std::size_t i = 0; i < out.k; ++i) {
        CMatrix a(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index c = 0; c < n; ++c) a(r, c) = Complex(normal(rng), normal(rng));
        }
        coeffs.push_back(std::move(a));
    }
    out.algebra = algebra_norm(alg, coeffs);
    out.multiplier = multiplier_norm_via_kernel(alg, coeffs, tol, tolerances);
    return out;
}

}  // namespace agpk
