#include "agpk/presentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "agpk/errors.hpp"

namespace agpk {

namespace {

Complex ipow(Complex z, int e) {
    Complex out = 1.0;
    for (int i = 0; i < e; ++i) out *= z;
    return out;
}

void check_tuple_shape(const std::vector<CMatrix>& tuple, std::size_t dim) {
    if (tuple.size() != dim) {
        throw DimensionError("tuple has " + std::to_string(tuple.size()) + " matrices, expected " +
                             std::to_string(dim));
    }
    if (tuple.empty()) throw DimensionError("empty tuple");
    const auto d = tuple.front().rows();
    for (const auto& t : tuple) {
        if (t.rows() != d || t.cols() != d) {
            throw DimensionError("tuple matrices must be square and of equal size");
        }
    }
}

}  // namespace

// -- MultiPoly ---------------------------------------------------------------

MultiPoly MultiPoly::constant(std::size_t dim, Complex c) {
    MultiPoly p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(std::size_t dim, std::size_t j) {
    if (j >= dim) throw ParameterError("variable index out of range");
    Exponent e(dim, 0);
    e[j] = 1;
    return monomial(dim, e);
}

MultiPoly MultiPoly::monomial(std::size_t dim, const Exponent& exp, Complex c) {
    MultiPoly p(dim);
    p.add_term(exp, c);
    return p;
}

void MultiPoly::add_term(const Exponent& exp, Complex c) {
    if (exp.size() != dim_) {
        throw DimensionError("exponent has length " + std::to_string(exp.size()) + ", expected " +
                             std::to_string(dim_));
    }
    if (std::any_of(exp.begin(), exp.end(), [](int e) { return e < 0; })) {
        throw ParameterError("negative exponent in polynomial term");
    }
    if (c == Complex(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(exp, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    }
}

bool MultiPoly::is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) {
        return std::all_of(kv.first.begin(), kv.first.end(), [](int e) { return e == 0; });
    });
}

Complex MultiPoly::constant_term() const {
    auto it = terms_.find(Exponent(dim_, 0));
    return it == terms_.end() ? Complex(0.0) : it->second;
}

int MultiPoly::total_degree() const {
    int deg = 0;
    for (const auto& [exp, c] : terms_) {
        int d = 0;
        for (int e : exp) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

Complex MultiPoly::eval(const Point& z) const {
    if (z.size() != dim_) {
        throw DimensionError("point has " + std::to_string(z.size()) + " coordinates, expected " +
                             std::to_string(dim_));
    }
    Complex sum = 0.0;
    for (const auto& [exp, c] : terms_) {
        Complex term = c;
        for (std::size_t j = 0; j < dim_; ++j) term *= ipow(z[j], exp[j]);
        sum += term;
    }
    return sum;
}

CMatrix MultiPoly::eval(const std::vector<CMatrix>& tuple) const {
    check_tuple_shape(tuple, dim_);
    const auto d = tuple.front().rows();
    // powers[j][e] = T_j^e, grown on demand
    std::vector<std::vector<CMatrix>> powers(dim_);
    for (std::size_t j = 0; j < dim_; ++j) powers[j].push_back(CMatrix::Identity(d, d));
    auto power = [&](std::size_t j, int e) -> const CMatrix& {
        auto& pj = powers[j];
        while (static_cast<int>(pj.size()) <= e) pj.push_back(pj.back() * tuple[j]);
        return pj[static_cast<std::size_t>(e)];
    };
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& [exp, c] : terms_) {
        CMatrix term = CMatrix::Identity(d, d) * c;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (exp[j] > 0) term = term * power(j, exp[j]);
        }
        sum += term;
    }
    return sum;
}

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
    if (other.dim_ != dim_) throw DimensionError("polynomial dimension mismatch");
    MultiPoly out = *this;
    for (const auto& [exp, c] : other.terms_) out.add_term(exp, c);
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const { return *this + other * Complex(-1.0); }

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
    if (other.dim_ != dim_) throw DimensionError("polynomial dimension mismatch");
    MultiPoly out(dim_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            Exponent e(dim_);
            for (std::size_t j = 0; j < dim_; ++j) e[j] = ea[j] + eb[j];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

MultiPoly MultiPoly::operator*(Complex c) const {
    MultiPoly out(dim_);
    for (const auto& [exp, v] : terms_) out.add_term(exp, v * c);
    return out;
}

// -- RationalFn / FnMatrix -----------------------------------------------------

RationalFn::RationalFn(MultiPoly numerator)
    : num(std::move(numerator)), den(MultiPoly::constant(num.dim(), 1.0)) {}

RationalFn::RationalFn(MultiPoly numerator, MultiPoly denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
    if (den.is_zero()) throw ParameterError("rational function with zero denominator");
    if (den.dim() != num.dim()) throw DimensionError("numerator and denominator dimensions differ");
}

FnMatrix::FnMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFn> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw DimensionError("function matrix has " + std::to_string(entries_.size()) +
                             " entries, expected " + std::to_string(rows * cols));
    }
    if (rows == 0 || cols == 0) throw DimensionError("function matrix must be non-empty");
    for (const auto& e : entries_) {
        if (e.dim() != entries_.front().dim()) throw DimensionError("entries of mixed dimension");
    }
}

FnMatrix FnMatrix::scalar(RationalFn f) { return FnMatrix(1, 1, {std::move(f)}); }

std::size_t FnMatrix::dim() const noexcept { return entries_.empty() ? 0 : entries_.front().dim(); }

bool FnMatrix::is_polynomial() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const RationalFn& f) { return f.is_polynomial(); });
}

// -- Presentation --------------------------------------------------------------

void Presentation::validate() const {
    if (dim == 0) throw ParameterError("presentation dimension must be at least 1");
    if (functions.empty()) throw ParameterError("presentation has no functions");
    for (std::size_t k = 0; k < functions.size(); ++k) {
        if (functions[k].dim() != dim) {
            throw ParameterError("presentation function " + std::to_string(k) + " has dimension " +
                                 std::to_string(functions[k].dim()) + ", expected " + std::to_string(dim));
        }
    }
    if (!sample_center.empty() && sample_center.size() != dim) {
        throw ParameterError("sample center has wrong dimension");
    }
}

Point Presentation::center() const { return sample_center.empty() ? Point(dim, 0.0) : sample_center; }

CMatrix eval_fn(const FnMatrix& f, const Point& z, const Tolerances& tol) {
    CMatrix out(f.rows(), f.cols());
    for (std::size_t r = 0; r < f.rows(); ++r) {
        for (std::size_t c = 0; c < f.cols(); ++c) {
            const RationalFn& g = f(r, c);
            const Complex den = g.den.eval(z);
            if (std::abs(den) <= tol.pole) {
                std::ostringstream msg;
                msg << "pole at entry (" << r << "," << c << "): |den| = " << std::abs(den);
                throw EvaluationError(msg.str());
            }
            out(r, c) = g.num.eval(z) / den;
        }
    }
    return out;
}

DomainMembership in_domain(const Presentation& p, const Point& z, const Tolerances& tol) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& f : p.functions) margin = std::min(margin, 1.0 - linalg::op_norm(eval_fn(f, z, tol)));
    return {margin > 0.0, margin};
}

double max_commutator(const std::vector<CMatrix>& tuple) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            worst = std::max(worst, (tuple[i] * tuple[j] - tuple[j] * tuple[i]).norm());
        }
    }
    return worst;
}

CMatrix eval_on_tuple(const FnMatrix& f, const std::vector<CMatrix>& tuple, const Tolerances& tol) {
    check_tuple_shape(tuple, f.dim());
    const double comm = max_commutator(tuple);
    if (comm >= tol.commutator) {
        std::ostringstream msg;
        msg << "tuple does not commute: max commutator norm " << comm;
        throw CommutativityError(msg.str());
    }
    const auto d = tuple.front().rows();
    CMatrix out(static_cast<Eigen::Index>(f.rows()) * d, static_cast<Eigen::Index>(f.cols()) * d);
    for (std::size_t r = 0; r < f.rows(); ++r) {
        for (std::size_t c = 0; c < f.cols(); ++c) {
            const RationalFn& g = f(r, c);
            CMatrix value = g.num.eval(tuple);
            if (!g.den.is_constant() || g.den.constant_term() != Complex(1.0)) {
                const CMatrix den = g.den.eval(tuple);
                Eigen::JacobiSVD<CMatrix> svd(den);
                const double smin = svd.singularValues()(svd.singularValues().size() - 1);
                if (smin <= tol.singular_den) {
                    std::ostringstream msg;
                    msg << "denominator of entry (" << r << "," << c
                        << ") is singular on the tuple: min singular value " << smin;
                    throw SpectrumError(msg.str());
                }
                // num(T)·den(T)⁻¹; the factors commute
                value = den.transpose().partialPivLu().solve(value.transpose()).transpose();
            }
            out.block(static_cast<Eigen::Index>(r) * d, static_cast<Eigen::Index>(c) * d, d, d) = value;
        }
    }
    return out;
}

std::vector<Point> joint_eigenvalues(const std::vector<CMatrix>& tuple) {
    if (tuple.empty()) return {};
    const auto d = tuple.front().rows();
    CMatrix combo = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        const double angle = 2.399963 * static_cast<double>(j + 1);
        combo += std::polar(1.0 + 0.173 * static_cast<double>(j), angle) * tuple[j];
    }
    Eigen::ComplexSchur<CMatrix> schur(combo);
    const CMatrix& q = schur.matrixU();
    std::vector<Point> points(static_cast<std::size_t>(d), Point(tuple.size()));
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        const CMatrix tri = q.adjoint() * tuple[j] * q;
        for (Eigen::Index i = 0; i < d; ++i) points[static_cast<std::size_t>(i)][j] = tri(i, i);
    }
    return points;
}

}  // namespace agpk
