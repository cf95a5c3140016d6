#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "agpk/config.hpp"
#include "agpk/linalg.hpp"

namespace agpk {

using linalg::CMatrix;
using linalg::Complex;

/// A point of ℂᴺ.
using Point = std::vector<Complex>;

/// Exponent multi-index of a monomial.
using Exponent = std::vector<int>;

/// Sparse multivariate polynomial with complex coefficients. Zero
/// coefficients are never stored.
class MultiPoly {
  public:
    explicit MultiPoly(std::size_t dim = 0) : dim_(dim) {}

    static MultiPoly constant(std::size_t dim, Complex c);
    /// The coordinate function z_j.
    static MultiPoly variable(std::size_t dim, std::size_t j);
    static MultiPoly monomial(std::size_t dim, const Exponent& exp, Complex c = 1.0);

    std::size_t dim() const noexcept { return dim_; }
    const std::map<Exponent, Complex>& terms() const noexcept { return terms_; }

    /// Adds c·z^exp to the polynomial, dropping the term if it cancels to zero.
    void add_term(const Exponent& exp, Complex c);

    bool is_zero() const noexcept { return terms_.empty(); }
    /// True when the only possible term is the constant one.
    bool is_constant() const;
    Complex constant_term() const;
    int total_degree() const;

    Complex eval(const Point& z) const;
    /// Polynomial functional calculus by monomial substitution. The tuple is
    /// assumed to commute; callers check.
    CMatrix eval(const std::vector<CMatrix>& tuple) const;

    MultiPoly operator+(const MultiPoly& other) const;
    MultiPoly operator-(const MultiPoly& other) const;
    MultiPoly operator*(const MultiPoly& other) const;
    MultiPoly operator*(Complex c) const;

    bool operator==(const MultiPoly& other) const = default;

  private:
    std::size_t dim_;
    std::map<Exponent, Complex> terms_;
};

/// num/den pair. No simplification is attempted.
struct RationalFn {
    MultiPoly num;
    MultiPoly den;

    RationalFn() = default;
    RationalFn(MultiPoly numerator);  // NOLINT(google-explicit-constructor): polynomials are rational
    RationalFn(MultiPoly numerator, MultiPoly denominator);

    std::size_t dim() const noexcept { return num.dim(); }
    bool is_polynomial() const { return den.is_constant(); }
};

/// Matrix whose entries are rational functions of N variables.
class FnMatrix {
  public:
    FnMatrix() = default;
    FnMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFn> entries);
    /// 1×1 matrix.
    static FnMatrix scalar(RationalFn f);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const noexcept;
    const RationalFn& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    const std::vector<RationalFn>& entries() const noexcept { return entries_; }
    bool is_polynomial() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<RationalFn> entries_;
};

/// G = {z : ‖F_k(z)‖ < 1 for every k} with finitely many F_k.
struct Presentation {
    std::string name;
    std::size_t dim = 0;
    std::vector<FnMatrix> functions;
    /// Box used by samplers: |Re(z_j − c_j)|, |Im(z_j − c_j)| ≤ sample_radius.
    Point sample_center;
    double sample_radius = 1.0;

    std::size_t size() const noexcept { return functions.size(); }
    /// Throws ParameterError when entry dimensions disagree with dim.
    void validate() const;
    Point center() const;
};

struct DomainMembership {
    bool inside;
    double margin;  // min_k (1 − ‖F_k(z)‖)
};

/// Entrywise evaluation. Throws EvaluationError naming the entry at a pole.
CMatrix eval_fn(const FnMatrix& f, const Point& z, const Tolerances& tol = default_tolerances());

DomainMembership in_domain(const Presentation& p, const Point& z,
                           const Tolerances& tol = default_tolerances());

/// Max commutator Frobenius norm over all pairs.
double max_commutator(const std::vector<CMatrix>& tuple);

/// Functional calculus f(T) for pairwise-commuting square T_j of equal size d.
/// Returns the (rows·d)×(cols·d) block matrix [f_rc(T)].
/// Throws CommutativityError, SpectrumError (singular den(T)), DimensionError.
CMatrix eval_on_tuple(const FnMatrix& f, const std::vector<CMatrix>& tuple,
                      const Tolerances& tol = default_tolerances());

/// Joint eigenvalues of a commuting tuple read off a simultaneous Schur
/// triangularization (Schur form of a fixed generic linear combination).
std::vector<Point> joint_eigenvalues(const std::vector<CMatrix>& tuple);

// -- presets -----------------------------------------------------------------

struct PresetParams {
    std::size_t n = 1;       // number of variables (polydisk, balls, halfplane)
    std::size_t rows = 2;    // matrix_ball
    std::size_t cols = 2;    // matrix_ball
    Complex a = 0.0;         // lens
    Complex b = 0.5;         // lens
    double r = 0.5;          // annulus
};

/// Names: disk, polydisk, ball_row, ball_col, ball_rowcol, lens, annulus,
/// matrix_ball, disk_pow, halfplane. Throws ParameterError for an unknown
/// name or parameters outside their constraints.
Presentation preset(const std::string& name, const PresetParams& params = {});

std::vector<std::string> preset_names();

}  // namespace agpk
