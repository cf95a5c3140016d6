#pragma once

#include <stdexcept>
#include <string>

namespace agpk {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Wrong matrix dimensions (non-square, mismatched blocks).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Structural property violated, e.g. a matrix that should be Hermitian is not.
class ShapeError : public Error {
  public:
    using Error::Error;
};

class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Rational function evaluated at (or numerically at) a pole.
class EvaluationError : public Error {
  public:
    using Error::Error;
};

/// A point is not in the open domain. Carries the measured margin.
class DomainError : public Error {
  public:
    DomainError(const std::string& what, double margin) : Error(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

  private:
    double margin_;
};

class CommutativityError : public Error {
  public:
    using Error::Error;
};

/// den(T) is not invertible for a matrix tuple T.
class SpectrumError : public Error {
  public:
    using Error::Error;
};

class DuplicatePointError : public Error {
  public:
    using Error::Error;
};

/// Tuple violates ‖F_k(T)‖ ≤ 1 for some k.
class AdmissibilityError : public Error {
  public:
    AdmissibilityError(const std::string& what, std::size_t index, double margin)
        : Error(what), index_(index), margin_(margin) {}
    std::size_t constraint_index() const noexcept { return index_; }
    double margin() const noexcept { return margin_; }

  private:
    std::size_t index_;
    double margin_;
};

}  // namespace agpk
