#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace infogeom {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spatial point or parameter point fell outside its declared open domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// ln P was requested where P is below the density floor.
class ZeroDensityError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Components of a disjoint product do not share one parametric domain.
class ParametricDomainMismatch : public Error {
 public:
  using Error::Error;
};

/// A builder precondition on a user-supplied map was violated numerically.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, double max_violation)
      : Error(what), max_violation_(max_violation) {}
  double max_violation() const noexcept { return max_violation_; }

 private:
  double max_violation_;
};

class OrthonormalityError : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

/// Spatial domain is not invariant under the symmetry a builder relies on.
class DomainInvarianceError : public Error {
 public:
  using Error::Error;
};

class InvalidDiffeoError : public Error {
 public:
  using Error::Error;
};

/// A base density cannot be used for the requested mode (e.g. D or E diverges).
class InadmissibleBaseError : public Error {
 public:
  using Error::Error;
};

class UnknownNameError : public Error {
 public:
  UnknownNameError(const std::string& what, std::vector<std::string> valid)
      : Error(what), valid_(std::move(valid)) {}
  const std::vector<std::string>& valid_names() const noexcept { return valid_; }

 private:
  std::vector<std::string> valid_;
};

}  // namespace infogeom
