#pragma once

#include "bvc/rational.hpp"

#include <stdexcept>
#include <string>

namespace bvc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct NegativeMass : Error {
  using Error::Error;
};

struct MassSumNotOne : Error {
  explicit MassSumNotOne(const Rational& deficit);
  Rational deficit;  // 1 - (sum of masses), exact
};

struct CovarianceOutOfRange : Error {
  using Error::Error;
};

// reconstruct_joint called with a free parameter outside the feasible
// interval of an otherwise realizable covariance triple.
struct ParameterOutOfRange : Error {
  using Error::Error;
};

struct InvalidComplex : Error {
  using Error::Error;
};

struct InconsistentOverlap : Error {
  using Error::Error;
};

struct ProductSpaceTooLarge : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct InvalidModel : Error {
  using Error::Error;
};

struct UnscheduledCategory : Error {
  using Error::Error;
};

struct EmptyCategory : Error {
  using Error::Error;
};

struct WrongCategoryCount : Error {
  using Error::Error;
};

}  // namespace bvc
