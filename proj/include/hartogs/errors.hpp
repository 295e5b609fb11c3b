#pragma once

#include <stdexcept>
#include <string>

namespace hartogs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (shapes, domain parameters, Wallach membership).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A kernel or potential evaluated where the generic norm (or its shifted form) vanishes.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Weight parameter outside the admissible range (alpha <= d+1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Refusal to estimate an integral that does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference output is not positive definite or is ill-conditioned.
class NumericalDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Operation only implemented for the complex-hyperbolic-ball base.
class UnsupportedBaseError : public Error {
 public:
  using Error::Error;
};

/// Fubini-Study diastasis between points whose representatives are orthogonal.
class HyperplaneAtInfinityError : public Error {
 public:
  using Error::Error;
};

}  // namespace hartogs
