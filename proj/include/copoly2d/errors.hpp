#pragma once

#include <stdexcept>
#include <string>

namespace copoly2d {

// Base of every error raised by the library. Callers that only need to
// report a failure can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroPolynomial : public Error {
 public:
  using Error::Error;
};

// Exact determinant of a square system is zero, or a rectangular system is
// column-rank deficient.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// Right-hand side is not in the column space of a full-column-rank system.
class InconsistentSystem : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class OracleUnavailable : public Error {
 public:
  using Error::Error;
};

class SingularGram : public Error {
 public:
  using Error::Error;
};

class NoConstantSolution : public Error {
 public:
  using Error::Error;
};

class SingularLambda : public Error {
 public:
  using Error::Error;
};

// Family definition file failed schema or invariant validation.
class LoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace copoly2d
