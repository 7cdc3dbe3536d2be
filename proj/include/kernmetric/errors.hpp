#pragma once

#include <stdexcept>
#include <string>

namespace kernmetric {

// Root of every error raised by the library. The CLI maps subclasses to exit
// codes, so the split below is part of the contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative t,
// p outside (1, inf), unnormalized weights, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Points, measures or grids that do not live on the same space.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Profile is not in the strictly positive definite class.
class ClassError : public Error {
 public:
  using Error::Error;
};

class InjectivityError : public Error {
 public:
  using Error::Error;
};

class NondegeneracyError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or overflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input files or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kernmetric
