// errors.hpp - exception types shared by all mqdecay modules

#pragma once

#include <stdexcept>
#include <string>

namespace mqdecay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (|M| > n, parity mismatch, p outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two spins share a position, so a coupling would be infinite.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// The degree of correlation is undefined because every coupling in the
/// relevant rows is zero.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured resource cap (e.g. the oracle spin limit).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A fit or estimate could not be formed from the data provided.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files or records.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mqdecay
