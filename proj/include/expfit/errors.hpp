#pragma once

#include <stdexcept>
#include <string>

namespace expfit {

/// Base class for all expfit error conditions that are not plain
/// std::invalid_argument precondition violations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A linear system (Hankel, Vandermonde) is numerically singular, typically
/// because nodes or frequencies collide.
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

/// The design matrix of a linear least-squares step has rank below the number
/// of unknowns (frequencies aliased on the sampling set).
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// A decoupling denominator |F(f_j)(s)| is too close to zero on the sampling
/// set: the sampling set intersects the zero set of the transform.
class DivisionHazardError : public Error {
 public:
  using Error::Error;
};

/// A stability certificate was requested but does not exist (metric span or
/// sample gap is zero).
class NoCertificateError : public Error {
 public:
  using Error::Error;
};

/// A mixture component has an empty candidate sampling set W_j.
class UnsamplableComponentError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace expfit
