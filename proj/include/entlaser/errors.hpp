#pragma once

#include <stdexcept>
#include <string>

namespace entlaser {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value is out of range. `field()` names it.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// |P3 P4| or |P3 P5| fell below the configured floor.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// The eigenbasis of the second-moment matrix cannot represent the solution.
class SpectralDegenerate : public Error {
 public:
  using Error::Error;
};

/// The parametric closed forms were requested outside a parametric regime.
class RegimeMismatch : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

class DegenerateSteadyState : public Error {
 public:
  using Error::Error;
};

}  // namespace entlaser
