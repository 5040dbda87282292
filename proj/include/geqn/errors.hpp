#pragma once

#include <stdexcept>
#include <string>

namespace geqn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a scalar function (t >= R, psi'(t) >= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Requested capability is not available for this input (no polynomial form,
/// dimension too large, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

/// A suprema-defined radius could not be bracketed.
class RadiusUndetermined : public Error {
 public:
  explicit RadiusUndetermined(const std::string& which)
      : Error("radius undetermined: " + which), which_(which) {}
  const std::string& which() const { return which_; }

 private:
  std::string which_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace geqn
