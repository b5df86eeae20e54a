#pragma once

#include <stdexcept>
#include <string>

namespace eqwave {

/// Violated precondition (nonpositive k, r0 > 0, malformed grid, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A query point lies outside the fluid (above the free surface).
class OutOfDomainError : public DomainError {
public:
  using DomainError::DomainError;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double lower, double upper, double residual)
      : std::runtime_error(what), lower_(lower), upper_(upper), residual_(residual) {}

  // Best bracket [lower, upper] and last residual at the point of failure.
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double residual() const noexcept { return residual_; }

private:
  double lower_;
  double upper_;
  double residual_;
};

}  // namespace eqwave
