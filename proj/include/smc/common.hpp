#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smc
{
using Vec2 = Eigen::Vector2d;

/// Base class of every error raised by the library. The CLI maps the concrete
/// subclass onto an exit status.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A point was handed to a routine that is only defined on the domain.
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Quadrature grid cannot resolve the requested modes.
class ResolutionError : public Error
{
public:
  using Error::Error;
};

/// Coefficient vectors do not line up with the mode set.
class AlignmentError : public Error
{
public:
  using Error::Error;
};

/// Invalid numeric parameter (non-positive length, gain, ...).
class ParameterError : public Error
{
public:
  using Error::Error;
};

/// Scenario or invocation is inconsistent.
class ConfigError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

/// NaN/Inf appeared in the state. `step()` is the step index at which the
/// failure was detected, or -1 when not tied to a step.
class NumericalError : public Error
{
public:
  NumericalError(const std::string& what, long step = -1) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

/// Analysis routine applied to a trajectory it is not defined for.
class MisuseError : public Error
{
public:
  using Error::Error;
};

}  // namespace smc
