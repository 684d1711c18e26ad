#pragma once

#include <stdexcept>
#include <string>

namespace ebus {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error
{
public:
  InvalidConfig(std::string field, std::string reason)
      : Error("invalid config: " + field + ": " + reason), field_(std::move(field)),
        reason_(std::move(reason))
  {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::string field_;
  std::string reason_;
};

class NegativeRelativeSpeed : public Error
{
public:
  explicit NegativeRelativeSpeed(double v_rel)
      : Error("relative air speed is negative (" + std::to_string(v_rel) + " m/s)")
  {}
};

class NotRegenCapable : public Error
{
public:
  NotRegenCapable() : Error("regenerative demand but no motor is regen capable") {}
};

class GainSingularity : public Error
{
public:
  explicit GainSingularity(double duty)
      : Error("converter gain singular at duty cycle " + std::to_string(duty))
  {}
};

class QuadrantViolation : public Error
{
public:
  using Error::Error;
};

class TargetUnreachable : public Error
{
public:
  explicit TargetUnreachable(double target)
      : Error("target soc " + std::to_string(target) + " is above 1")
  {}
};

class InfeasibleConfig : public Error
{
public:
  using Error::Error;
};

}  // namespace ebus
