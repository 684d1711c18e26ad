#pragma once

#include <cmath>

#include "ebus/errors.hpp"

namespace ebus::converter {

inline constexpr double kGainEpsilon = 1e-6;

/// Bidirectional isolated DC-DC stage between the pack string and the HV link,
/// modelled by its ideal steady-state gain V_out = V_in / (n * (1 - D)).
///
/// The default duty cycle is the one that lifts 80 V to 741.38 V at n = 0.27.
struct ConverterSpec
{
  double turns_ratio = 0.27;
  double duty_cycle = 0.600345;
  double input_voltage_v = 80.0;
  double efficiency = 0.97;
  double link_min_v = 700.0;
  double link_max_v = 800.0;

  bool operator==(const ConverterSpec&) const = default;
};

/// Allowed operating quadrants. The default is the two-quadrant region:
/// link voltage stays positive, current may flow either way.
struct OperatingRegion
{
  bool allow_reverse_current = true;
  bool allow_reverse_voltage = false;
};

inline ConverterSpec validate_converter(const ConverterSpec& c)
{
  if (!(c.duty_cycle > 0 && c.duty_cycle < 1)) throw InvalidConfig("duty_cycle", "must be in (0, 1)");
  if (!(std::isfinite(c.turns_ratio) && c.turns_ratio > 0))
    throw InvalidConfig("turns_ratio", "must be > 0");
  if (!(c.efficiency > 0 && c.efficiency <= 1)) throw InvalidConfig("efficiency", "must be in (0, 1]");
  if (!(std::isfinite(c.input_voltage_v) && c.input_voltage_v > 0))
    throw InvalidConfig("input_voltage_v", "must be > 0");
  if (!(c.link_min_v <= c.link_max_v)) throw InvalidConfig("link_min_v", "must be <= link_max_v");
  return c;
}

inline double hv_link_voltage(const ConverterSpec& c)
{
  if (c.duty_cycle >= 1.0 - kGainEpsilon) throw GainSingularity(c.duty_cycle);
  return c.input_voltage_v / (c.turns_ratio * (1.0 - c.duty_cycle));
}

/// Duty cycle that produces `target_v` on the link for the given input and turns ratio.
inline double solve_duty_cycle(double input_voltage_v, double turns_ratio, double target_v)
{
  return 1.0 - input_voltage_v / (turns_ratio * target_v);
}

inline bool check_link_in_range(double link_v, const ConverterSpec& c)
{
  return link_v >= c.link_min_v && link_v <= c.link_max_v;
}

/// Power delivered on the far side for `requested_w` entering the near side.
/// Positive flows pack -> link, negative link -> pack; the loss is symmetric.
inline double transfer_power(double requested_w, const ConverterSpec& c,
                             const OperatingRegion& region, double link_voltage_v)
{
  if (link_voltage_v < 0 && !region.allow_reverse_voltage)
    throw QuadrantViolation("operating point implies reversed link voltage");
  if (requested_w < 0 && !region.allow_reverse_current)
    throw QuadrantViolation("reverse power flow outside the allowed region");
  return requested_w * c.efficiency;
}

inline double transfer_power(double requested_w, const ConverterSpec& c)
{
  return transfer_power(requested_w, c, OperatingRegion{}, hv_link_voltage(c));
}

/// Pack-side power that corresponds to `link_power_w` on the HV link: while
/// driving the pack must supply the loss, while regenerating it receives
/// the link power minus the loss.
inline double battery_power_for_link(double link_power_w, const ConverterSpec& c)
{
  if (link_power_w > 0) return link_power_w / c.efficiency;
  return transfer_power(link_power_w, c);
}

}  // namespace ebus::converter
