#pragma once

#include <algorithm>
#include <cmath>

#include "ebus/errors.hpp"

namespace ebus::battery {

/// Lithium-titanate traction pack treated as an energy reservoir with power
/// caps. No internal resistance, voltage sag or temperature model.
///
/// Sign convention used everywhere: positive terminal power discharges the pack.
struct BatteryPack
{
  double capacity_wh = 200'000.0;
  double specific_energy_whkg = 110.0;
  double specific_power_wkg = 1000.0;
  double energy_density_whl = 177.0;
  double cell_voltage_v = 2.3;
  double max_charge_c_rate = 6.0;
  double max_discharge_c_rate = 10.0;
  double cycle_durability_min = 6000.0;
  double cycle_durability_max = 20000.0;
  double soc = 1.0;

  bool operator==(const BatteryPack&) const = default;
};

enum class Direction { charge, discharge };

inline BatteryPack validate_pack(const BatteryPack& p)
{
  if (!(std::isfinite(p.capacity_wh) && p.capacity_wh > 0))
    throw InvalidConfig("capacity_wh", "must be > 0");
  if (!(std::isfinite(p.specific_energy_whkg) && p.specific_energy_whkg > 0))
    throw InvalidConfig("specific_energy_whkg", "must be > 0");
  if (!(std::isfinite(p.specific_power_wkg) && p.specific_power_wkg > 0))
    throw InvalidConfig("specific_power_wkg", "must be > 0");
  if (!(std::isfinite(p.cell_voltage_v) && p.cell_voltage_v > 0))
    throw InvalidConfig("cell_voltage_v", "must be > 0");
  if (!(p.max_charge_c_rate >= 0 && p.max_discharge_c_rate >= 0))
    throw InvalidConfig("max_charge_c_rate", "c-rate limits must be >= 0");
  if (!(p.soc >= 0 && p.soc <= 1)) throw InvalidConfig("soc", "must be in [0, 1]");
  return p;
}

/// Pack mass at full precision.
inline double pack_mass_kg(const BatteryPack& p) { return p.capacity_wh / p.specific_energy_whkg; }

/// Pack mass truncated to whole kilograms, as shown in reports.
inline long pack_mass_display_kg(const BatteryPack& p)
{
  return static_cast<long>(std::floor(pack_mass_kg(p)));
}

/// Terminal power ceiling: the lower of the specific-power bound and the C-rate bound.
inline double power_limit(const BatteryPack& p, Direction dir)
{
  const double c_rate = dir == Direction::charge ? p.max_charge_c_rate : p.max_discharge_c_rate;
  return std::min(p.specific_power_wkg * pack_mass_kg(p), c_rate * p.capacity_wh);
}

struct StepResult
{
  BatteryPack pack;
  double accepted_w = 0.0;
};

/// Advances the pack by `dt_s` at the requested terminal power. The request is
/// clipped to the direction's power limit and to the energy that keeps soc
/// in [0, 1]; the caller receives what was actually accepted.
inline StepResult step(const BatteryPack& p, double terminal_power_w, double dt_s)
{
  StepResult r{p, 0.0};
  if (terminal_power_w > 0) {
    const double headroom = p.soc * p.capacity_wh * 3600.0 / dt_s;
    r.accepted_w = std::min({terminal_power_w, power_limit(p, Direction::discharge), headroom});
  } else if (terminal_power_w < 0) {
    const double headroom = (1.0 - p.soc) * p.capacity_wh * 3600.0 / dt_s;
    r.accepted_w = -std::min({-terminal_power_w, power_limit(p, Direction::charge), headroom});
  }
  r.pack.soc = std::clamp(p.soc - r.accepted_w * dt_s / 3600.0 / p.capacity_wh, 0.0, 1.0);
  return r;
}

/// Number of series cells needed to reach `string_voltage_v`.
inline int series_cell_count(double string_voltage_v, double cell_voltage_v)
{
  // 1e-9 slack keeps exact multiples from rounding up a whole cell
  return static_cast<int>(std::ceil(string_voltage_v / cell_voltage_v - 1e-9));
}

}  // namespace ebus::battery
