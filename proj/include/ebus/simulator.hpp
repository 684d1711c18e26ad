#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ebus/battery.hpp"
#include "ebus/converter.hpp"
#include "ebus/dynamics.hpp"
#include "ebus/errors.hpp"
#include "ebus/powertrain.hpp"
#include "ebus/quantities.hpp"

namespace ebus::sim {

struct CycleSample
{
  double t_s = 0.0;
  double v_ms = 0.0;
  double grade_rad = 0.0;
};

struct DriveCycle
{
  std::string name;
  std::vector<CycleSample> samples;
};

inline const DriveCycle& validate_cycle(const DriveCycle& c)
{
  if (c.samples.empty()) throw InvalidConfig("cycle", "has no samples");
  if (c.samples.front().t_s != 0.0) throw InvalidConfig("cycle", "first sample must be at t = 0");
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    if (!std::isfinite(s.v_ms) || s.v_ms < 0) throw InvalidConfig("cycle", "speed must be >= 0");
    validate_road({s.grade_rad, 0.0});
    if (i > 0 && !(s.t_s > c.samples[i - 1].t_s))
      throw InvalidConfig("cycle", "time must be strictly increasing");
  }
  return c;
}

/// Parameters for the synthetic stop-and-go city cycle: accelerate to the
/// cruise speed, cruise, brake to a stop every `stop_spacing_m`, dwell.
struct CityCycleParams
{
  double cruise_speed_ms = 13.89;
  double stop_spacing_m = 500.0;
  double accel_ms2 = 0.7;
  double decel_ms2 = 0.7;
  double dwell_s = 20.0;
  int segments = 10;
  double dt_s = 1.0;

  bool operator==(const CityCycleParams&) const = default;
};

inline DriveCycle make_city_cycle(const CityCycleParams& p)
{
  if (!(p.cruise_speed_ms > 0 && p.stop_spacing_m > 0 && p.accel_ms2 > 0 && p.decel_ms2 > 0 &&
        p.dwell_s >= 0 && p.segments > 0 && p.dt_s > 0))
    throw InvalidConfig("city_cycle", "parameters must be positive");

  // trapezoid (or triangle if the spacing is too short to reach cruise)
  double v_peak = p.cruise_speed_ms;
  const double ramp_dist = v_peak * v_peak / (2 * p.accel_ms2) + v_peak * v_peak / (2 * p.decel_ms2);
  if (ramp_dist > p.stop_spacing_m)
    v_peak = std::sqrt(2 * p.stop_spacing_m / (1 / p.accel_ms2 + 1 / p.decel_ms2));
  const double t_acc = v_peak / p.accel_ms2;
  const double t_dec = v_peak / p.decel_ms2;
  const double cruise_dist =
      p.stop_spacing_m - v_peak * v_peak / (2 * p.accel_ms2) - v_peak * v_peak / (2 * p.decel_ms2);
  const double t_cruise = std::max(0.0, cruise_dist / v_peak);
  const double seg = t_acc + t_cruise + t_dec + p.dwell_s;

  auto speed_at = [&](double t) {
    const double tau = std::fmod(t, seg);
    if (tau < t_acc) return p.accel_ms2 * tau;
    if (tau < t_acc + t_cruise) return v_peak;
    if (tau < t_acc + t_cruise + t_dec) return v_peak - p.decel_ms2 * (tau - t_acc - t_cruise);
    return 0.0;
  };

  DriveCycle c;
  c.name = "city";
  const double total = seg * p.segments;
  const auto steps = static_cast<long>(std::ceil(total / p.dt_s - 1e-9));
  c.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(k * p.dt_s, total);
    c.samples.push_back({t, k == steps ? 0.0 : std::max(0.0, speed_at(t)), 0.0});
  }
  return c;
}

/// Linearly resamples a cycle onto a uniform grid of `dt_s`.
inline DriveCycle resample(const DriveCycle& c, double dt_s)
{
  DriveCycle out{c.name, {}};
  const double end = c.samples.back().t_s;
  std::size_t j = 0;
  for (long k = 0;; ++k) {
    const double t = std::min(k * dt_s, end);
    while (j + 1 < c.samples.size() && c.samples[j + 1].t_s < t) ++j;
    const auto& a = c.samples[j];
    const auto& b = c.samples[std::min(j + 1, c.samples.size() - 1)];
    const double w = b.t_s > a.t_s ? (t - a.t_s) / (b.t_s - a.t_s) : 0.0;
    out.samples.push_back({t, a.v_ms + w * (b.v_ms - a.v_ms), a.grade_rad + w * (b.grade_rad - a.grade_rad)});
    if (t >= end) break;
  }
  return out;
}

struct SimOptions
{
  double aux_load_w = 8000.0;
  double reserve_soc = 0.05;
  bool keep_trace = true;

  bool operator==(const SimOptions&) const = default;
};

struct TraceRow
{
  double t_s = 0.0;  // interval start
  double v_ms = 0.0;  // interval midpoint speed
  double a_ms2 = 0.0;
  dynamics::ForceBreakdown forces;
  double wheel_power_w = 0.0;
  powertrain::PowerSplit split;
  double battery_power_w = 0.0;  // accepted at the pack terminals
  double soc = 0.0;               // at interval end
};

struct SimulationReport
{
  std::string cycle_name;
  double duration_s = 0.0;
  double distance_km = 0.0;
  double energy_from_battery_wh = 0.0;  // gross discharge at the pack terminals
  double energy_regenerated_wh = 0.0;   // traction regen credited to the pack
  double energy_traction_wh = 0.0;      // traction draw at the pack terminals
  double energy_aux_wh = 0.0;
  double energy_dropped_friction_wh = 0.0;
  double energy_unmet_traction_wh = 0.0;
  double net_energy_wh = 0.0;
  double energy_per_km_wh = std::numeric_limits<double>::infinity();
  double initial_soc = 0.0;
  double final_soc = 0.0;
  double projected_range_km = 0.0;
  bool range_target_met = false;
  double peak_wheel_power_w = 0.0;
  double peak_battery_power_w = 0.0;
  bool depleted = false;
  std::optional<double> depleted_at_s;
  std::vector<std::string> warnings;
  std::vector<TraceRow> trace;
};

/// Usable energy (soc 1 down to the reserve floor) divided by consumption.
/// Returns 0 for unbounded consumption and +inf when the cycle is net-positive.
inline double projected_range(double energy_per_km_wh, const battery::BatteryPack& pack,
                              double reserve_soc = 0.05)
{
  if (std::isinf(energy_per_km_wh) && energy_per_km_wh > 0) return 0.0;
  if (energy_per_km_wh <= 0) return std::numeric_limits<double>::infinity();
  return pack.capacity_wh * (1.0 - reserve_soc) / energy_per_km_wh;
}

/// Integrates a drive cycle through dynamics -> powertrain -> converter -> pack.
///
/// For each interval the acceleration is the forward difference of the speed
/// samples and drag uses the midpoint speed, so the inertial work per step
/// equals the kinetic energy change exactly. Halts early if the pack empties.
inline SimulationReport run(const DriveCycle& cycle, const VehicleConfig& cfg,
                            const powertrain::MotorPair& motors, const battery::BatteryPack& pack,
                            const converter::ConverterSpec& conv,
                            const powertrain::AllocationPolicy& policy, const SimOptions& opt = {})
{
  validate_cycle(cycle);
  SimulationReport rep;
  rep.cycle_name = cycle.name;
  rep.initial_soc = pack.soc;

  battery::BatteryPack p = pack;
  const auto& s = cycle.samples;
  double distance_m = 0.0;
  bool warned_speed = false;

  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double dt = s[i + 1].t_s - s[i].t_s;
    const double a = (s[i + 1].v_ms - s[i].v_ms) / dt;
    const double v = 0.5 * (s[i].v_ms + s[i + 1].v_ms);
    const RoadState road{0.5 * (s[i].grade_rad + s[i + 1].grade_rad), 0.0};
    if (!warned_speed && std::max(s[i].v_ms, s[i + 1].v_ms) > cfg.top_speed_ms) {
      rep.warnings.push_back("cycle exceeds configured top speed at t = " +
                             std::to_string(s[i].t_s) + " s");
      warned_speed = true;
    }

    const auto fb = dynamics::traction_force(cfg, v, a, road);
    const double wheel = dynamics::tractive_power(fb, v);
    const double shaft = dynamics::required_motor_power(wheel, cfg.drivetrain_efficiency);
    const auto split = powertrain::allocate(shaft, v, a, motors, policy);
    const double traction_batt = converter::battery_power_for_link(split.total_elec_w(), conv);
    const double request = traction_batt + opt.aux_load_w;

    const auto r = battery::step(p, request, dt);
    p = r.pack;

    double aux_served = opt.aux_load_w;
    if (request > 0 && r.accepted_w < request) {
      aux_served = std::clamp(r.accepted_w, 0.0, opt.aux_load_w);
      rep.energy_unmet_traction_wh += (request - r.accepted_w) * dt / 3600.0;
    }
    const double traction_acc = r.accepted_w - aux_served;
    if (request < 0 && r.accepted_w > request)
      rep.energy_dropped_friction_wh += (r.accepted_w - request) * dt / 3600.0;
    if (split.dropped_w < 0) rep.energy_dropped_friction_wh += -split.dropped_w * dt / 3600.0;
    if (split.dropped_w > 0) rep.energy_unmet_traction_wh += split.dropped_w * dt / 3600.0;

    rep.energy_aux_wh += aux_served * dt / 3600.0;
    rep.energy_traction_wh += std::max(traction_acc, 0.0) * dt / 3600.0;
    rep.energy_regenerated_wh += std::max(-traction_acc, 0.0) * dt / 3600.0;
    rep.energy_from_battery_wh += std::max(r.accepted_w, 0.0) * dt / 3600.0;
    rep.net_energy_wh += r.accepted_w * dt / 3600.0;
    rep.peak_wheel_power_w = std::max(rep.peak_wheel_power_w, wheel);
    rep.peak_battery_power_w = std::max(rep.peak_battery_power_w, r.accepted_w);
    distance_m += v * dt;
    rep.duration_s = s[i + 1].t_s;

    if (opt.keep_trace) rep.trace.push_back({s[i].t_s, v, a, fb, wheel, split, r.accepted_w, p.soc});

    if (p.soc <= 0.0 && request > 0) {
      rep.depleted = true;
      rep.depleted_at_s = s[i + 1].t_s;
      break;
    }
  }

  rep.final_soc = p.soc;
  rep.distance_km = distance_m / 1000.0;
  rep.energy_per_km_wh = rep.distance_km > 0 ? rep.net_energy_wh / rep.distance_km
                                             : std::numeric_limits<double>::infinity();
  rep.projected_range_km = projected_range(rep.energy_per_km_wh, pack, opt.reserve_soc);
  rep.range_target_met = !rep.depleted && rep.projected_range_km >= cfg.range_target_km;
  return rep;
}

}  // namespace ebus::sim
