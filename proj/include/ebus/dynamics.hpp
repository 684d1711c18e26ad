#pragma once

#include <cmath>

#include "ebus/errors.hpp"
#include "ebus/quantities.hpp"

namespace ebus::dynamics {

/// Longitudinal force decomposition at one operating point. All values in N.
///
/// `f_net` is the inertial term M*a plus the grade component M*g*sin(theta),
/// and `f_traction` is always computed as f_net + f_rolling + f_aero.
struct ForceBreakdown
{
  double f_rolling = 0.0;
  double f_aero = 0.0;
  double f_net = 0.0;
  double f_traction = 0.0;
};

inline double rolling_force(const VehicleConfig& cfg, const RoadState& road = {})
{
  return cfg.rolling_coeff * cfg.sim_mass_kg * cfg.gravity_ms2 * std::cos(road.grade_rad);
}

inline double grade_force(const VehicleConfig& cfg, const RoadState& road = {})
{
  return cfg.sim_mass_kg * cfg.gravity_ms2 * std::sin(road.grade_rad);
}

/// Aerodynamic drag 0.5 * C_a * A_f * rho * v_rel^2 with v_rel = speed + headwind.
/// A tailwind faster than the vehicle is outside the model.
inline double aero_force(const VehicleConfig& cfg, double speed_ms, const RoadState& road = {})
{
  const double v_rel = speed_ms + road.headwind_ms;
  if (v_rel < 0) throw NegativeRelativeSpeed(v_rel);
  return 0.5 * cfg.drag_coeff * cfg.frontal_area_m2 * cfg.air_density_kgm3 * v_rel * v_rel;
}

inline ForceBreakdown traction_force(const VehicleConfig& cfg, double speed_ms, double accel_ms2,
                                     const RoadState& road = {})
{
  ForceBreakdown fb;
  fb.f_rolling = rolling_force(cfg, road);
  fb.f_aero = aero_force(cfg, speed_ms, road);
  fb.f_net = cfg.sim_mass_kg * accel_ms2;
  if (road.grade_rad != 0.0) fb.f_net += grade_force(cfg, road);
  fb.f_traction = fb.f_net + fb.f_rolling + fb.f_aero;
  return fb;
}

inline double tractive_power(const ForceBreakdown& fb, double speed_ms)
{
  return fb.f_traction * speed_ms;
}

/// Motor shaft power for a given wheel power. Propulsion divides by the
/// drivetrain efficiency, regeneration multiplies by it, so losses always
/// reduce what reaches the far side.
inline double required_motor_power(double wheel_power_w, double efficiency)
{
  if (wheel_power_w > 0) return wheel_power_w / efficiency;
  if (wheel_power_w < 0) return wheel_power_w * efficiency;
  return 0.0;
}

/// Motor shaft power needed at top speed, full design acceleration and flat
/// road, rounded up to a multiple of `granularity_w`.
inline double size_motor_rating(const VehicleConfig& cfg, double granularity_w = 10'000.0)
{
  const auto fb = traction_force(cfg, cfg.top_speed_ms, cfg.max_accel_ms2);
  const double required =
      required_motor_power(tractive_power(fb, cfg.top_speed_ms), cfg.drivetrain_efficiency);
  if (required <= 0) return 0.0;
  return std::ceil(required / granularity_w) * granularity_w;
}

}  // namespace ebus::dynamics
