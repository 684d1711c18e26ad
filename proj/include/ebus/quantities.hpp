#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ebus/errors.hpp"

namespace ebus {

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }
inline constexpr double ms_to_kmh(double ms) { return ms * 3.6; }
inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Vehicle body and resistance parameters. Member defaults are the reference
/// 18 m city bus.
///
/// `sim_mass_kg` is the mass that enters the force equations. It defaults to
/// the payload figure (18000 kg) used in the reference sizing calculation;
/// set it to curb + payload (28000 kg) for gross-weight studies.
struct VehicleConfig
{
  double curb_mass_kg = 10000.0;
  double payload_mass_kg = 18000.0;
  double sim_mass_kg = 18000.0;
  double frontal_area_m2 = 8.925;
  double drag_coeff = 0.7;
  double rolling_coeff = 0.015;
  double gravity_ms2 = 9.8;
  double air_density_kgm3 = 1.225;
  double top_speed_ms = 22.2;
  double avg_speed_ms = 13.89;
  double max_accel_ms2 = 0.7;
  double drivetrain_efficiency = 0.85;
  double range_target_km = 50.0;

  bool operator==(const VehicleConfig&) const = default;
};

/// Road condition for a force evaluation. Grade is in radians; positive is uphill.
struct RoadState
{
  double grade_rad = 0.0;
  double headwind_ms = 0.0;

  bool operator==(const RoadState&) const = default;
};

namespace detail {

inline void require(bool ok, const char* field, const char* reason)
{
  if (!ok) throw InvalidConfig(field, reason);
}

}  // namespace detail

/// Returns `raw` unchanged if every invariant holds, otherwise throws
/// InvalidConfig naming the first violated field.
inline VehicleConfig validate_config(const VehicleConfig& raw)
{
  using detail::require;
  require(std::isfinite(raw.curb_mass_kg) && raw.curb_mass_kg > 0, "curb_mass_kg", "must be > 0");
  require(std::isfinite(raw.payload_mass_kg) && raw.payload_mass_kg > 0, "payload_mass_kg",
          "must be > 0");
  require(std::isfinite(raw.sim_mass_kg) && raw.sim_mass_kg > 0, "sim_mass_kg", "must be > 0");
  require(std::isfinite(raw.frontal_area_m2) && raw.frontal_area_m2 > 0, "frontal_area_m2",
          "must be > 0");
  require(std::isfinite(raw.drag_coeff) && raw.drag_coeff >= 0, "drag_coeff", "must be >= 0");
  require(std::isfinite(raw.rolling_coeff) && raw.rolling_coeff >= 0, "rolling_coeff",
          "must be >= 0");
  require(std::isfinite(raw.gravity_ms2) && raw.gravity_ms2 > 0, "gravity_ms2", "must be > 0");
  require(std::isfinite(raw.air_density_kgm3) && raw.air_density_kgm3 >= 0, "air_density_kgm3",
          "must be >= 0");
  require(std::isfinite(raw.avg_speed_ms) && raw.avg_speed_ms > 0, "avg_speed_ms", "must be > 0");
  require(std::isfinite(raw.top_speed_ms) && raw.top_speed_ms > raw.avg_speed_ms, "top_speed_ms",
          "must exceed avg_speed_ms");
  require(std::isfinite(raw.max_accel_ms2) && raw.max_accel_ms2 >= 0, "max_accel_ms2",
          "must be >= 0");
  require(raw.drivetrain_efficiency > 0 && raw.drivetrain_efficiency <= 1, "drivetrain_efficiency",
          "must be in (0, 1]");
  require(std::isfinite(raw.range_target_km) && raw.range_target_km >= 0, "range_target_km",
          "must be >= 0");
  return raw;
}

inline RoadState validate_road(const RoadState& road)
{
  detail::require(std::isfinite(road.grade_rad) && std::abs(road.grade_rad) < std::numbers::pi / 2,
                  "grade_rad", "must satisfy |grade| < pi/2");
  detail::require(std::isfinite(road.headwind_ms), "headwind_ms", "must be finite");
  return road;
}

}  // namespace ebus
