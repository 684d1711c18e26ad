#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "ebus/errors.hpp"

namespace ebus::powertrain {

enum class Axle { front, rear };
enum class MotorKind { pmsm, induction };
enum class Mode { propulsion, regen };

struct MotorSpec
{
  Axle axle = Axle::rear;
  MotorKind kind = MotorKind::induction;
  double rated_power_w = 0.0;
  double rated_voltage_v = 0.0;
  bool regen_capable = true;
  double drive_efficiency = 0.92;  // electrical -> mechanical
  double regen_efficiency = 0.92;  // mechanical -> electrical

  bool operator==(const MotorSpec&) const = default;
};

/// 3-phase 4-pole AC induction motor on the rear axle.
inline MotorSpec reference_rear_motor()
{
  return {Axle::rear, MotorKind::induction, 235'000.0, 320.0, true, 0.92, 0.92};
}

/// Permanent-magnet synchronous motor on the front axle.
inline MotorSpec reference_front_motor()
{
  return {Axle::front, MotorKind::pmsm, 133'000.0, 320.0, true, 0.92, 0.92};
}

struct MotorPair
{
  MotorSpec front = reference_front_motor();
  MotorSpec rear = reference_rear_motor();

  bool operator==(const MotorPair&) const = default;
};

/// Tuning for the part-time AWD split.
///
/// Below `launch_speed_ms` demand is shared equally. Above it the rear motor
/// drives alone unless demand exceeds its rating or acceleration reaches
/// `hard_accel_ms2`. Under regeneration the front motor takes
/// `regen_front_share` of the braking power.
struct AllocationPolicy
{
  double launch_speed_ms = 4.17;
  double hard_accel_ms2 = 0.7;
  double regen_front_share = 0.6;

  bool operator==(const AllocationPolicy&) const = default;
};

/// Result of one allocation. Mechanical values are shaft power, electrical
/// values are at the inverter terminals (positive = drawn from the link).
///
/// `dropped_w` closes the balance front_mech + rear_mech + dropped = demand:
/// positive for unmet propulsion, negative for braking power sent to the
/// friction brakes.
struct PowerSplit
{
  double front_mech_w = 0.0;
  double rear_mech_w = 0.0;
  double front_elec_w = 0.0;
  double rear_elec_w = 0.0;
  double dropped_w = 0.0;
  bool limited = false;

  double total_mech_w() const { return front_mech_w + rear_mech_w; }
  double total_elec_w() const { return front_elec_w + rear_elec_w; }
};

inline MotorSpec validate_motor(const MotorSpec& m)
{
  if (!(std::isfinite(m.rated_power_w) && m.rated_power_w > 0))
    throw InvalidConfig("rated_power_w", "must be > 0");
  if (!(m.drive_efficiency > 0 && m.drive_efficiency <= 1))
    throw InvalidConfig("drive_efficiency", "must be in (0, 1]");
  if (!(m.regen_efficiency > 0 && m.regen_efficiency <= 1))
    throw InvalidConfig("regen_efficiency", "must be in (0, 1]");
  return m;
}

inline MotorPair validate_motors(const MotorPair& motors)
{
  validate_motor(motors.front);
  validate_motor(motors.rear);
  return motors;
}

inline AllocationPolicy validate_policy(const AllocationPolicy& p)
{
  if (!(std::isfinite(p.launch_speed_ms) && p.launch_speed_ms > 0))
    throw InvalidConfig("launch_speed_ms", "must be > 0");
  if (!(std::isfinite(p.hard_accel_ms2) && p.hard_accel_ms2 > 0))
    throw InvalidConfig("hard_accel_ms2", "must be > 0");
  if (!(p.regen_front_share >= 0.5 && p.regen_front_share <= 1))
    throw InvalidConfig("regen_front_share", "must be in [0.5, 1]");
  return p;
}

inline double capability(std::span<const MotorSpec> motors, Mode mode)
{
  double total = 0.0;
  for (const auto& m : motors)
    if (mode == Mode::propulsion || m.regen_capable) total += m.rated_power_w;
  return total;
}

inline double capability(const MotorPair& motors, Mode mode)
{
  const MotorSpec both[] = {motors.front, motors.rear};
  return capability(both, mode);
}

namespace detail {

inline void apply_efficiencies(PowerSplit& s, const MotorPair& motors)
{
  auto to_elec = [](double mech, const MotorSpec& m) {
    if (mech > 0) return mech / m.drive_efficiency;
    if (mech < 0) return mech * m.regen_efficiency;
    return 0.0;
  };
  s.front_elec_w = to_elec(s.front_mech_w, motors.front);
  s.rear_elec_w = to_elec(s.rear_mech_w, motors.rear);
}

}  // namespace detail

/// Splits a shaft power demand between the front and rear motors.
inline PowerSplit allocate(double demand_w, double speed_ms, double accel_ms2,
                           const MotorPair& motors, const AllocationPolicy& policy)
{
  PowerSplit s;
  const double front_cap = motors.front.rated_power_w;
  const double rear_cap = motors.rear.rated_power_w;

  if (demand_w > 0) {
    if (speed_ms < policy.launch_speed_ms) {
      const double half = demand_w / 2;
      s.front_mech_w = std::min(half, front_cap);
      s.rear_mech_w = std::min(half, rear_cap);
      // a saturated motor hands its surplus to the other one
      s.rear_mech_w = std::min(rear_cap, s.rear_mech_w + (half - s.front_mech_w));
      s.front_mech_w = std::min(front_cap, s.front_mech_w + (demand_w - s.front_mech_w - s.rear_mech_w));
    } else if (demand_w <= rear_cap && accel_ms2 < policy.hard_accel_ms2) {
      s.rear_mech_w = demand_w;
    } else {
      s.rear_mech_w = std::min(demand_w, rear_cap);
      s.front_mech_w = std::min(demand_w - s.rear_mech_w, front_cap);
    }
  } else if (demand_w < 0) {
    const bool front_ok = motors.front.regen_capable;
    const bool rear_ok = motors.rear.regen_capable;
    if (!front_ok && !rear_ok) throw NotRegenCapable();

    const double brake = -demand_w;
    double front = 0.0;
    double rear = 0.0;
    if (front_ok && rear_ok) {
      front = std::min(policy.regen_front_share * brake, front_cap);
      rear = std::min(brake - front, rear_cap);
      front = std::min(front_cap, brake - rear);
    } else if (front_ok) {
      front = std::min(brake, front_cap);
    } else {
      rear = std::min(brake, rear_cap);
    }
    s.front_mech_w = -front;
    s.rear_mech_w = -rear;
  }

  s.dropped_w = demand_w - s.front_mech_w - s.rear_mech_w;
  s.limited = std::abs(s.dropped_w) > 1e-9 * std::max(1.0, std::abs(demand_w));
  detail::apply_efficiencies(s, motors);
  return s;
}

}  // namespace ebus::powertrain
