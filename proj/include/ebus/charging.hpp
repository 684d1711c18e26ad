#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ebus/battery.hpp"
#include "ebus/errors.hpp"

namespace ebus::charging {

/// Taper applied above the knee. `linear_in_time` lets power fall linearly in
/// time to zero at full charge, i.e. P = P_ref * sqrt((1 - soc) / (1 - knee)).
enum class TaperShape { linear_in_time };

/// Constant-current (constant power at nominal voltage) up to `knee_soc`,
/// then a taper to zero at soc = 1. The taper envelope starts from the
/// cell-limited CC level; the charger cap clips everything from above.
struct ChargeProfile
{
  double cc_c_rate = 6.0;
  double knee_soc = 0.94;
  TaperShape taper = TaperShape::linear_in_time;
  double charger_power_cap_w = std::numeric_limits<double>::infinity();

  bool operator==(const ChargeProfile&) const = default;
};

struct ChargePoint
{
  double t_s = 0.0;
  double soc = 0.0;
  double power_w = 0.0;  // charging power during the step starting at t_s
};

struct ChargeSession
{
  double start_soc = 0.0;
  double target_soc = 0.0;
  double elapsed_s = 0.0;
  double energy_delivered_wh = 0.0;
  std::vector<ChargePoint> trace;
};

inline ChargeProfile validate_profile(const ChargeProfile& p)
{
  if (!(p.knee_soc > 0 && p.knee_soc <= 1)) throw InvalidConfig("knee_soc", "must be in (0, 1]");
  if (!(std::isfinite(p.cc_c_rate) && p.cc_c_rate > 0))
    throw InvalidConfig("cc_c_rate", "must be > 0");
  if (!(p.charger_power_cap_w > 0)) throw InvalidConfig("charger_power_cap_w", "must be > 0");
  return p;
}

/// Level the taper starts from: the CC rate limited by the pack, ignoring the charger.
inline double taper_reference_power(const battery::BatteryPack& pack, const ChargeProfile& prof)
{
  return std::min(prof.cc_c_rate * pack.capacity_wh,
                  battery::power_limit(pack, battery::Direction::charge));
}

/// Power delivered during the constant phase.
inline double cc_power(const battery::BatteryPack& pack, const ChargeProfile& prof)
{
  return std::min(taper_reference_power(pack, prof), prof.charger_power_cap_w);
}

/// Charging power (positive) the profile allows at `soc`.
inline double charge_power_at(const battery::BatteryPack& pack, const ChargeProfile& prof,
                              double soc)
{
  if (soc >= 1.0) return 0.0;
  const double cc = cc_power(pack, prof);
  if (soc < prof.knee_soc) return cc;
  const double envelope =
      taper_reference_power(pack, prof) * std::sqrt((1.0 - soc) / (1.0 - prof.knee_soc));
  return std::min(cc, envelope);
}

namespace detail {

// Profile split into three soc bands: [0, knee) at cc, [knee, 1 - x_c) at cc,
// [1 - x_c, 1] on the sqrt envelope, where x_c is where the envelope meets cc.
struct Bands
{
  double energy_ws;  // capacity in W*s
  double cc_w;
  double ref_w;
  double knee;
  double sqrt_start;  // soc where the envelope drops below cc
};

inline Bands bands(const battery::BatteryPack& pack, const ChargeProfile& prof)
{
  Bands b{};
  b.energy_ws = pack.capacity_wh * 3600.0;
  b.cc_w = cc_power(pack, prof);
  b.ref_w = taper_reference_power(pack, prof);
  b.knee = prof.knee_soc;
  const double ratio = b.cc_w / b.ref_w;
  b.sqrt_start = 1.0 - (1.0 - b.knee) * ratio * ratio;
  return b;
}

// Time to move along the sqrt envelope from x1 = 1 - soc1 down to x2 = 1 - soc2.
inline double sqrt_band_time(const Bands& b, double soc1, double soc2)
{
  const double k = b.energy_ws * std::sqrt(1.0 - b.knee) / b.ref_w;
  return 2.0 * k * (std::sqrt(1.0 - soc1) - std::sqrt(1.0 - soc2));
}

}  // namespace detail

/// Closed-form duration to charge from `start_soc` to `target_soc`.
/// Returns 0 when the target is not above the start.
inline double time_to_soc(const battery::BatteryPack& pack, const ChargeProfile& prof,
                          double start_soc, double target_soc)
{
  if (target_soc > 1.0) throw TargetUnreachable(target_soc);
  if (target_soc <= start_soc) return 0.0;
  const auto b = detail::bands(pack, prof);

  if (prof.knee_soc >= 1.0) return (target_soc - start_soc) * b.energy_ws / b.cc_w;

  double t = 0.0;
  const double cc_end = std::max(b.knee, b.sqrt_start);
  const double cc_hi = std::min(target_soc, cc_end);
  if (start_soc < cc_hi) t += (cc_hi - start_soc) * b.energy_ws / b.cc_w;
  const double s1 = std::max(start_soc, cc_end);
  if (target_soc > s1) t += detail::sqrt_band_time(b, s1, target_soc);
  return t;
}

inline double time_to_full(const battery::BatteryPack& pack, const ChargeProfile& prof,
                           double start_soc)
{
  return time_to_soc(pack, prof, start_soc, 1.0);
}

/// Closed-form soc reached after charging for `duration_s` from `start_soc`.
inline double soc_after(const battery::BatteryPack& pack, const ChargeProfile& prof,
                        double start_soc, double duration_s)
{
  if (duration_s <= 0 || start_soc >= 1.0) return std::min(start_soc, 1.0);
  const auto b = detail::bands(pack, prof);
  if (prof.knee_soc >= 1.0) return std::min(1.0, start_soc + duration_s * b.cc_w / b.energy_ws);

  const double cc_end = std::max(b.knee, b.sqrt_start);
  double soc = start_soc;
  double left = duration_s;
  if (soc < cc_end) {
    const double t_cc = (cc_end - soc) * b.energy_ws / b.cc_w;
    if (left <= t_cc) return soc + left * b.cc_w / b.energy_ws;
    soc = cc_end;
    left -= t_cc;
  }
  const double k = b.energy_ws * std::sqrt(1.0 - b.knee) / b.ref_w;
  const double root = std::sqrt(1.0 - soc) - left / (2.0 * k);
  if (root <= 0) return 1.0;
  return 1.0 - root * root;
}

/// Steps a charging session at `dt_s` until `target_soc` is reached. Each
/// step uses the profile power at the midpoint soc; the final step is cut
/// short at the target and counts only the time it uses. The pack is not
/// modified; the session reports the trajectory.
inline ChargeSession charge(const battery::BatteryPack& pack, const ChargeProfile& prof,
                            double start_soc, double target_soc, double dt_s = 1.0)
{
  if (target_soc > 1.0) throw TargetUnreachable(target_soc);
  if (!(start_soc >= 0 && start_soc <= target_soc))
    throw InvalidConfig("start_soc", "must be in [0, target_soc]");
  if (!(dt_s > 0)) throw InvalidConfig("dt_s", "must be > 0");

  ChargeSession s;
  s.start_soc = start_soc;
  s.target_soc = target_soc;

  battery::BatteryPack p = pack;
  p.soc = start_soc;
  constexpr double kDone = 1e-12;
  const double energy_ws = p.capacity_wh * 3600.0;
  while (p.soc < target_soc - kDone) {
    const double p0 = charge_power_at(p, prof, p.soc);
    const double mid_soc = std::min(1.0, p.soc + 0.5 * dt_s * p0 / energy_ws);
    if (p0 <= 0) break;
    const double mid = charge_power_at(p, prof, mid_soc);
    const double power = mid > 0 ? mid : p0;
    const double needed_ws = (target_soc - p.soc) * energy_ws;
    const double used_s = std::min(dt_s, needed_ws / power);
    const auto r = battery::step(p, -power * used_s / dt_s, dt_s);
    s.trace.push_back({s.elapsed_s, p.soc, power});
    s.energy_delivered_wh += -r.accepted_w * dt_s / 3600.0;
    s.elapsed_s += used_s;
    p = r.pack;
  }
  s.trace.push_back({s.elapsed_s, p.soc, 0.0});
  return s;
}

/// Compares a quoted "full charge in N minutes at P watts" figure against the profile.
struct FullChargeCheck
{
  double charger_power_w = 0.0;
  double claimed_time_s = 0.0;
  double computed_time_s = 0.0;        // empty to full under the profile
  double energy_in_claimed_time_wh = 0.0;
  double capacity_wh = 0.0;
  bool consistent = false;             // computed time within 10% of the claim
};

inline FullChargeCheck check_full_charge_claim(const battery::BatteryPack& pack,
                                               ChargeProfile prof, double charger_power_w,
                                               double claimed_time_s)
{
  prof.charger_power_cap_w = charger_power_w;
  FullChargeCheck c;
  c.charger_power_w = charger_power_w;
  c.claimed_time_s = claimed_time_s;
  c.computed_time_s = time_to_full(pack, prof, 0.0);
  c.energy_in_claimed_time_wh = soc_after(pack, prof, 0.0, claimed_time_s) * pack.capacity_wh;
  c.capacity_wh = pack.capacity_wh;
  c.consistent = std::abs(c.computed_time_s - claimed_time_s) <= 0.1 * claimed_time_s;
  return c;
}

}  // namespace ebus::charging
