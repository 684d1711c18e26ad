#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebus/battery.hpp"
#include "ebus/converter.hpp"
#include "ebus/dynamics.hpp"
#include "ebus/powertrain.hpp"
#include "ebus/quantities.hpp"

namespace ebus::sizing {

enum class GoldenStatus { pass, fail, not_applicable };

inline const char* to_string(GoldenStatus s)
{
  switch (s) {
    case GoldenStatus::pass: return "pass";
    case GoldenStatus::fail: return "fail";
    case GoldenStatus::not_applicable: return "n/a";
  }
  return "?";
}

struct SizingEntry
{
  std::string key;
  std::string unit;
  double value = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  GoldenStatus status = GoldenStatus::not_applicable;
};

struct SizingReport
{
  std::vector<SizingEntry> entries;
  double motor_pair_capability_w = 0.0;
  bool motor_pair_covers_rating = false;

  bool all_pass() const
  {
    for (const auto& e : entries)
      if (e.status == GoldenStatus::fail) return false;
    return true;
  }

  const SizingEntry* find(const std::string& key) const
  {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

struct Golden
{
  double value;
  double tolerance;
};

/// Reference values for the default bus. Units match the report entries.
inline std::map<std::string, Golden> reference_goldens()
{
  return {
      {"rolling_force_n", {2646.0, 1e-6}},
      {"aero_force_n", {1885.90, 0.05}},
      {"net_force_n", {12600.0, 1e-6}},
      {"traction_force_n", {17131.90, 0.1}},
      {"tractive_power_kw", {380.33, 0.1}},
      {"required_motor_power_kw", {447.44, 0.05}},
      {"motor_rating_kw", {450.0, 0.0}},
      {"pack_mass_kg", {1818.0, 0.0}},
      {"series_cells", {35.0, 0.0}},
      {"hv_link_voltage_v", {741.38, 0.05}},
      {"hv_link_in_range", {1.0, 0.0}},
  };
}

/// Computes every sizing figure. Golden comparison applies only to groups
/// whose inputs equal the reference defaults: vehicle figures need the
/// default VehicleConfig, pack mass the default pack, cell count and link
/// voltage the default converter (and pack, for cell voltage).
inline SizingReport sizing_report(const VehicleConfig& cfg, const powertrain::MotorPair& motors,
                                  const battery::BatteryPack& pack,
                                  const converter::ConverterSpec& conv,
                                  std::map<std::string, Golden> goldens = reference_goldens())
{
  SizingReport rep;
  const double v = cfg.top_speed_ms;
  const auto fb = dynamics::traction_force(cfg, v, cfg.max_accel_ms2);
  const double p_wheel = dynamics::tractive_power(fb, v);
  const double p_motor = dynamics::required_motor_power(p_wheel, cfg.drivetrain_efficiency);
  const double rating = dynamics::size_motor_rating(cfg);
  const double link_v = converter::hv_link_voltage(conv);

  const battery::BatteryPack ref_pack;
  const bool vehicle_ref = cfg == VehicleConfig{};
  const bool pack_ref = pack.capacity_wh == ref_pack.capacity_wh &&
                        pack.specific_energy_whkg == ref_pack.specific_energy_whkg;
  const bool conv_ref = conv == converter::ConverterSpec{};
  const bool cells_ref = conv_ref && pack.cell_voltage_v == ref_pack.cell_voltage_v;

  auto add = [&](std::string key, std::string unit, double value, bool applicable) {
    SizingEntry e{key, std::move(unit), value, std::nullopt, 0.0, GoldenStatus::not_applicable};
    if (auto it = goldens.find(key); it != goldens.end() && applicable) {
      e.expected = it->second.value;
      e.tolerance = it->second.tolerance;
      e.status = std::abs(value - it->second.value) <= it->second.tolerance ? GoldenStatus::pass
                                                                             : GoldenStatus::fail;
    }
    rep.entries.push_back(std::move(e));
  };

  add("rolling_force_n", "N", fb.f_rolling, vehicle_ref);
  add("aero_force_n", "N", fb.f_aero, vehicle_ref);
  add("net_force_n", "N", fb.f_net, vehicle_ref);
  add("traction_force_n", "N", fb.f_traction, vehicle_ref);
  add("tractive_power_kw", "kW", p_wheel / 1000.0, vehicle_ref);
  add("required_motor_power_kw", "kW", p_motor / 1000.0, vehicle_ref);
  add("motor_rating_kw", "kW", rating / 1000.0, vehicle_ref);
  add("pack_mass_kg", "kg", static_cast<double>(battery::pack_mass_display_kg(pack)), pack_ref);
  add("series_cells", "cells",
      battery::series_cell_count(conv.input_voltage_v, pack.cell_voltage_v), cells_ref);
  add("hv_link_voltage_v", "V", link_v, conv_ref);
  add("hv_link_in_range", "bool", converter::check_link_in_range(link_v, conv) ? 1.0 : 0.0,
      conv_ref);

  rep.motor_pair_capability_w = powertrain::capability(motors, powertrain::Mode::propulsion);
  rep.motor_pair_covers_rating = rep.motor_pair_capability_w >= rating;
  return rep;
}

}  // namespace ebus::sizing
