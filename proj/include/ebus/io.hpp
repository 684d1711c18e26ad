#pragma once

// JSON and CSV formats shared by the command-line front end and the tests.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "ebus/battery.hpp"
#include "ebus/charging.hpp"
#include "ebus/converter.hpp"
#include "ebus/depot.hpp"
#include "ebus/errors.hpp"
#include "ebus/powertrain.hpp"
#include "ebus/quantities.hpp"
#include "ebus/simulator.hpp"
#include "ebus/sizing.hpp"

namespace ebus::io {

using json = nlohmann::json;

/// Malformed input file; `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error
{
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
  {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Every configurable record, populated with the reference defaults.
struct Scenario
{
  VehicleConfig vehicle;
  powertrain::MotorPair motors;
  battery::BatteryPack pack;
  converter::ConverterSpec converter;
  powertrain::AllocationPolicy policy;
  charging::ChargeProfile charging;
  depot::DepotConfig depot;
  sim::SimOptions simulation;
  sim::CityCycleParams city_cycle;
  std::map<std::string, sizing::Golden> golden_overrides;
};

inline Scenario validate_scenario(const Scenario& s)
{
  validate_config(s.vehicle);
  powertrain::validate_motors(s.motors);
  battery::validate_pack(s.pack);
  converter::validate_converter(s.converter);
  powertrain::validate_policy(s.policy);
  charging::validate_profile(s.charging);
  if (s.depot.charger_count < 1) throw InvalidConfig("depot.charger_count", "must be >= 1");
  if (!(s.depot.charger_power_w > 0)) throw InvalidConfig("depot.charger_power_w", "must be > 0");
  if (!(s.simulation.aux_load_w >= 0)) throw InvalidConfig("simulation.aux_load_w", "must be >= 0");
  if (!(s.simulation.reserve_soc >= 0 && s.simulation.reserve_soc < 1))
    throw InvalidConfig("simulation.reserve_soc", "must be in [0, 1)");
  return s;
}

// ---------------------------------------------------------------------------
// enum names

inline const char* enum_name(powertrain::Axle a) { return a == powertrain::Axle::front ? "front" : "rear"; }
inline const char* enum_name(powertrain::MotorKind k)
{
  return k == powertrain::MotorKind::pmsm ? "pmsm" : "induction";
}
inline const char* enum_name(charging::TaperShape) { return "linear_in_time"; }
inline const char* enum_name(depot::PriorityRule) { return "earliest_deadline_first"; }

inline void enum_parse(const std::string& s, powertrain::Axle& out)
{
  if (s == "front") out = powertrain::Axle::front;
  else if (s == "rear") out = powertrain::Axle::rear;
  else throw InvalidConfig("axle", "unknown value '" + s + "'");
}
inline void enum_parse(const std::string& s, powertrain::MotorKind& out)
{
  if (s == "pmsm") out = powertrain::MotorKind::pmsm;
  else if (s == "induction") out = powertrain::MotorKind::induction;
  else throw InvalidConfig("kind", "unknown value '" + s + "'");
}
inline void enum_parse(const std::string& s, charging::TaperShape& out)
{
  if (s != "linear_in_time") throw InvalidConfig("taper", "unknown value '" + s + "'");
  out = charging::TaperShape::linear_in_time;
}
inline void enum_parse(const std::string& s, depot::PriorityRule& out)
{
  if (s != "earliest_deadline_first") throw InvalidConfig("priority", "unknown value '" + s + "'");
  out = depot::PriorityRule::earliest_deadline_first;
}

// ---------------------------------------------------------------------------
// field tables

template <class F> void fields(VehicleConfig& c, F&& f)
{
  f("curb_mass_kg", c.curb_mass_kg);
  f("payload_mass_kg", c.payload_mass_kg);
  f("sim_mass_kg", c.sim_mass_kg);
  f("frontal_area_m2", c.frontal_area_m2);
  f("drag_coeff", c.drag_coeff);
  f("rolling_coeff", c.rolling_coeff);
  f("gravity_ms2", c.gravity_ms2);
  f("air_density_kgm3", c.air_density_kgm3);
  f("top_speed_ms", c.top_speed_ms);
  f("avg_speed_ms", c.avg_speed_ms);
  f("max_accel_ms2", c.max_accel_ms2);
  f("drivetrain_efficiency", c.drivetrain_efficiency);
  f("range_target_km", c.range_target_km);
}

template <class F> void fields(powertrain::MotorSpec& m, F&& f)
{
  f("axle", m.axle);
  f("kind", m.kind);
  f("rated_power_w", m.rated_power_w);
  f("rated_voltage_v", m.rated_voltage_v);
  f("regen_capable", m.regen_capable);
  f("drive_efficiency", m.drive_efficiency);
  f("regen_efficiency", m.regen_efficiency);
}

template <class F> void fields(battery::BatteryPack& p, F&& f)
{
  f("capacity_wh", p.capacity_wh);
  f("specific_energy_whkg", p.specific_energy_whkg);
  f("specific_power_wkg", p.specific_power_wkg);
  f("energy_density_whl", p.energy_density_whl);
  f("cell_voltage_v", p.cell_voltage_v);
  f("max_charge_c_rate", p.max_charge_c_rate);
  f("max_discharge_c_rate", p.max_discharge_c_rate);
  f("cycle_durability_min", p.cycle_durability_min);
  f("cycle_durability_max", p.cycle_durability_max);
  f("soc", p.soc);
}

template <class F> void fields(converter::ConverterSpec& c, F&& f)
{
  f("turns_ratio", c.turns_ratio);
  f("duty_cycle", c.duty_cycle);
  f("input_voltage_v", c.input_voltage_v);
  f("efficiency", c.efficiency);
  f("link_min_v", c.link_min_v);
  f("link_max_v", c.link_max_v);
}

template <class F> void fields(powertrain::AllocationPolicy& p, F&& f)
{
  f("launch_speed_ms", p.launch_speed_ms);
  f("hard_accel_ms2", p.hard_accel_ms2);
  f("regen_front_share", p.regen_front_share);
}

template <class F> void fields(charging::ChargeProfile& p, F&& f)
{
  f("cc_c_rate", p.cc_c_rate);
  f("knee_soc", p.knee_soc);
  f("taper", p.taper);
  f("charger_power_cap_w", p.charger_power_cap_w);  // null = unlimited
}

template <class F> void fields(depot::DepotConfig& d, F&& f)
{
  f("charger_count", d.charger_count);
  f("charger_power_w", d.charger_power_w);
  f("site_power_cap_w", d.site_power_cap_w);
  f("priority", d.priority);
}

template <class F> void fields(sim::SimOptions& o, F&& f)
{
  f("aux_load_w", o.aux_load_w);
  f("reserve_soc", o.reserve_soc);
}

template <class F> void fields(sim::CityCycleParams& p, F&& f)
{
  f("cruise_speed_ms", p.cruise_speed_ms);
  f("stop_spacing_m", p.stop_spacing_m);
  f("accel_ms2", p.accel_ms2);
  f("decel_ms2", p.decel_ms2);
  f("dwell_s", p.dwell_s);
  f("segments", p.segments);
  f("dt_s", p.dt_s);
}

// ---------------------------------------------------------------------------
// generic read/write over the field tables

namespace detail {

template <class T> json value_to_json(const T& v)
{
  if constexpr (std::is_enum_v<T>) {
    return enum_name(v);
  } else if constexpr (std::is_same_v<T, double>) {
    if (std::isinf(v)) return nullptr;
    return v;
  } else if constexpr (std::is_same_v<T, std::optional<double>>) {
    if (!v) return nullptr;
    return *v;
  } else {
    return v;
  }
}

template <class T> void value_from_json(const json& j, T& out, const std::string& path)
{
  try {
    if constexpr (std::is_enum_v<T>) {
      enum_parse(j.get<std::string>(), out);
    } else if constexpr (std::is_same_v<T, double>) {
      out = j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
    } else if constexpr (std::is_same_v<T, std::optional<double>>) {
      out = j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
    } else if constexpr (std::is_same_v<T, int>) {
      if (!j.is_number_integer()) throw InvalidConfig(path, "must be an integer");
      out = j.get<int>();
    } else {
      out = j.get<T>();
    }
  } catch (const json::exception&) {
    throw InvalidConfig(path, "wrong type (" + std::string(j.type_name()) + ")");
  } catch (const InvalidConfig& e) {
    throw InvalidConfig(path, e.reason());
  }
}

}  // namespace detail

template <class T> json record_to_json(T obj)
{
  json j = json::object();
  fields(obj, [&](const char* name, const auto& member) { j[name] = detail::value_to_json(member); });
  return j;
}

/// Overlays the fields present in `j` onto `obj`; unknown keys are rejected.
template <class T> void record_from_json(const json& j, T& obj, const std::string& section)
{
  if (!j.is_object()) throw InvalidConfig(section, "must be an object");
  std::set<std::string> known;
  fields(obj, [&](const char* name, auto& member) {
    known.insert(name);
    if (auto it = j.find(name); it != j.end())
      detail::value_from_json(*it, member, section + "." + name);
  });
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw InvalidConfig(section + "." + item.key(), "unknown field");
}

inline json scenario_to_json(const Scenario& s)
{
  json j;
  j["vehicle"] = record_to_json(s.vehicle);
  j["motors"] = {{"front", record_to_json(s.motors.front)}, {"rear", record_to_json(s.motors.rear)}};
  j["pack"] = record_to_json(s.pack);
  j["converter"] = record_to_json(s.converter);
  j["policy"] = record_to_json(s.policy);
  j["charging"] = record_to_json(s.charging);
  j["depot"] = record_to_json(s.depot);
  j["simulation"] = record_to_json(s.simulation);
  j["simulation"]["city_cycle"] = record_to_json(s.city_cycle);
  if (!s.golden_overrides.empty()) {
    json g = json::object();
    for (const auto& [k, v] : s.golden_overrides) g[k] = {{"value", v.value}, {"tolerance", v.tolerance}};
    j["goldens"] = g;
  }
  return j;
}

/// Builds a scenario from a (possibly partial) config document. Missing
/// sections and fields keep their defaults. The result is validated.
inline Scenario scenario_from_json(const json& j)
{
  if (!j.is_object()) throw InvalidConfig("config", "top level must be an object");
  Scenario s;
  static const std::set<std::string> sections = {"vehicle", "motors",  "pack",       "converter",
                                                 "policy",  "charging", "depot",     "simulation",
                                                 "goldens"};
  for (const auto& item : j.items())
    if (!sections.count(item.key())) throw InvalidConfig(item.key(), "unknown section");

  if (j.contains("vehicle")) record_from_json(j["vehicle"], s.vehicle, "vehicle");
  if (j.contains("motors")) {
    const auto& m = j["motors"];
    if (!m.is_object()) throw InvalidConfig("motors", "must be an object");
    for (const auto& item : m.items())
      if (item.key() != "front" && item.key() != "rear")
        throw InvalidConfig("motors." + item.key(), "unknown field");
    if (m.contains("front")) record_from_json(m["front"], s.motors.front, "motors.front");
    if (m.contains("rear")) record_from_json(m["rear"], s.motors.rear, "motors.rear");
  }
  if (j.contains("pack")) record_from_json(j["pack"], s.pack, "pack");
  if (j.contains("converter")) record_from_json(j["converter"], s.converter, "converter");
  if (j.contains("policy")) record_from_json(j["policy"], s.policy, "policy");
  if (j.contains("charging")) record_from_json(j["charging"], s.charging, "charging");
  if (j.contains("depot")) record_from_json(j["depot"], s.depot, "depot");
  if (j.contains("simulation")) {
    json sim = j["simulation"];
    if (!sim.is_object()) throw InvalidConfig("simulation", "must be an object");
    if (sim.contains("city_cycle")) {
      record_from_json(sim["city_cycle"], s.city_cycle, "simulation.city_cycle");
      sim.erase("city_cycle");
    }
    record_from_json(sim, s.simulation, "simulation");
  }
  if (j.contains("goldens")) {
    const auto refs = sizing::reference_goldens();
    for (const auto& item : j["goldens"].items()) {
      const auto ref = refs.find(item.key());
      if (ref == refs.end()) throw InvalidConfig("goldens." + item.key(), "unknown golden");
      sizing::Golden g = ref->second;
      try {
        if (item.value().is_object()) {
          g.value = item.value().at("value").get<double>();
          g.tolerance = item.value().value("tolerance", g.tolerance);
        } else {
          g.value = item.value().get<double>();
        }
      } catch (const json::exception&) {
        throw InvalidConfig("goldens." + item.key(), "must be a number or {value, tolerance}");
      }
      s.golden_overrides[item.key()] = g;
    }
  }
  return validate_scenario(s);
}

/// Applies one `key=value` override. `key` is a dotted path such as
/// `vehicle.sim_mass_kg`; a bare field name is accepted when exactly one
/// section defines it. The value is parsed as JSON, falling back to a string.
inline void apply_override(json& doc, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidConfig(assignment, "override must look like key=value");
  std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  if (key.find('.') == std::string::npos) {
    const json defaults = scenario_to_json(Scenario{});
    std::vector<std::string> hits;
    auto search = [&](const json& node, const std::string& prefix, auto& self) -> void {
      for (const auto& item : node.items()) {
        const std::string path = prefix.empty() ? item.key() : prefix + "." + item.key();
        if (item.key() == key && !item.value().is_object()) hits.push_back(path);
        if (item.value().is_object()) self(item.value(), path, self);
      }
    };
    search(defaults, "", search);
    // accept unit-less spellings such as sim_mass for sim_mass_kg
    if (hits.empty()) {
      const std::string stem = key + "_";
      auto by_stem = [&](const json& node, const std::string& prefix, auto& self) -> void {
        for (const auto& item : node.items()) {
          const std::string path = prefix.empty() ? item.key() : prefix + "." + item.key();
          if (item.key().rfind(stem, 0) == 0 && !item.value().is_object()) hits.push_back(path);
          if (item.value().is_object()) self(item.value(), path, self);
        }
      };
      by_stem(defaults, "", by_stem);
    }
    if (hits.size() != 1)
      throw InvalidConfig(key, hits.empty() ? "no such field" : "ambiguous field, use section.field");
    key = hits.front();
  }

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (!node->is_object()) *node = json::object();
    pos = dot + 1;
  }
}

// ---------------------------------------------------------------------------
// drive cycle CSV: header `t_s,v_ms[,grade_deg]`

inline std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s, std::size_t line, const char* what)
{
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

inline sim::DriveCycle read_cycle_csv(std::istream& in, std::string name = "cycle")
{
  sim::DriveCycle c;
  c.name = std::move(name);
  std::string line;
  std::size_t lineno = 0;
  bool has_grade = false;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      if (cells.size() == 2 && cells[0] == "t_s" && cells[1] == "v_ms") {
        has_grade = false;
      } else if (cells.size() == 3 && cells[0] == "t_s" && cells[1] == "v_ms" &&
                 cells[2] == "grade_deg") {
        has_grade = true;
      } else {
        throw ParseError(lineno, "expected header 't_s,v_ms[,grade_deg]'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != (has_grade ? 3u : 2u)) throw ParseError(lineno, "wrong number of columns");
    sim::CycleSample s;
    s.t_s = parse_number(cells[0], lineno, "time");
    s.v_ms = parse_number(cells[1], lineno, "speed");
    if (has_grade) s.grade_rad = deg_to_rad(parse_number(cells[2], lineno, "grade"));
    if (s.v_ms < 0) throw ParseError(lineno, "negative speed");
    if (std::abs(s.grade_rad) >= std::numbers::pi / 2) throw ParseError(lineno, "grade out of range");
    if (c.samples.empty() && s.t_s != 0.0) throw ParseError(lineno, "first sample must be at t = 0");
    if (!c.samples.empty() && !(s.t_s > c.samples.back().t_s))
      throw ParseError(lineno, "time must be strictly increasing");
    c.samples.push_back(s);
  }
  if (!header_seen) throw ParseError(lineno ? lineno : 1, "empty cycle file");
  if (c.samples.empty()) throw ParseError(lineno + 1, "cycle has no samples");
  return c;
}

/// Shortest decimal form that round-trips, for CSV and text tables.
inline std::string num(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_cycle_csv(std::ostream& os, const sim::DriveCycle& c)
{
  os << "t_s,v_ms,grade_deg\n";
  for (const auto& s : c.samples)
    os << num(s.t_s) << ',' << num(s.v_ms) << ',' << num(rad_to_deg(s.grade_rad)) << '\n';
}

// ---------------------------------------------------------------------------
// reports

inline json to_json(const sizing::SizingReport& r)
{
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je = {{"key", e.key}, {"unit", e.unit}, {"value", e.value}, {"status", to_string(e.status)}};
    je["expected"] = e.expected ? json(*e.expected) : json(nullptr);
    je["tolerance"] = e.tolerance;
    entries.push_back(je);
  }
  return {{"entries", entries},
          {"all_pass", r.all_pass()},
          {"motor_pair_capability_kw", r.motor_pair_capability_w / 1000.0},
          {"motor_pair_covers_rating", r.motor_pair_covers_rating}};
}

inline void write_sizing_table(std::ostream& os, const sizing::SizingReport& r)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-26s %14s %-6s %14s %s\n", "quantity", "value", "unit", "expected",
                "status");
  os << buf;
  for (const auto& e : r.entries) {
    std::snprintf(buf, sizeof buf, "%-26s %14.4f %-6s %14s %s\n", e.key.c_str(), e.value,
                  e.unit.c_str(), e.expected ? num(*e.expected).c_str() : "-", to_string(e.status));
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "motor pair capability: %.1f kW (%s selected rating)\n",
                r.motor_pair_capability_w / 1000.0,
                r.motor_pair_covers_rating ? "covers" : "BELOW");
  os << buf;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const sim::SimulationReport& r)
{
  json j = {
      {"cycle", r.cycle_name},
      {"duration_s", r.duration_s},
      {"distance_km", r.distance_km},
      {"energy_from_battery_wh", r.energy_from_battery_wh},
      {"energy_regenerated_wh", r.energy_regenerated_wh},
      {"energy_traction_wh", r.energy_traction_wh},
      {"energy_aux_wh", r.energy_aux_wh},
      {"energy_dropped_friction_wh", r.energy_dropped_friction_wh},
      {"energy_unmet_traction_wh", r.energy_unmet_traction_wh},
      {"net_energy_wh", r.net_energy_wh},
      {"energy_per_km_wh", finite_or_null(r.energy_per_km_wh)},
      {"initial_soc", r.initial_soc},
      {"final_soc", r.final_soc},
      {"projected_range_km", finite_or_null(r.projected_range_km)},
      {"range_target_met", r.range_target_met},
      {"peak_wheel_power_kw", r.peak_wheel_power_w / 1000.0},
      {"peak_battery_power_kw", r.peak_battery_power_w / 1000.0},
      {"depleted", r.depleted},
      {"warnings", r.warnings},
  };
  j["depleted_at_s"] = r.depleted_at_s ? json(*r.depleted_at_s) : json(nullptr);
  return j;
}

inline void write_trace_csv(std::ostream& os, const sim::SimulationReport& r)
{
  os << "t_s,v_ms,a_ms2,f_rolling_n,f_aero_n,f_net_n,f_traction_n,wheel_power_w,"
        "front_mech_w,rear_mech_w,front_elec_w,rear_elec_w,dropped_w,battery_power_w,soc\n";
  for (const auto& t : r.trace) {
    os << num(t.t_s) << ',' << num(t.v_ms) << ',' << num(t.a_ms2) << ',' << num(t.forces.f_rolling)
       << ',' << num(t.forces.f_aero) << ',' << num(t.forces.f_net) << ','
       << num(t.forces.f_traction) << ',' << num(t.wheel_power_w) << ','
       << num(t.split.front_mech_w) << ',' << num(t.split.rear_mech_w) << ','
       << num(t.split.front_elec_w) << ',' << num(t.split.rear_elec_w) << ','
       << num(t.split.dropped_w) << ',' << num(t.battery_power_w) << ',' << num(t.soc) << '\n';
  }
}

inline json to_json(const charging::ChargeSession& s)
{
  return {{"start_soc", s.start_soc},
          {"target_soc", s.target_soc},
          {"elapsed_s", s.elapsed_s},
          {"energy_delivered_wh", s.energy_delivered_wh},
          {"steps", s.trace.empty() ? 0 : s.trace.size() - 1}};
}

inline void write_charge_trace_csv(std::ostream& os, const charging::ChargeSession& s)
{
  os << "t_s,soc,power_w\n";
  for (const auto& p : s.trace) os << num(p.t_s) << ',' << num(p.soc) << ',' << num(p.power_w) << '\n';
}

// ---------------------------------------------------------------------------
// depot fleet file

struct FleetScenario
{
  std::vector<depot::BusState> fleet;
  depot::DepotConfig depot;
  charging::ChargeProfile profile;
};

/// Reads `{"buses": [...], "depot": {...}, "charging": {...}}`. Buses take
/// `base.pack` unless they carry a partial `pack` object of their own.
inline FleetScenario fleet_from_json(const json& j, const Scenario& base)
{
  if (!j.is_object() || !j.contains("buses") || !j["buses"].is_array())
    throw InvalidConfig("fleet", "must be an object with a 'buses' array");
  for (const auto& item : j.items())
    if (item.key() != "buses" && item.key() != "depot" && item.key() != "charging")
      throw InvalidConfig("fleet." + item.key(), "unknown field");
  FleetScenario f{{}, base.depot, base.charging};
  if (j.contains("depot")) record_from_json(j["depot"], f.depot, "fleet.depot");
  if (j.contains("charging")) record_from_json(j["charging"], f.profile, "fleet.charging");
  std::size_t idx = 0;
  for (const auto& b : j["buses"]) {
    const std::string path = "fleet.buses[" + std::to_string(idx++) + "]";
    if (!b.is_object()) throw InvalidConfig(path, "must be an object");
    depot::BusState bus;
    bus.pack = base.pack;
    for (const auto& item : b.items()) {
      const auto& k = item.key();
      if (k == "id") detail::value_from_json(item.value(), bus.id, path + ".id");
      else if (k == "arrival_s") detail::value_from_json(item.value(), bus.arrival_s, path + ".arrival_s");
      else if (k == "arrival_soc") detail::value_from_json(item.value(), bus.arrival_soc, path + ".arrival_soc");
      else if (k == "departure_deadline_s")
        detail::value_from_json(item.value(), bus.departure_deadline_s, path + ".departure_deadline_s");
      else if (k == "pack") record_from_json(item.value(), bus.pack, path + ".pack");
      else throw InvalidConfig(path + "." + k, "unknown field");
    }
    for (const char* req : {"id", "arrival_s", "arrival_soc", "departure_deadline_s"})
      if (!b.contains(req)) throw InvalidConfig(path + "." + req, "missing");
    f.fleet.push_back(std::move(bus));
  }
  return f;
}

inline json to_json(const depot::DepotReport& r)
{
  json buses = json::array();
  for (const auto& o : r.outcomes) {
    json b = {{"id", o.id},      {"end_s", o.end_s},   {"final_soc", o.final_soc},
              {"wait_s", o.wait_s}, {"charged_full", o.charged_full}};
    b["start_s"] = o.start_s ? json(*o.start_s) : json(nullptr);
    buses.push_back(b);
  }
  return {{"buses", buses},
          {"utilization", r.utilization},
          {"horizon_start_s", r.horizon_start_s},
          {"horizon_end_s", r.horizon_end_s},
          {"max_concurrent", r.max_concurrent},
          {"feasible", r.feasible}};
}

inline void write_depot_events_csv(std::ostream& os, const depot::DepotReport& r)
{
  os << "t_s,event,bus_id,charger,soc\n";
  for (const auto& e : r.events)
    os << num(e.t_s) << ',' << depot::to_string(e.kind) << ',' << e.bus_id << ',' << e.charger << ','
       << num(e.soc) << '\n';
}

}  // namespace ebus::io
