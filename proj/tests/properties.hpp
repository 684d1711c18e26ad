#pragma once

// Invariant checks shared by the unit tests and the acceptance runner. Each
// returns an empty string when the invariant holds, else a description.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ebus/depot.hpp"
#include "ebus/powertrain.hpp"
#include "ebus/simulator.hpp"

namespace props {

/// Replays the depot event log: chronological order, charger count and site
/// power bounds, EDF order at every start, no idle charger while a bus
/// waits, outcomes within [0, 1] soc and before the deadline.
inline std::string depot_invariants(const std::vector<ebus::depot::BusState>& fleet,
                                    const ebus::depot::DepotConfig& d,
                                    const ebus::depot::DepotReport& rep)
{
  using ebus::depot::EventKind;
  std::ostringstream err;
  std::map<std::string, const ebus::depot::BusState*> info;
  for (const auto& b : fleet) info[b.id] = &b;
  const int limit = ebus::depot::max_concurrent_sessions(d);
  std::set<std::string> waiting, active;

  for (std::size_t i = 0; i < rep.events.size(); ++i) {
    const auto& e = rep.events[i];
    if (i > 0 && e.t_s < rep.events[i - 1].t_s) return "events out of order";
    switch (e.kind) {
      case EventKind::arrive:
        if (info.at(e.bus_id)->arrival_soc < ebus::depot::kFullSoc) waiting.insert(e.bus_id);
        break;
      case EventKind::start: {
        if (!waiting.count(e.bus_id)) return "start without waiting: " + e.bus_id;
        const auto* chosen = info.at(e.bus_id);
        for (const auto& w : waiting) {
          const auto* cand = info.at(w);
          const bool before = chosen->departure_deadline_s < cand->departure_deadline_s ||
                              (chosen->departure_deadline_s == cand->departure_deadline_s &&
                               chosen->id <= cand->id);
          if (!before) {
            err << "EDF violated at t=" << e.t_s << ": " << chosen->id << " before " << cand->id;
            return err.str();
          }
        }
        waiting.erase(e.bus_id);
        active.insert(e.bus_id);
        const int n = static_cast<int>(active.size());
        if (n > d.charger_count || n > limit) return "too many concurrent sessions";
        if (d.site_power_cap_w && n * d.charger_power_w > *d.site_power_cap_w)
          return "site power cap exceeded";
        break;
      }
      case EventKind::finish: active.erase(e.bus_id); break;
      case EventKind::depart_unserved: waiting.erase(e.bus_id); break;
    }
    const bool instant_done = i + 1 == rep.events.size() || rep.events[i + 1].t_s > e.t_s;
    if (instant_done && !waiting.empty() && static_cast<int>(active.size()) < limit) {
      err << "idle charger while a bus waits at t=" << e.t_s;
      return err.str();
    }
  }
  for (const auto& o : rep.outcomes) {
    if (!(o.final_soc >= 0.0 && o.final_soc <= 1.0)) return "soc out of range for " + o.id;
    if (o.end_s > info.at(o.id)->departure_deadline_s + 1e-9) return "past deadline: " + o.id;
  }
  return {};
}

/// Conservation and per-motor caps for one allocation.
inline std::string split_invariants(const ebus::powertrain::PowerSplit& s, double demand_w,
                                    const ebus::powertrain::MotorPair& m)
{
  if (std::abs(s.front_mech_w + s.rear_mech_w + s.dropped_w - demand_w) >
      1e-9 * std::max(1.0, std::abs(demand_w)))
    return "allocation does not conserve demand";
  if (std::abs(s.front_mech_w) > m.front.rated_power_w) return "front over rating";
  if (std::abs(s.rear_mech_w) > m.rear.rated_power_w) return "rear over rating";
  return {};
}

/// net = traction + aux - regen, and the soc change matches the net draw.
inline std::string ledger_invariants(const ebus::sim::SimulationReport& r, double capacity_wh)
{
  const double scale = std::max(1.0, std::abs(r.net_energy_wh));
  const double ledger = r.energy_traction_wh + r.energy_aux_wh - r.energy_regenerated_wh;
  if (std::abs(r.net_energy_wh - ledger) > 1e-6 * scale) return "ledger does not close";
  const double soc_drop = (r.initial_soc - r.final_soc) * capacity_wh;
  if (std::abs(soc_drop - r.net_energy_wh) > 1e-6 * scale) return "soc change disagrees with ledger";
  for (const auto& row : r.trace)
    if (!(row.soc >= 0.0 && row.soc <= 1.0)) return "soc left [0, 1]";
  return {};
}

}  // namespace props
