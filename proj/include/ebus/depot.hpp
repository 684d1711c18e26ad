#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ebus/battery.hpp"
#include "ebus/charging.hpp"
#include "ebus/errors.hpp"

namespace ebus::depot {

struct BusState
{
  std::string id;
  double arrival_s = 0.0;
  double arrival_soc = 0.0;
  double departure_deadline_s = 0.0;
  battery::BatteryPack pack;
};

enum class PriorityRule { earliest_deadline_first };

struct DepotConfig
{
  int charger_count = 1;
  double charger_power_w = 200'000.0;
  std::optional<double> site_power_cap_w;
  PriorityRule priority = PriorityRule::earliest_deadline_first;

  bool operator==(const DepotConfig&) const = default;
};

enum class EventKind { arrive, start, finish, depart_unserved };

inline const char* to_string(EventKind k)
{
  switch (k) {
    case EventKind::arrive: return "arrive";
    case EventKind::start: return "start";
    case EventKind::finish: return "finish";
    case EventKind::depart_unserved: return "depart_unserved";
  }
  return "?";
}

struct DepotEvent
{
  double t_s = 0.0;
  EventKind kind = EventKind::arrive;
  std::string bus_id;
  int charger = -1;
  double soc = 0.0;
};

struct BusOutcome
{
  std::string id;
  std::optional<double> start_s;
  double end_s = 0.0;
  double final_soc = 0.0;
  double wait_s = 0.0;
  bool charged_full = false;
};

struct DepotReport
{
  std::vector<BusOutcome> outcomes;  // same order as the input fleet
  std::vector<DepotEvent> events;
  double utilization = 0.0;
  double horizon_start_s = 0.0;
  double horizon_end_s = 0.0;
  int max_concurrent = 0;
  bool feasible = false;
};

inline constexpr double kFullSoc = 1.0 - 1e-9;

inline void validate_fleet(const std::vector<BusState>& fleet, const DepotConfig& depot)
{
  if (fleet.empty()) throw InvalidConfig("fleet", "must not be empty");
  for (const auto& b : fleet) {
    if (!(b.departure_deadline_s > b.arrival_s))
      throw InvalidConfig("departure_deadline_s", "must be after arrival for bus " + b.id);
    if (!(b.arrival_soc >= 0 && b.arrival_soc <= 1))
      throw InvalidConfig("arrival_soc", "must be in [0, 1] for bus " + b.id);
    battery::validate_pack(b.pack);
  }
  if (depot.charger_count < 1) throw InvalidConfig("charger_count", "must be >= 1");
  if (!(depot.charger_power_w > 0)) throw InvalidConfig("charger_power_w", "must be > 0");
  if (depot.site_power_cap_w && *depot.site_power_cap_w < depot.charger_power_w)
    throw InfeasibleConfig("site power cap is below a single charger's power");
}

/// Number of chargers that may run at once under the site power cap.
inline int max_concurrent_sessions(const DepotConfig& depot)
{
  if (!depot.site_power_cap_w) return depot.charger_count;
  const auto by_power =
      static_cast<int>(std::floor(*depot.site_power_cap_w / depot.charger_power_w + 1e-9));
  return std::min(depot.charger_count, by_power);
}

/// Event-driven overnight charging. Whenever a charger is free the waiting
/// bus with the earliest departure deadline plugs in (ties by id). Sessions
/// are never preempted: a bus keeps its charger until full or until its
/// deadline. Under a site power cap, surplus buses wait rather than sharing
/// power.
inline DepotReport schedule(const std::vector<BusState>& fleet, const DepotConfig& depot,
                            const charging::ChargeProfile& profile)
{
  validate_fleet(fleet, depot);
  charging::ChargeProfile prof = profile;
  prof.charger_power_cap_w = std::min(prof.charger_power_cap_w, depot.charger_power_w);
  charging::validate_profile(prof);

  DepotReport rep;
  rep.max_concurrent = max_concurrent_sessions(depot);
  rep.outcomes.resize(fleet.size());

  const std::size_t n = fleet.size();
  std::vector<std::size_t> by_arrival(n);
  for (std::size_t i = 0; i < n; ++i) by_arrival[i] = i;
  std::stable_sort(by_arrival.begin(), by_arrival.end(), [&](std::size_t a, std::size_t b) {
    if (fleet[a].arrival_s != fleet[b].arrival_s) return fleet[a].arrival_s < fleet[b].arrival_s;
    return fleet[a].id < fleet[b].id;
  });

  struct Active
  {
    std::size_t bus;
    int charger;
    double end_s;
    double end_soc;
  };
  std::vector<Active> active;
  std::vector<std::size_t> waiting;
  std::vector<bool> charger_busy(static_cast<std::size_t>(depot.charger_count), false);
  std::size_t next_arrival = 0;
  double busy_time = 0.0;
  constexpr double inf = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n; ++i) {
    rep.outcomes[i].id = fleet[i].id;
    rep.outcomes[i].final_soc = fleet[i].arrival_soc;
  }
  rep.horizon_start_s = fleet[by_arrival.front()].arrival_s;
  rep.horizon_end_s = rep.horizon_start_s;

  while (next_arrival < n || !active.empty() || !waiting.empty()) {
    double t = inf;
    if (next_arrival < n) t = std::min(t, fleet[by_arrival[next_arrival]].arrival_s);
    for (const auto& a : active) t = std::min(t, a.end_s);
    for (auto w : waiting) t = std::min(t, fleet[w].departure_deadline_s);

    // sessions ending now release their chargers first
    std::sort(active.begin(), active.end(), [&](const Active& a, const Active& b) {
      if (a.end_s != b.end_s) return a.end_s < b.end_s;
      return fleet[a.bus].id < fleet[b.bus].id;
    });
    while (!active.empty() && active.front().end_s <= t) {
      const auto a = active.front();
      active.erase(active.begin());
      charger_busy[static_cast<std::size_t>(a.charger)] = false;
      auto& out = rep.outcomes[a.bus];
      out.end_s = a.end_s;
      out.final_soc = a.end_soc;
      out.charged_full = a.end_soc >= kFullSoc;
      rep.events.push_back({a.end_s, EventKind::finish, fleet[a.bus].id, a.charger, a.end_soc});
    }

    while (next_arrival < n && fleet[by_arrival[next_arrival]].arrival_s <= t) {
      const auto i = by_arrival[next_arrival++];
      const auto& bus = fleet[i];
      rep.events.push_back({bus.arrival_s, EventKind::arrive, bus.id, -1, bus.arrival_soc});
      if (bus.arrival_soc >= kFullSoc) {
        rep.outcomes[i].charged_full = true;
        rep.outcomes[i].end_s = bus.arrival_s;
      } else {
        waiting.push_back(i);
      }
    }

    std::erase_if(waiting, [&](std::size_t w) {
      if (fleet[w].departure_deadline_s > t) return false;
      auto& out = rep.outcomes[w];
      out.end_s = fleet[w].departure_deadline_s;
      out.wait_s = out.end_s - fleet[w].arrival_s;
      rep.events.push_back({out.end_s, EventKind::depart_unserved, fleet[w].id, -1, out.final_soc});
      return true;
    });

    while (!waiting.empty() && static_cast<int>(active.size()) < rep.max_concurrent) {
      auto pick = std::min_element(waiting.begin(), waiting.end(), [&](std::size_t a, std::size_t b) {
        if (fleet[a].departure_deadline_s != fleet[b].departure_deadline_s)
          return fleet[a].departure_deadline_s < fleet[b].departure_deadline_s;
        return fleet[a].id < fleet[b].id;
      });
      const auto i = *pick;
      waiting.erase(pick);
      const auto& bus = fleet[i];
      const int charger = static_cast<int>(
          std::find(charger_busy.begin(), charger_busy.end(), false) - charger_busy.begin());
      charger_busy[static_cast<std::size_t>(charger)] = true;

      battery::BatteryPack pack = bus.pack;
      pack.soc = bus.arrival_soc;
      const double to_full = charging::time_to_full(pack, prof, bus.arrival_soc);
      const double window = bus.departure_deadline_s - t;
      Active a{i, charger, 0.0, 1.0};
      if (to_full <= window) {
        a.end_s = t + to_full;
      } else {
        a.end_s = bus.departure_deadline_s;
        a.end_soc = charging::soc_after(pack, prof, bus.arrival_soc, window);
      }
      busy_time += a.end_s - t;
      active.push_back(a);

      auto& out = rep.outcomes[i];
      out.start_s = t;
      out.wait_s = t - bus.arrival_s;
      rep.events.push_back({t, EventKind::start, bus.id, charger, bus.arrival_soc});
    }
  }

  for (const auto& e : rep.events) rep.horizon_end_s = std::max(rep.horizon_end_s, e.t_s);
  const double span = rep.horizon_end_s - rep.horizon_start_s;
  rep.utilization = span > 0 ? busy_time / (depot.charger_count * span) : 0.0;
  rep.feasible = std::all_of(rep.outcomes.begin(), rep.outcomes.end(),
                             [](const BusOutcome& o) { return o.charged_full; });
  return rep;
}

}  // namespace ebus::depot
