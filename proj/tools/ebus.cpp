// ebus: sizing, drive-cycle simulation, charging and depot scheduling for
// battery-electric city buses.
//
// Exit codes: 0 success, 1 domain failure (golden mismatch, infeasible depot
// schedule), 2 input error, 3 pack depleted mid-cycle.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ebus/charging.hpp"
#include "ebus/depot.hpp"
#include "ebus/io.hpp"
#include "ebus/simulator.hpp"
#include "ebus/sizing.hpp"

namespace fs = std::filesystem;
using ebus::io::json;

namespace {

enum Exit { kOk = 0, kDomainFailure = 1, kInputError = 2, kDepleted = 3 };

struct Common
{
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
};

class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

ebus::io::Scenario load_scenario(const Common& c)
{
  json doc = json::object();
  if (!c.config_path.empty()) doc = read_json_file(c.config_path);
  for (const auto& o : c.overrides) ebus::io::apply_override(doc, o);
  return ebus::io::scenario_from_json(doc);
}

fs::path output_dir(const Common& c)
{
  fs::path dir = ".";
  if (!c.output_dir.empty()) dir = c.output_dir;
  else if (const char* env = std::getenv("EBUS_OUTPUT_DIR"); env && *env) dir = env;
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text)
{
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

// Timestamps live here so the report files themselves are reproducible.
void write_metadata(const fs::path& dir, const std::string& command, const Common& c)
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_json(dir / "run_metadata.json", {{"command", command},
                                         {"config", c.config_path},
                                         {"overrides", c.overrides},
                                         {"generated_at", stamp}});
}

int cmd_size(const Common& c)
{
  const auto sc = load_scenario(c);
  auto goldens = ebus::sizing::reference_goldens();
  for (const auto& [k, g] : sc.golden_overrides) goldens[k] = g;
  const auto rep = ebus::sizing::sizing_report(sc.vehicle, sc.motors, sc.pack, sc.converter, goldens);

  const auto dir = output_dir(c);
  write_json(dir / "sizing_report.json", ebus::io::to_json(rep));
  std::ostringstream table;
  ebus::io::write_sizing_table(table, rep);
  write_text(dir / "sizing_report.txt", table.str());
  write_metadata(dir, "size", c);
  std::cout << table.str();
  if (!rep.all_pass()) {
    std::cerr << "ebus: sizing golden mismatch\n";
    return kDomainFailure;
  }
  return kOk;
}

struct SimJob
{
  ebus::sim::DriveCycle cycle;
  fs::path dir;
};

int run_sim_job(const SimJob& job, const ebus::io::Scenario& sc)
{
  const auto rep = ebus::sim::run(job.cycle, sc.vehicle, sc.motors, sc.pack, sc.converter, sc.policy,
                                  sc.simulation);
  fs::create_directories(job.dir);
  write_json(job.dir / "simulation_report.json", ebus::io::to_json(rep));
  std::ostringstream trace, power, soc;
  ebus::io::write_trace_csv(trace, rep);
  power << "# t_s battery_power_kw\n";
  soc << "# t_s soc\n";
  for (const auto& t : rep.trace) {
    power << ebus::io::num(t.t_s) << ' ' << ebus::io::num(t.battery_power_w / 1000.0) << '\n';
    soc << ebus::io::num(t.t_s) << ' ' << ebus::io::num(t.soc) << '\n';
  }
  write_text(job.dir / "trace.csv", trace.str());
  write_text(job.dir / "power.dat", power.str());
  write_text(job.dir / "soc.dat", soc.str());

  std::ostringstream msg;
  for (const auto& w : rep.warnings) msg << "ebus: warning: " << job.cycle.name << ": " << w << '\n';
  std::cerr << msg.str();
  std::ostringstream out;
  out << job.cycle.name << ": " << ebus::io::num(rep.distance_km) << " km, "
      << ebus::io::num(rep.energy_per_km_wh) << " Wh/km, projected range "
      << ebus::io::num(rep.projected_range_km) << " km, target "
      << (rep.range_target_met ? "met" : "NOT met") << '\n';
  std::cout << out.str();
  if (rep.depleted) {
    std::cerr << "ebus: pack depleted at t = " << *rep.depleted_at_s << " s\n";
    return kDepleted;
  }
  return kOk;
}

int cmd_simulate(const Common& c, const std::vector<std::string>& cycle_paths,
                 const std::string& scenario, int jobs)
{
  const auto sc = load_scenario(c);
  const auto dir = output_dir(c);

  std::vector<SimJob> work;
  for (const auto& p : cycle_paths) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot open " + p);
    try {
      work.push_back({ebus::io::read_cycle_csv(in, fs::path(p).stem().string()), dir});
    } catch (const ebus::io::ParseError& e) {
      throw InputError(p + ": " + e.what());
    }
  }
  if (work.empty()) {
    if (scenario != "city") throw InputError("unknown scenario '" + scenario + "'");
    work.push_back({ebus::sim::make_city_cycle(sc.city_cycle), dir});
  }
  if (work.size() > 1)
    for (auto& w : work) w.dir = dir / w.cycle.name;

  int rc = kOk;
  for (std::size_t i = 0; i < work.size(); i += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<int>> batch;
    for (std::size_t k = i; k < std::min(work.size(), i + static_cast<std::size_t>(jobs)); ++k)
      batch.push_back(std::async(std::launch::async, [&, k] { return run_sim_job(work[k], sc); }));
    for (auto& f : batch) rc = std::max(rc, f.get());
  }
  write_metadata(dir, "simulate", c);
  return rc;
}

int cmd_charge(const Common& c, double from, double to, std::optional<double> crate,
               std::optional<double> charger_power, double dt)
{
  const auto sc = load_scenario(c);
  auto profile = sc.charging;
  if (crate) profile.cc_c_rate = *crate;
  if (charger_power) profile.charger_power_cap_w = *charger_power;
  ebus::charging::validate_profile(profile);

  const auto session = ebus::charging::charge(sc.pack, profile, from, to, dt);
  auto doc = ebus::io::to_json(session);
  doc["analytic_time_s"] = ebus::charging::time_to_soc(sc.pack, profile, from, to);
  doc["dt_s"] = dt;

  // a 200 kW charger quoted as giving a full charge in about 20 minutes
  const auto claim =
      ebus::charging::check_full_charge_claim(sc.pack, sc.charging, sc.depot.charger_power_w, 1200.0);
  doc["full_charge_check"] = {{"charger_power_w", claim.charger_power_w},
                              {"claimed_time_s", claim.claimed_time_s},
                              {"computed_time_s", claim.computed_time_s},
                              {"energy_in_claimed_time_wh", claim.energy_in_claimed_time_wh},
                              {"capacity_wh", claim.capacity_wh},
                              {"consistent", claim.consistent}};

  const auto dir = output_dir(c);
  write_json(dir / "charge_session.json", doc);
  std::ostringstream trace;
  ebus::io::write_charge_trace_csv(trace, session);
  write_text(dir / "charge_trace.csv", trace.str());
  write_metadata(dir, "charge", c);

  std::cout << "charged " << from << " -> " << to << " in " << ebus::io::num(session.elapsed_s)
            << " s (" << ebus::io::num(session.energy_delivered_wh / 1000.0) << " kWh)\n";
  if (!claim.consistent)
    std::cout << "note: " << claim.charger_power_w / 1000.0 << " kW for "
              << claim.claimed_time_s / 60.0 << " min delivers "
              << ebus::io::num(claim.energy_in_claimed_time_wh / 1000.0) << " kWh of "
              << claim.capacity_wh / 1000.0 << " kWh; a full charge takes "
              << ebus::io::num(claim.computed_time_s) << " s\n";
  return kOk;
}

int cmd_depot(const Common& c, const std::string& fleet_path)
{
  const auto sc = load_scenario(c);
  const auto scenario = ebus::io::fleet_from_json(read_json_file(fleet_path), sc);
  const auto rep = ebus::depot::schedule(scenario.fleet, scenario.depot, scenario.profile);

  const auto dir = output_dir(c);
  write_json(dir / "depot_report.json", ebus::io::to_json(rep));
  std::ostringstream events;
  ebus::io::write_depot_events_csv(events, rep);
  write_text(dir / "depot_events.csv", events.str());
  write_metadata(dir, "depot", c);

  for (const auto& o : rep.outcomes)
    std::cout << o.id << ": wait " << ebus::io::num(o.wait_s) << " s, done "
              << ebus::io::num(o.end_s) << " s, soc " << ebus::io::num(o.final_soc) << '\n';
  std::cout << "utilization " << ebus::io::num(rep.utilization) << ", "
            << (rep.feasible ? "feasible" : "INFEASIBLE") << '\n';
  return rep.feasible ? kOk : kDomainFailure;
}

void add_common(CLI::App* sub, Common& c)
{
  sub->add_option("-c,--config", c.config_path, "Config JSON (defaults used when omitted)");
  sub->add_option("--set", c.overrides, "Override, e.g. vehicle.sim_mass_kg=28000")->take_all();
  sub->add_option("-o,--output-dir", c.output_dir, "Output directory (else $EBUS_OUTPUT_DIR, else .)");
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Electric bus sizing, simulation and charging toolkit"};
  app.require_subcommand(1);

  Common common;
  auto* size = app.add_subcommand("size", "Motor, pack and converter sizing with golden checks");
  add_common(size, common);

  auto* simulate = app.add_subcommand("simulate", "Run drive cycles through the powertrain model");
  add_common(simulate, common);
  std::vector<std::string> cycles;
  std::string scenario = "city";
  int jobs = 1;
  simulate->add_option("--cycle", cycles, "Drive cycle CSV (t_s,v_ms[,grade_deg]); repeatable");
  simulate->add_option("--scenario", scenario, "Built-in cycle when no --cycle is given")
      ->check(CLI::IsMember({"city"}));
  simulate->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  auto* charge = app.add_subcommand("charge", "Step a charging session");
  add_common(charge, common);
  double from = 0.0;
  double to = 1.0;
  double dt = 1.0;
  std::optional<double> crate;
  std::optional<double> charger_power;
  charge->add_option("--from", from, "Start soc")->check(CLI::Range(0.0, 1.0));
  charge->add_option("--to", to, "Target soc");
  charge->add_option("--crate", crate, "Constant-current C-rate");
  charge->add_option("--charger-power", charger_power, "Charger power cap in W");
  charge->add_option("--dt", dt, "Step in seconds")->check(CLI::PositiveNumber);

  auto* depot = app.add_subcommand("depot", "Schedule overnight depot charging");
  add_common(depot, common);
  std::string fleet_path;
  depot->add_option("--fleet", fleet_path, "Fleet JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*size) return cmd_size(common);
    if (*simulate) return cmd_simulate(common, cycles, scenario, jobs);
    if (*charge) return cmd_charge(common, from, to, crate, charger_power, dt);
    if (*depot) return cmd_depot(common, fleet_path);
  } catch (const InputError& e) {
    std::cerr << "ebus: " << e.what() << '\n';
    return kInputError;
  } catch (const ebus::Error& e) {
    std::cerr << "ebus: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ebus: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
