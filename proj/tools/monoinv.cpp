// Command-line front end: find, verify and simulate s-sequence certificates.
//
// Exit codes: 0 success, 1 input error, 2 negative result, 3 inconclusive.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "monoinv/invariance.hpp"
#include "monoinv/io.hpp"
#include "monoinv/simulate.hpp"

namespace fs = std::filesystem;
using namespace monoinv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNegative = 2;
constexpr int kExitInconclusive = 3;

struct Config {
  std::string system;
  std::string safe_set;
  std::string cert;
  std::string out = "out";
  std::string objective = "max-l1";
  std::string beta_resolution;
  std::string x0;
  std::string adversary = "worst";
  std::string policy = "open-loop";
  std::size_t tmin = 1;
  std::size_t tmax = 10;
  double time_budget = 1800.0;
  std::size_t node_budget = std::numeric_limits<std::size_t>::max();
  std::uint64_t seed = 0;
  std::size_t steps = 200;
  double tol = kDecodeTol;
  bool dump_lp = false;
};

io::LoadedSystem load(const Config& cfg) {
  std::optional<io::BetaResolution> res;
  if (!cfg.beta_resolution.empty()) res = io::parse_beta_resolution(cfg.beta_resolution);
  auto loaded = io::load_system(cfg.system, res);
  if (!cfg.safe_set.empty()) loaded.safe_set = io::load_safe_set(cfg.safe_set);
  if (loaded.safe_set.dim() != loaded.system->state_dim()) {
    throw io::InputError("safe set dimension does not match the system");
  }
  return loaded;
}

SSequenceCertificate load_cert(const Config& cfg, const io::LoadedSystem& loaded) {
  std::string hash;
  auto cert = io::certificate_from_json(*loaded.system, io::read_json(cfg.cert), &hash);
  if (!hash.empty() && hash != loaded.hash) {
    throw io::InputError("certificate system_hash " + hash + " does not match the system (" + loaded.hash + ")");
  }
  return cert;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw io::InputError("cannot write " + path.string());
  out << content;
}

int cmd_find(const Config& cfg) {
  const auto loaded = load(cfg);
  SearchOptions opts;
  opts.t_min = cfg.tmin;
  opts.t_max = cfg.tmax;
  opts.objective = cfg.objective == "max-l1" ? Objective::MaxL1X0 : Objective::Feasibility;
  opts.time_budget_seconds = cfg.time_budget;
  opts.node_budget = cfg.node_budget;
  if (opts.t_min > opts.t_max) throw io::InputError("--tmin exceeds --tmax");

  const auto result = find_s_sequence(*loaded.system, loaded.safe_set, opts);
  const fs::path out(cfg.out);
  auto summary = io::search_to_json(*loaded.system, result);
  summary["system_hash"] = loaded.hash;
  if (loaded.beta_resolution) summary["beta_resolution"] = io::to_string(*loaded.beta_resolution);
  write_file(out / "summary.json", summary.dump(2) + "\n");
  if (cfg.dump_lp && result.last_model) {
    std::ostringstream lp;
    result.last_model->write_lp(lp);
    write_file(out / ("model_T" + std::to_string(result.horizons.back().T) + ".lp"), lp.str());
  }

  for (const auto& h : result.horizons) {
    std::cout << "T=" << h.T << ": " << to_string(h.status) << " (" << milp::to_string(h.solver_status) << ", "
              << h.nodes << " nodes, " << h.seconds << " s)\n";
  }
  if (result.certificate) {
    const auto& cert = *result.certificate;
    write_file(out / "certificate.json", io::certificate_to_json(*loaded.system, cert, loaded.hash).dump(2) + "\n");
    const auto rcis = build_rcis(cert);
    io::json boxes = io::json::array();
    for (std::size_t p = 0; p < rcis.region.size(); ++p) {
      const auto corner = rcis.region.boxes()[p].corner().entries();
      boxes.push_back({{"corner", std::vector<double>(corner.begin(), corner.end())},
                       {"control", io::control_to_json(*loaded.system, rcis.policy[p])}});
    }
    write_file(out / "rcis.json", io::json{{"boxes", boxes}}.dump(2) + "\n");
    std::cout << "certificate found at T=" << cert.T << (result.minimal ? " (minimal)" : " (minimality not proven)")
              << "\ncontrols:";
    for (Control u : cert.controls) std::cout << ' ' << loaded.system->control_label(u);
    std::cout << "\nwritten to " << out.string() << "\n";
    return kExitOk;
  }
  bool all_proven = true;
  for (const auto& h : result.horizons) all_proven = all_proven && h.status == HorizonStatus::ProvenInfeasible;
  std::cout << (all_proven ? "no s-sequence up to T=" : "inconclusive up to T=") << cfg.tmax << "\n";
  return all_proven ? kExitNegative : kExitInconclusive;
}

int cmd_verify(const Config& cfg) {
  const auto loaded = load(cfg);
  const auto cert = load_cert(cfg, loaded);
  const auto rep = verify_certificate(*loaded.system, loaded.safe_set, cert, cfg.tol);
  auto j = io::report_to_json(rep);
  j["tolerance"] = cfg.tol;
  j["system_hash"] = loaded.hash;
  if (loaded.beta_resolution) j["beta_resolution"] = io::to_string(*loaded.beta_resolution);
  std::cout << j.dump(2) << "\n";
  return rep.pass() ? kExitOk : kExitNegative;
}

NonNegVector parse_csv_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::InputError("--x0: cannot parse '" + item + "'");
    }
  }
  try {
    return NonNegVector(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string("--x0: ") + e.what());
  }
}

int cmd_simulate(const Config& cfg) {
  const auto loaded = load(cfg);
  const auto& sys = *loaded.system;
  const auto cert = load_cert(cfg, loaded);
  const NonNegVector x0 = cfg.x0.empty() ? cert.x_star[0] : parse_csv_vector(cfg.x0);
  if (x0.dim() != sys.state_dim()) throw io::InputError("--x0 has the wrong dimension");

  const auto rcis = build_rcis(cert);
  Monitors mon;
  mon.safe = loaded.safe_set;
  mon.omega = rcis.region;
  std::optional<LimitCycle> cycle;
  try {
    cycle = compute_limit_cycle(sys, cert);
    mon.cycle = cycle;
  } catch (const LimitCycleError& e) {
    std::cerr << "warning: " << e.what() << "; Γ membership not recorded\n";
  }

  const Policy policy = cfg.policy == "feedback" ? Policy(FeedbackPolicy{rcis}) : Policy(OpenLoopPolicy{cert});
  const Adversary adv = cfg.adversary == "uniform" ? Adversary::uniform(cfg.seed) : Adversary::worst_case();
  const auto traj = simulate(sys, x0, policy, adv, cfg.steps, mon);
  if (traj.guarantee_void) {
    std::cerr << "warning: x0 is not below x*_0; the invariance guarantee does not apply to this run\n";
  }

  const fs::path out(cfg.out);
  std::ostringstream csv;
  io::write_trajectory_csv(csv, sys, traj);
  write_file(out / "trajectory.csv", csv.str());
  if (cycle) {
    std::ostringstream cyc;
    io::write_limit_cycle_csv(cyc, *cycle);
    write_file(out / "limit_cycle.csv", cyc.str());
  }

  std::size_t unsafe = 0;
  for (const auto& f : traj.in_safe) unsafe += f && !*f;
  std::cout << "steps simulated: " << traj.controls.size() << ", unsafe states: " << unsafe
            << (traj.status == TrajectoryStatus::LeftRegion ? ", stopped: state left the invariant set" : "")
            << "\nwritten to " << out.string() << "\n";
  return unsafe == 0 && traj.status == TrajectoryStatus::Completed ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and verification of s-sequence invariance certificates for monotone systems"};
  app.require_subcommand(1);
  Config cfg;

  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", cfg.system, "System spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--safe-set", cfg.safe_set, "Safe set JSON overriding the system's")->check(CLI::ExistingFile);
    sub->add_option("--beta-resolution", cfg.beta_resolution, "Which duplicate turn ratio to keep")
        ->check(CLI::IsMember({"first", "second"}));
  };

  auto* find = app.add_subcommand("find", "Search for an s-sequence, T = tmin..tmax");
  add_system(find);
  find->add_option("--tmin", cfg.tmin, "First horizon")->check(CLI::PositiveNumber);
  find->add_option("--tmax", cfg.tmax, "Last horizon")->check(CLI::PositiveNumber);
  find->add_option("--objective", cfg.objective)->check(CLI::IsMember({"max-l1", "first-feasible"}));
  find->add_option("--time-budget", cfg.time_budget, "Seconds for the whole sweep")->check(CLI::PositiveNumber);
  find->add_option("--node-budget", cfg.node_budget, "Branch-and-bound nodes per horizon")
      ->check(CLI::PositiveNumber);
  find->add_option("--out", cfg.out, "Output directory");
  find->add_flag("--dump-lp", cfg.dump_lp, "Write the last MILP in LP format");

  auto* verify = app.add_subcommand("verify", "Check a certificate by re-simulation");
  add_system(verify);
  verify->add_option("--cert", cfg.cert, "Certificate JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--tol", cfg.tol, "Residual tolerance")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Simulate the certified policy and export plot data");
  add_system(sim);
  sim->add_option("--cert", cfg.cert, "Certificate JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--x0", cfg.x0, "Initial state, comma separated (default x*_0)");
  sim->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);
  sim->add_option("--seed", cfg.seed, "Seed for the uniform adversary");
  sim->add_option("--adversary", cfg.adversary)->check(CLI::IsMember({"worst", "uniform"}));
  sim->add_option("--policy", cfg.policy)->check(CLI::IsMember({"open-loop", "feedback"}));
  sim->add_option("--out", cfg.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*find) return cmd_find(cfg);
    if (*verify) return cmd_verify(cfg);
    return cmd_simulate(cfg);
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInconclusive;
  }
}
