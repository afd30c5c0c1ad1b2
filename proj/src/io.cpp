#include "monoinv/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "monoinv/switched_affine.hpp"
#include "monoinv/traffic.hpp"

namespace monoinv::io {

namespace {

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  if (cols == 0) throw InputError(std::string(what) + ": empty row");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(std::string(what) + ": ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

std::vector<double> vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a non-empty array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

LoadedSystem parse_switched(const json& spec) {
  const auto& modes_json = spec.at("modes");
  if (!modes_json.is_array() || modes_json.empty()) throw InputError("modes: expected a non-empty array");
  std::vector<SwitchedAffineSystem::Mode> modes;
  for (std::size_t m = 0; m < modes_json.size(); ++m) {
    const auto& mj = modes_json[m];
    SwitchedAffineSystem::Mode mode;
    if (mj.is_object()) {
      mode.label = mj.contains("label") ? (mj["label"].is_string() ? mj["label"].get<std::string>()
                                                                    : mj["label"].dump())
                                        : std::to_string(m + 1);
      mode.A = matrix_from_json(mj.at("A"), "modes[].A");
    } else {
      mode.label = std::to_string(m + 1);
      mode.A = matrix_from_json(mj, "modes[]");
    }
    modes.push_back(std::move(mode));
  }
  NonNegVector w_star(vector_from_json(spec.at("w_star"), "w_star"));

  LoadedSystem out{nullptr, PolyLowerSet::rectangle(NonNegVector::zeros(w_star.dim())), "switched_affine", {}, {}, {},
                   false};
  out.resolved = {{"type", "switched_affine"}, {"w_star", vector_to_json(w_star.entries())}};
  json modes_out = json::array();
  for (const auto& m : modes) modes_out.push_back({{"label", m.label}, {"A", matrix_to_json(m.A)}});
  out.resolved["modes"] = std::move(modes_out);
  auto sys = std::make_shared<SwitchedAffineSystem>(std::move(modes), std::move(w_star));
  if (!spec.contains("safe_set")) throw InputError("switched_affine spec needs a safe_set");
  out.safe_set = parse_safe_set(spec.at("safe_set"));
  if (out.safe_set.dim() != sys->state_dim()) throw InputError("safe_set dimension does not match the system");
  out.system = std::move(sys);
  return out;
}

LoadedSystem parse_traffic(const json& spec, std::optional<BetaResolution> resolution) {
  BetaResolution res = BetaResolution::First;
  if (resolution) res = *resolution;
  else if (spec.contains("beta_resolution")) res = parse_beta_resolution(spec["beta_resolution"].get<std::string>());

  std::vector<std::string> junctions = spec.at("junctions").get<std::vector<std::string>>();
  std::vector<Link> links;
  json links_out = json::array();
  for (const auto& lj : spec.at("links")) {
    Link l;
    l.id = lj.at("id").get<int>();
    l.dir = parse_direction(lj.at("dir").get<std::string>());
    l.head = lj.at("head").get<std::string>();
    if (lj.contains("tail") && !lj["tail"].is_null()) l.tail = lj["tail"].get<std::string>();
    l.entry = !l.tail.has_value();
    l.saturation_flow = lj.at("c").get<double>();
    l.safe_bound = lj.at("x_s").get<double>();
    l.disturbance_bound = lj.value("w_star", 0.0);
    links_out.push_back({{"id", l.id},
                         {"dir", to_string(l.dir)},
                         {"head", l.head},
                         {"tail", l.tail ? json(*l.tail) : json(nullptr)},
                         {"c", l.saturation_flow},
                         {"x_s", l.safe_bound},
                         {"w_star", l.disturbance_bound}});
    links.push_back(std::move(l));
  }

  // Group occurrences of each (from, to) pair and keep the requested one.
  std::vector<Turn> all;
  for (const auto& tj : spec.at("turns")) {
    all.push_back({tj.at("from").get<int>(), tj.at("to").get<int>(), tj.at("beta").get<double>()});
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> occurrences;
  for (std::size_t i = 0; i < all.size(); ++i) occurrences[{all[i].from, all[i].to}].push_back(i);
  bool duplicates = false;
  std::vector<Turn> turns;
  json turns_out = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& occ = occurrences[{all[i].from, all[i].to}];
    if (occ.size() > 2) {
      throw InputError("turn " + std::to_string(all[i].from) + "->" + std::to_string(all[i].to) +
                       " listed more than twice");
    }
    if (occ.size() == 2) duplicates = true;
    const std::size_t keep = occ.size() == 2 && res == BetaResolution::Second ? occ[1] : occ[0];
    if (keep != i) continue;
    turns.push_back(all[i]);
    turns_out.push_back({{"from", all[i].from}, {"to", all[i].to}, {"beta", all[i].ratio}});
  }

  auto net = std::make_shared<TrafficNetwork>(std::move(links), std::move(junctions), std::move(turns));
  LoadedSystem out{nullptr, net->safe_set(), "traffic_network", {}, {}, res, duplicates};
  out.resolved = {{"type", "traffic_network"},
                  {"junctions", net->junctions()},
                  {"links", std::move(links_out)},
                  {"turns", std::move(turns_out)}};
  out.system = std::move(net);
  return out;
}

}  // namespace

BetaResolution parse_beta_resolution(const std::string& s) {
  if (s == "first") return BetaResolution::First;
  if (s == "second") return BetaResolution::Second;
  throw InputError("beta_resolution must be 'first' or 'second', got '" + s + "'");
}

const char* to_string(BetaResolution r) noexcept { return r == BetaResolution::First ? "first" : "second"; }

LoadedSystem parse_system(const json& spec, std::optional<BetaResolution> resolution) {
  try {
    const std::string type = spec.at("type").get<std::string>();
    LoadedSystem out = [&] {
      if (type == "switched_affine") return parse_switched(spec);
      if (type == "traffic_network") return parse_traffic(spec, resolution);
      throw InputError("unknown system type '" + type + "'");
    }();
    out.hash = fnv1a_hex(out.resolved.dump());
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("system spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("system spec: ") + e.what());
  }
}

LoadedSystem load_system(const std::filesystem::path& path, std::optional<BetaResolution> resolution) {
  return parse_system(read_json(path), resolution);
}

PolyLowerSet parse_safe_set(const json& spec) {
  try {
    if (spec.contains("bounds")) return PolyLowerSet::rectangle(NonNegVector(vector_from_json(spec["bounds"], "bounds")));
    const Eigen::MatrixXd A = matrix_from_json(spec.at("A"), "safe_set.A");
    const auto b = vector_from_json(spec.at("b"), "safe_set.b");
    if (static_cast<Eigen::Index>(b.size()) != A.rows()) throw InputError("safe_set: A and b disagree in rows");
    return PolyLowerSet(A, Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
  } catch (const json::exception& e) {
    throw InputError(std::string("safe set: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("safe set: ") + e.what());
  }
}

PolyLowerSet load_safe_set(const std::filesystem::path& path) {
  const json j = read_json(path);
  return parse_safe_set(j.contains("safe_set") ? j["safe_set"] : j);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json control_to_json(const MonotoneSystem& sys, Control u) {
  if (const auto* net = dynamic_cast<const TrafficNetwork*>(&sys)) {
    json phases = json::array();
    for (std::size_t j = 0; j < net->junctions().size(); ++j) phases.push_back(to_string(net->phase(u, j)));
    return phases;
  }
  const std::string label = sys.control_label(u);
  if (!label.empty() && label.find_first_not_of("0123456789") == std::string::npos && label.size() < 10) {
    return std::stoi(label);
  }
  return label;
}

Control control_from_json(const MonotoneSystem& sys, const json& j) {
  if (const auto* net = dynamic_cast<const TrafficNetwork*>(&sys)) {
    if (!j.is_array()) throw InputError("traffic control must be an array of junction phases");
    std::vector<Direction> phases;
    for (const auto& p : j) phases.push_back(parse_direction(p.get<std::string>()));
    return net->control_from_phases(phases);
  }
  if (const auto* sw = dynamic_cast<const SwitchedAffineSystem*>(&sys)) {
    return sw->control_for_label(j.is_string() ? j.get<std::string>() : j.dump());
  }
  if (!j.is_number_unsigned()) throw InputError("control must be a control index");
  return j.get<Control>();
}

json certificate_to_json(const MonotoneSystem& sys, const SSequenceCertificate& cert, const std::string& hash) {
  json controls = json::array();
  for (Control u : cert.controls) controls.push_back(control_to_json(sys, u));
  json states = json::array();
  for (const auto& x : cert.x_star) states.push_back(vector_to_json(x.entries()));
  return {{"T", cert.T}, {"controls", std::move(controls)}, {"x_star", std::move(states)}, {"system_hash", hash}};
}

SSequenceCertificate certificate_from_json(const MonotoneSystem& sys, const json& j, std::string* hash) {
  try {
    SSequenceCertificate cert;
    cert.T = j.at("T").get<std::size_t>();
    for (const auto& u : j.at("controls")) cert.controls.push_back(control_from_json(sys, u));
    for (const auto& x : j.at("x_star")) cert.x_star.emplace_back(vector_from_json(x, "x_star[]"));
    if (cert.T == 0 || cert.controls.size() != cert.T) throw InputError("certificate: controls do not match T");
    if (cert.x_star.size() != 1 && cert.x_star.size() != cert.T + 1) {
      throw InputError("certificate: x_star needs 1 or T+1 states");
    }
    for (const auto& x : cert.x_star) {
      if (x.dim() != sys.state_dim()) throw InputError("certificate: state dimension does not match the system");
    }
    if (hash) *hash = j.value("system_hash", std::string());
    return cert;
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
}

json report_to_json(const CertificateReport& rep) {
  json states = json::array();
  for (const auto& x : rep.resimulated) states.push_back(vector_to_json(x.entries()));
  return {{"pass", rep.pass()},
          {"controls_ok", rep.controls_ok},
          {"witness_ok", rep.witness_ok},
          {"safe_ok", rep.safe_ok},
          {"closure_ok", rep.closure_ok},
          {"witness_residual", rep.witness_residual},
          {"safety_residual", rep.safety_residual},
          {"closure_residual", rep.closure_residual},
          {"first_violated_step", rep.first_violated_step ? json(*rep.first_violated_step) : json(nullptr)},
          {"resimulated", std::move(states)}};
}

json search_to_json(const MonotoneSystem& sys, const SearchResult& result) {
  json horizons = json::array();
  for (const auto& h : result.horizons) {
    horizons.push_back({{"T", h.T},
                        {"status", to_string(h.status)},
                        {"solver_status", milp::to_string(h.solver_status)},
                        {"nodes", h.nodes},
                        {"seconds", h.seconds},
                        {"time_allowance", h.time_allowance},
                        {"variables", h.variables},
                        {"constraints", h.constraints},
                        {"binaries", h.binaries}});
  }
  json out = {{"found", result.certificate.has_value()}, {"minimal", result.minimal}, {"horizons", horizons}};
  if (result.certificate) {
    out["T"] = result.certificate->T;
    json controls = json::array();
    for (Control u : result.certificate->controls) controls.push_back(control_to_json(sys, u));
    out["controls"] = std::move(controls);
  }
  return out;
}

json cycle_to_json(const LimitCycle& cycle) {
  json points = json::array();
  for (const auto& p : cycle.points) points.push_back(vector_to_json(p.entries()));
  return {{"points", std::move(points)},
          {"periods", cycle.periods},
          {"residual", cycle.residual},
          {"monotonicity_violations", cycle.monotonicity_violations}};
}

namespace {

void write_number(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out << buf;
}

void write_flag(std::ostream& out, const std::optional<bool>& f) {
  if (f) out << (*f ? '1' : '0');
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const MonotoneSystem& sys, const Trajectory& traj) {
  out << "step,phase";
  for (std::size_t i = 0; i < sys.state_dim(); ++i) out << ",x_" << i + 1;
  out << ",u,safe,in_omega,in_gamma\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k << ',' << traj.phases[k];
    for (double v : traj.states[k].entries()) {
      out << ',';
      write_number(out, v);
    }
    out << ',';
    if (k < traj.controls.size()) out << sys.control_label(traj.controls[k]);
    out << ',';
    write_flag(out, traj.in_safe[k]);
    out << ',';
    write_flag(out, traj.in_omega[k]);
    out << ',';
    write_flag(out, traj.in_gamma[k]);
    out << '\n';
  }
}

void write_limit_cycle_csv(std::ostream& out, const LimitCycle& cycle) {
  out << "phase";
  const std::size_t n = cycle.points.empty() ? 0 : cycle.points[0].dim();
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < cycle.points.size(); ++k) {
    out << k;
    for (double v : cycle.points[k].entries()) {
      out << ',';
      write_number(out, v);
    }
    out << '\n';
  }
}

}  // namespace monoinv::io
