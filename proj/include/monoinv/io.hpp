#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "monoinv/encoder.hpp"
#include "monoinv/invariance.hpp"
#include "monoinv/simulate.hpp"
#include "monoinv/system.hpp"

namespace monoinv::io {

using nlohmann::json;

/// Malformed or inconsistent input files.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Which occurrence wins when a traffic spec lists the same turn twice.
enum class BetaResolution { First, Second };
BetaResolution parse_beta_resolution(const std::string& s);
const char* to_string(BetaResolution r) noexcept;

struct LoadedSystem {
  std::shared_ptr<const MonotoneSystem> system;
  PolyLowerSet safe_set;
  std::string type;  ///< "switched_affine" or "traffic_network"
  /// Canonical description of the dynamics after resolving duplicates.
  json resolved;
  /// FNV-1a 64 of resolved.dump(), as 16 hex digits.
  std::string hash;
  /// Traffic only: resolution applied and whether any duplicate turn existed.
  std::optional<BetaResolution> beta_resolution;
  bool had_duplicate_turns = false;
};

/// Switched system:
///   {"type": "switched_affine", "modes": [{"label": "1", "A": [[...]]}, ...],
///    "w_star": [...], "safe_set": {"A": [[...]], "b": [...]}}
/// Traffic network:
///   {"type": "traffic_network", "junctions": [...],
///    "links": [{"id", "dir", "head", "tail" (null for entry links), "c", "x_s", "w_star"}],
///    "turns": [{"from", "to", "beta"}], "beta_resolution": "first" | "second"}
/// `resolution` overrides the file's beta_resolution.
LoadedSystem parse_system(const json& spec, std::optional<BetaResolution> resolution = std::nullopt);
LoadedSystem load_system(const std::filesystem::path& path, std::optional<BetaResolution> resolution = std::nullopt);

/// {"A": [[...]], "b": [...]} or {"bounds": [...]}.
PolyLowerSet parse_safe_set(const json& spec);
PolyLowerSet load_safe_set(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);

std::string fnv1a_hex(const std::string& bytes);

/// Control as written in certificates: the mode label (as a number when it
/// is one) for switched systems, the list of junction phases for traffic.
json control_to_json(const MonotoneSystem& sys, Control u);
Control control_from_json(const MonotoneSystem& sys, const json& j);

json certificate_to_json(const MonotoneSystem& sys, const SSequenceCertificate& cert, const std::string& hash);
/// Reads a certificate; the stored system hash is returned through `hash` when given.
SSequenceCertificate certificate_from_json(const MonotoneSystem& sys, const json& j, std::string* hash = nullptr);

json report_to_json(const CertificateReport& rep);
json search_to_json(const MonotoneSystem& sys, const SearchResult& result);
json cycle_to_json(const LimitCycle& cycle);

/// Header: step,phase,x_1..x_n,u,safe,in_omega,in_gamma. Unmonitored flags
/// and the control after the last state are left empty.
void write_trajectory_csv(std::ostream& out, const MonotoneSystem& sys, const Trajectory& traj);
/// Header: phase,x_1..x_n.
void write_limit_cycle_csv(std::ostream& out, const LimitCycle& cycle);

}  // namespace monoinv::io
