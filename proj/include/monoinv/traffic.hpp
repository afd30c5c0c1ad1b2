#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoinv/system.hpp"

namespace monoinv {

enum class Direction { NS, EW };

const char* to_string(Direction d) noexcept;
Direction parse_direction(const std::string& s);

struct Link {
  int id = 0;
  Direction dir = Direction::EW;
  std::string head;                ///< junction whose light serves this link
  std::optional<std::string> tail;  ///< empty for entry links
  double saturation_flow = 0.0;     ///< c, vehicles per step
  double safe_bound = 0.0;          ///< x^s, vehicles
  double disturbance_bound = 0.0;   ///< w*, vehicles per step
  bool entry = false;
};

struct Turn {
  int from = 0;
  int to = 0;
  double ratio = 0.0;  ///< fraction of the from-link outflow entering the to-link
};

/// Signalized network in its cooperative regime: z = min(x, c) on green, 0 on
/// red, and x+ = x - z + w + sum_k beta_kl z_k.
///
/// State coordinate i is links()[i]. Junctions are kept sorted; a control
/// index encodes one phase per junction, bit j set meaning junction j shows NS.
class TrafficNetwork final : public MonotoneSystem {
public:
  TrafficNetwork(std::vector<Link> links, std::vector<std::string> junctions, std::vector<Turn> turns);

  std::size_t state_dim() const override { return links_.size(); }
  const NonNegVector& disturbance_bound() const override { return w_star_; }
  std::size_t control_count() const override { return std::size_t{1} << junctions_.size(); }
  std::string control_label(Control u) const override;
  NonNegVector step(const NonNegVector& x, const NonNegVector& w, Control u) const override;

  const std::vector<Link>& links() const noexcept { return links_; }
  const std::vector<std::string>& junctions() const noexcept { return junctions_; }
  const std::vector<Turn>& turns() const noexcept { return turns_; }

  std::size_t link_index(int id) const;
  std::size_t junction_index(const std::string& name) const;
  std::size_t head_junction_index(std::size_t link) const { return head_junction_[link]; }

  Direction phase(Control u, std::size_t junction) const;
  bool is_green(Control u, std::size_t link) const;
  Control control_from_phases(const std::vector<Direction>& phases) const;

  /// Rectangle {x : x_l <= x^s_l}.
  PolyLowerSet safe_set() const;
  NonNegVector safe_bounds() const;

private:
  std::vector<Link> links_;
  std::vector<std::string> junctions_;
  std::vector<Turn> turns_;
  std::vector<std::size_t> head_junction_;
  NonNegVector w_star_;
  /// incoming_[l] = (upstream link index, ratio)
  std::vector<std::vector<std::pair<std::size_t, double>>> incoming_;
};

/// min(x_l, c_l) if the head junction's phase matches dir(l), else 0.
double outflow(const TrafficNetwork& net, const NonNegVector& x, Control u, std::size_t link);

NonNegVector step_traffic(const TrafficNetwork& net, const NonNegVector& x, const NonNegVector& w, Control u);

/// Supply data for one movement l -> k used by the cooperative-region check.
struct SupplyMovement {
  int from = 0;             ///< upstream link l
  int to = 0;               ///< downstream link k
  double capacity_ratio = 0.0;  ///< alpha_lk
};

struct CooperativeBound {
  int link = 0;
  bool ok = true;
  double limit = 0.0;  ///< x^cap - max (alpha/beta) c over movements into the link
};

/// For each link l in `capacities` (link id -> x^cap), checks
/// x^s_l <= x^cap_l - max (alpha/beta) c_k over supplied upstream movements k -> l,
/// i.e. that supply never binds inside the safe set. Links without upstream
/// movements pass vacuously. Throws if a movement has no positive turn ratio.
std::vector<CooperativeBound> cooperative_bound_check(const TrafficNetwork& net, const std::map<int, double>& capacities,
                                                      const std::vector<SupplyMovement>& movements);

}  // namespace monoinv
