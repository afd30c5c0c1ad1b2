#include "monoinv/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monoinv {

const char* to_string(Direction d) noexcept { return d == Direction::NS ? "NS" : "EW"; }

Direction parse_direction(const std::string& s) {
  if (s == "NS") return Direction::NS;
  if (s == "EW") return Direction::EW;
  throw std::invalid_argument("unknown direction '" + s + "' (expected NS or EW)");
}

namespace {

NonNegVector collect_w_star(const std::vector<Link>& links) {
  if (links.empty()) throw std::invalid_argument("TrafficNetwork: no links");
  std::vector<double> w;
  w.reserve(links.size());
  for (const auto& l : links) w.push_back(l.disturbance_bound);
  return NonNegVector(std::move(w));
}

}  // namespace

TrafficNetwork::TrafficNetwork(std::vector<Link> links, std::vector<std::string> junctions, std::vector<Turn> turns)
    : links_(std::move(links)),
      junctions_(std::move(junctions)),
      turns_(std::move(turns)),
      w_star_(collect_w_star(links_)) {
  std::sort(junctions_.begin(), junctions_.end());
  if (junctions_.empty()) throw std::invalid_argument("TrafficNetwork: no junctions");
  if (std::adjacent_find(junctions_.begin(), junctions_.end()) != junctions_.end()) {
    throw std::invalid_argument("TrafficNetwork: duplicate junction name");
  }
  if (junctions_.size() > 20) throw std::invalid_argument("TrafficNetwork: too many junctions for the control alphabet");

  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    for (std::size_t q = 0; q < i; ++q) {
      if (links_[q].id == l.id) throw std::invalid_argument("TrafficNetwork: duplicate link id " + std::to_string(l.id));
    }
    if (!(l.saturation_flow >= 0.0) || !(l.safe_bound >= 0.0) || !(l.disturbance_bound >= 0.0) ||
        !std::isfinite(l.saturation_flow) || !std::isfinite(l.safe_bound)) {
      throw std::invalid_argument("TrafficNetwork: link " + std::to_string(l.id) + " has a negative parameter");
    }
    if (l.entry && l.tail) {
      throw std::invalid_argument("TrafficNetwork: entry link " + std::to_string(l.id) + " has a tail junction");
    }
    head_junction_.push_back(junction_index(l.head));
    if (l.tail) junction_index(*l.tail);
  }

  incoming_.assign(links_.size(), {});
  std::vector<double> outgoing_sum(links_.size(), 0.0);
  for (const auto& t : turns_) {
    const auto from = link_index(t.from);
    const auto to = link_index(t.to);
    if (!(t.ratio >= 0.0 && t.ratio <= 1.0)) {
      throw std::invalid_argument("TrafficNetwork: turn ratio outside [0,1] for " + std::to_string(t.from) + "->" +
                                  std::to_string(t.to));
    }
    if (!links_[to].tail || *links_[to].tail != links_[from].head) {
      throw std::invalid_argument("TrafficNetwork: turn " + std::to_string(t.from) + "->" + std::to_string(t.to) +
                                  " does not connect the from-link head to the to-link tail");
    }
    for (const auto& [k, r] : incoming_[to]) {
      if (k == from) {
        throw std::invalid_argument("TrafficNetwork: duplicate turn " + std::to_string(t.from) + "->" +
                                    std::to_string(t.to));
      }
    }
    incoming_[to].emplace_back(from, t.ratio);
    outgoing_sum[from] += t.ratio;
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (outgoing_sum[i] > 1.0 + 1e-12) {
      throw std::invalid_argument("TrafficNetwork: turn ratios out of link " + std::to_string(links_[i].id) +
                                  " sum above 1");
    }
  }
}

std::size_t TrafficNetwork::link_index(int id) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].id == id) return i;
  }
  throw std::invalid_argument("TrafficNetwork: unknown link " + std::to_string(id));
}

std::size_t TrafficNetwork::junction_index(const std::string& name) const {
  auto it = std::lower_bound(junctions_.begin(), junctions_.end(), name);
  if (it == junctions_.end() || *it != name) throw std::invalid_argument("TrafficNetwork: unknown junction " + name);
  return static_cast<std::size_t>(it - junctions_.begin());
}

Direction TrafficNetwork::phase(Control u, std::size_t junction) const {
  return ((u >> junction) & 1U) ? Direction::NS : Direction::EW;
}

bool TrafficNetwork::is_green(Control u, std::size_t link) const {
  return phase(u, head_junction_[link]) == links_[link].dir;
}

Control TrafficNetwork::control_from_phases(const std::vector<Direction>& phases) const {
  if (phases.size() != junctions_.size()) throw std::invalid_argument("TrafficNetwork: phase tuple has wrong length");
  Control u = 0;
  for (std::size_t j = 0; j < phases.size(); ++j) {
    if (phases[j] == Direction::NS) u |= Control{1} << j;
  }
  return u;
}

std::string TrafficNetwork::control_label(Control u) const {
  if (u >= control_count()) throw std::invalid_argument("TrafficNetwork: unknown control " + std::to_string(u));
  std::string out;
  for (std::size_t j = 0; j < junctions_.size(); ++j) {
    if (j) out += '-';
    out += to_string(phase(u, j));
  }
  return out;
}

NonNegVector TrafficNetwork::step(const NonNegVector& x, const NonNegVector& w, Control u) const {
  if (u >= control_count()) throw std::invalid_argument("TrafficNetwork: unknown control " + std::to_string(u));
  if (x.dim() != state_dim() || w.dim() != state_dim()) throw std::invalid_argument("TrafficNetwork: dimension mismatch");
  if (!leq(w, w_star_)) throw std::invalid_argument("TrafficNetwork: disturbance exceeds w*");

  std::vector<double> z(links_.size());
  for (std::size_t l = 0; l < links_.size(); ++l) z[l] = is_green(u, l) ? std::min(x[l], links_[l].saturation_flow) : 0.0;

  std::vector<double> next(links_.size());
  for (std::size_t l = 0; l < links_.size(); ++l) {
    double v = x[l] - z[l] + w[l];
    for (const auto& [k, beta] : incoming_[l]) v += beta * z[k];
    next[l] = v;
  }
  return NonNegVector(std::move(next));
}

PolyLowerSet TrafficNetwork::safe_set() const { return PolyLowerSet::rectangle(safe_bounds()); }

NonNegVector TrafficNetwork::safe_bounds() const {
  std::vector<double> b;
  b.reserve(links_.size());
  for (const auto& l : links_) b.push_back(l.safe_bound);
  return NonNegVector(std::move(b));
}

double outflow(const TrafficNetwork& net, const NonNegVector& x, Control u, std::size_t link) {
  if (x.dim() != net.state_dim()) throw std::invalid_argument("outflow: dimension mismatch");
  if (link >= net.state_dim()) throw std::out_of_range("outflow: link index");
  if (u >= net.control_count()) throw std::invalid_argument("outflow: unknown control");
  return net.is_green(u, link) ? std::min(x[link], net.links()[link].saturation_flow) : 0.0;
}

NonNegVector step_traffic(const TrafficNetwork& net, const NonNegVector& x, const NonNegVector& w, Control u) {
  return net.step(x, w, u);
}

std::vector<CooperativeBound> cooperative_bound_check(const TrafficNetwork& net, const std::map<int, double>& capacities,
                                                      const std::vector<SupplyMovement>& movements) {
  std::vector<CooperativeBound> out;
  for (const auto& [id, cap] : capacities) {
    const auto l = net.link_index(id);
    double worst = 0.0;
    for (const auto& mv : movements) {
      if (mv.to != id) continue;
      const auto k = net.link_index(mv.from);
      double beta = 0.0;
      for (const auto& t : net.turns()) {
        if (t.from == mv.from && t.to == mv.to) beta = t.ratio;
      }
      if (beta <= 0.0) {
        throw std::invalid_argument("cooperative_bound_check: movement " + std::to_string(mv.from) + "->" +
                                    std::to_string(mv.to) + " has zero turn ratio");
      }
      worst = std::max(worst, mv.capacity_ratio / beta * net.links()[k].saturation_flow);
    }
    const double limit = cap - worst;
    out.push_back({id, net.links()[l].safe_bound <= limit, limit});
  }
  return out;
}

}  // namespace monoinv
