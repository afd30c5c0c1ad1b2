#include "monoinv/invariance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace monoinv {

const char* to_string(HorizonStatus s) noexcept {
  switch (s) {
    case HorizonStatus::Found: return "found";
    case HorizonStatus::ProvenInfeasible: return "proven_infeasible";
    case HorizonStatus::BudgetUnknown: return "budget_unknown";
    case HorizonStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

SearchResult find_s_sequence(const MonotoneSystem& sys, const PolyLowerSet& safe, const SearchOptions& options) {
  if (options.t_min < 1 || options.t_max < options.t_min) {
    throw std::invalid_argument("find_s_sequence: need 1 <= t_min <= t_max");
  }
  if (!(options.time_budget_seconds > 0.0)) throw std::invalid_argument("find_s_sequence: time budget must be positive");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto mode = options.objective == Objective::MaxL1X0 ? milp::SearchMode::ProveOptimal
                                                             : milp::SearchMode::FirstFeasible;

  SearchResult result;
  bool all_smaller_proven = options.t_min == 1;
  for (std::size_t T = options.t_min; T <= options.t_max; ++T) {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    const double remaining = std::max(0.0, options.time_budget_seconds - elapsed);
    const double allowance = remaining / static_cast<double>(options.t_max - T + 1);

    auto artifacts = encode(sys, safe, T, options.objective);
    HorizonOutcome outcome;
    outcome.T = T;
    outcome.time_allowance = allowance;
    outcome.variables = artifacts.model.variables().size();
    outcome.constraints = artifacts.model.constraints().size();
    outcome.binaries = artifacts.model.binary_count();

    const auto sol = milp::solve_milp(artifacts.model, {options.node_budget, allowance}, mode);
    outcome.solver_status = sol.status;
    outcome.nodes = sol.nodes;
    outcome.seconds = sol.seconds;
    std::optional<SSequenceCertificate> cert;
    switch (sol.status) {
      case milp::SolveStatus::Infeasible: outcome.status = HorizonStatus::ProvenInfeasible; break;
      case milp::SolveStatus::BudgetUnknown: outcome.status = HorizonStatus::BudgetUnknown; break;
      case milp::SolveStatus::Unbounded:
      case milp::SolveStatus::NumericalError: outcome.status = HorizonStatus::NumericalError; break;
      default:
        try {
          cert = decode(artifacts, sol, sys);
          outcome.status = HorizonStatus::Found;
        } catch (const DecodeMismatch&) {
          outcome.status = HorizonStatus::NumericalError;
        }
    }
    result.horizons.push_back(outcome);
    result.last_model = std::move(artifacts.model);
    if (cert) {
      result.certificate = std::move(cert);
      result.minimal = all_smaller_proven;
      break;
    }
    if (outcome.status != HorizonStatus::ProvenInfeasible) all_smaller_proven = false;
  }
  return result;
}

Rcis build_rcis(const SSequenceCertificate& cert) {
  if (cert.T == 0 || cert.x_star.size() < cert.T || cert.controls.size() != cert.T) {
    throw std::invalid_argument("build_rcis: malformed certificate");
  }
  std::vector<Box> boxes;
  boxes.reserve(cert.T);
  for (std::size_t k = 0; k < cert.T; ++k) boxes.emplace_back(cert.x_star[k]);
  return {BoxUnion(std::move(boxes)), cert.controls};
}

std::optional<Control> feedback_policy(const Rcis& rcis, const NonNegVector& x, double tol) {
  const auto p = rcis.region.find(x, tol);
  if (!p) return std::nullopt;
  return rcis.policy[*p];
}

Control open_loop_policy(const SSequenceCertificate& cert, std::size_t k) {
  if (cert.controls.empty()) throw std::invalid_argument("open_loop_policy: empty certificate");
  return cert.controls[k % cert.controls.size()];
}

LimitCycle compute_limit_cycle(const MonotoneSystem& sys, const SSequenceCertificate& cert, double tol,
                               std::size_t max_periods) {
  if (!(tol > 0.0)) throw std::invalid_argument("compute_limit_cycle: tol must be positive");
  if (cert.T == 0 || cert.controls.size() != cert.T || cert.x_star.empty()) {
    throw std::invalid_argument("compute_limit_cycle: malformed certificate");
  }
  const std::size_t T = cert.T;

  // Period 0 is the witness itself.
  std::vector<NonNegVector> prev(T);
  NonNegVector x = cert.x_star[0];
  for (std::size_t k = 0; k < T; ++k) {
    prev[k] = x;
    x = sys.step_worst(x, cert.controls[k]);
  }

  LimitCycle cycle;
  std::vector<NonNegVector> cur(T);
  double change = 0.0;
  for (std::size_t period = 1; period <= max_periods; ++period) {
    change = 0.0;
    for (std::size_t k = 0; k < T; ++k) {
      cur[k] = x;
      change = std::max(change, max_abs_diff(cur[k], prev[k]));
      if (!leq(cur[k], prev[k], kOrderTol)) ++cycle.monotonicity_violations;
      x = sys.step_worst(x, cert.controls[k]);
    }
    std::swap(prev, cur);
    if (change < tol) {
      // This period only confirmed that the previous one had settled.
      cycle.points = std::move(prev);
      cycle.periods = period - 1;
      cycle.residual = change;
      return cycle;
    }
  }
  throw LimitCycleError("compute_limit_cycle: no convergence after " + std::to_string(max_periods) +
                            " periods (last change " + std::to_string(change) + ")",
                        change);
}

BoxUnion build_attractive_set(const LimitCycle& cycle) {
  std::vector<Box> boxes;
  boxes.reserve(cycle.points.size());
  for (const auto& p : cycle.points) boxes.emplace_back(p);
  return BoxUnion(std::move(boxes));
}

double necessity_bound(double c, double alpha, double eps, int n) {
  if (!(c > 0.0) || !(alpha > 0.0) || !(eps > 0.0) || n < 1) {
    throw std::invalid_argument("necessity_bound: c, alpha, eps must be positive and n >= 1");
  }
  return c / std::pow(alpha * eps, n);
}

}  // namespace monoinv
