#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "monoinv/encoder.hpp"
#include "monoinv/milp.hpp"
#include "monoinv/order.hpp"
#include "monoinv/system.hpp"

namespace monoinv {

enum class HorizonStatus { Found, ProvenInfeasible, BudgetUnknown, NumericalError };
const char* to_string(HorizonStatus s) noexcept;

/// What the sweep learned about one horizon.
struct HorizonOutcome {
  std::size_t T = 0;
  HorizonStatus status = HorizonStatus::BudgetUnknown;
  milp::SolveStatus solver_status = milp::SolveStatus::BudgetUnknown;
  std::size_t nodes = 0;
  double seconds = 0.0;
  double time_allowance = 0.0;
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::size_t binaries = 0;
};

struct SearchOptions {
  std::size_t t_min = 1;
  std::size_t t_max = 10;
  Objective objective = Objective::MaxL1X0;
  /// Wall-clock seconds for the whole sweep. Each horizon may use the
  /// remaining time divided by the number of horizons still to try.
  double time_budget_seconds = 1800.0;
  /// Branch-and-bound node limit per horizon.
  std::size_t node_budget = std::numeric_limits<std::size_t>::max();
};

struct SearchResult {
  std::optional<SSequenceCertificate> certificate;
  /// True when every horizon below the certificate's T was proven infeasible
  /// (which also requires the sweep to have started at T = 1).
  bool minimal = false;
  std::vector<HorizonOutcome> horizons;
  /// The model of the last horizon attempted, for inspection or LP export.
  std::optional<milp::MilpModel> last_model;
};

/// Sweeps T = t_min..t_max, solving the horizon-T MILP and stopping at the first
/// horizon whose solution decodes into a valid certificate.
SearchResult find_s_sequence(const MonotoneSystem& sys, const PolyLowerSet& safe, const SearchOptions& options);

/// Ω* = ∪ R(x*_k), k < T, with the control attached to each box.
struct Rcis {
  BoxUnion region;
  std::vector<Control> policy;
};

Rcis build_rcis(const SSequenceCertificate& cert);

/// Control of the lowest-index box containing x; none outside Ω*.
std::optional<Control> feedback_policy(const Rcis& rcis, const NonNegVector& x, double tol = kOrderTol);

/// u*_{k mod T}.
Control open_loop_policy(const SSequenceCertificate& cert, std::size_t k);

struct LimitCycle {
  std::vector<NonNegVector> points;  ///< x∞_0 .. x∞_{T-1}
  std::size_t periods = 0;           ///< whole periods until the iterates stopped changing (0 if x*_0 is already on the cycle)
  double residual = 0.0;             ///< max entrywise change over the final period
  /// Phase states that rose above the previous period's by more than the
  /// tolerance. Zero for a valid certificate.
  std::size_t monotonicity_violations = 0;
};

class LimitCycleError : public std::runtime_error {
public:
  LimitCycleError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Iterates whole periods of the repeated sequence under w* from x*_0 until
/// the largest entrywise change over one period is below tol.
LimitCycle compute_limit_cycle(const MonotoneSystem& sys, const SSequenceCertificate& cert, double tol = 1e-9,
                               std::size_t max_periods = 1'000'000);

/// Γ = ∪ R(x∞_k).
BoxUnion build_attractive_set(const LimitCycle& cycle);

/// c / (alpha eps)^n.
double necessity_bound(double c, double alpha, double eps, int n);

}  // namespace monoinv
