#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace monoinv::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  bool binary = false;
};

struct Term {
  std::size_t var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Mixed 0/1 linear program. Every variable needs a finite lower bound; binaries
/// are always bounded to [0, 1].
class MilpModel {
public:
  std::size_t add_variable(std::string name, double lower = 0.0, double upper = kInf);
  std::size_t add_binary(std::string name);
  std::size_t add_constraint(std::vector<Term> terms, Relation relation, double rhs, std::string name = {});
  void set_objective(std::vector<Term> terms, Sense sense);
  void set_bounds(std::size_t var, double lower, double upper);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::vector<Term>& objective() const noexcept { return objective_; }
  Sense sense() const noexcept { return sense_; }
  std::size_t binary_count() const noexcept;

  double objective_value(const std::vector<double>& values) const;
  double row_activity(std::size_t row, const std::vector<double>& values) const;

  /// Largest violation of any constraint or bound; 0 if `values` is feasible.
  double max_violation(const std::vector<double>& values) const;
  /// Largest distance of a binary from {0, 1}.
  double max_integrality_gap(const std::vector<double>& values) const;

  /// Throws std::invalid_argument if the model is not solvable as posed.
  void validate() const;

  /// CPLEX LP-format text, for cross-checking with external solvers.
  void write_lp(std::ostream& os) const;

private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  Sense sense_ = Sense::Maximize;
};

enum class SolveStatus {
  Optimal,
  Feasible,           ///< incumbent returned without an optimality proof (first-feasible mode)
  FeasibleBudgetHit,  ///< incumbent found, budget ran out before the proof
  Infeasible,
  Unbounded,
  BudgetUnknown,      ///< budget ran out with no incumbent; nothing is claimed
  NumericalError,
};

const char* to_string(SolveStatus s) noexcept;
bool has_solution(SolveStatus s) noexcept;

struct MilpSolution {
  SolveStatus status = SolveStatus::NumericalError;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double seconds = 0.0;
  /// Row duals in the model's sense (LP solves only): with r = c - A^T y,
  /// objective = y.b + sum_j r_j x_j at an optimal basis.
  std::vector<double> row_duals;
};

struct Tolerances {
  double feasibility = 1e-6;
  double integrality = 1e-6;
  double pivot = 1e-9;
  double objective = 1e-7;
};

struct Budget {
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  double time_limit_seconds = kInf;
};

enum class SearchMode { ProveOptimal, FirstFeasible };

/// LP relaxation (binaries relaxed to [0, 1]) by two-phase bounded primal simplex.
MilpSolution solve_lp(const MilpModel& model, const Tolerances& tol = {});

/// Depth-first branch and bound over the binaries. Branches on the most
/// fractional binary (lowest index on ties), rounding direction first.
MilpSolution solve_milp(const MilpModel& model, const Budget& budget = {}, SearchMode mode = SearchMode::ProveOptimal,
                        const Tolerances& tol = {});

}  // namespace monoinv::milp
