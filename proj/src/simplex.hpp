#pragma once

// Dense bounded-variable simplex shared by solve_lp and the branch and bound.
// Internal header; not installed.

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "monoinv/milp.hpp"

namespace monoinv::milp::detail {

/// Columns are laid out as [structural | slack per inequality row | artificial per row].
/// The problem is always minimised internally; maximisation negates the cost.
struct StandardForm {
  Eigen::MatrixXd A;  // m x N
  Eigen::VectorXd b;
  Eigen::VectorXd cost;  // phase-2 cost, N entries
  std::vector<double> lower, upper;
  std::size_t structural = 0;
  std::size_t first_artificial = 0;
  std::vector<double> artificial_sign;  // +-1 per row
  double objective_sign = 1.0;          // model objective = objective_sign * internal
};

class DenseSimplex {
public:
  enum class Result { Optimal, Infeasible, Unbounded, Numerical };

  DenseSimplex(const MilpModel& model, const Tolerances& tol);

  /// Two-phase primal simplex from scratch with the current bounds.
  Result solve();
  /// Dual simplex from the last optimal basis after bound changes.
  Result resolve();

  /// Changes the bounds of a structural variable, keeping the basis.
  void set_bounds(std::size_t var, double lower, double upper);
  double lower(std::size_t var) const { return lower_[var]; }
  double upper(std::size_t var) const { return upper_[var]; }

  std::vector<double> structural_values() const;
  double objective() const;  // in the model's sense
  std::vector<double> row_duals() const;
  std::size_t iterations() const noexcept { return iterations_; }

private:
  enum class Status : unsigned char { Basic, AtLower, AtUpper };

  double nonbasic_value(std::size_t j) const { return status_[j] == Status::AtUpper ? upper_[j] : lower_[j]; }
  void pivot(std::size_t row, std::size_t col);
  bool refactor();
  void recompute_reduced_costs(const Eigen::VectorXd& cost);
  Result primal(const Eigen::VectorXd& cost);
  Result dual();
  Result cold_solve();

  std::shared_ptr<const StandardForm> form_;
  Tolerances tol_;
  std::vector<double> lower_, upper_;
  Eigen::MatrixXd tableau_;  // B^-1 A
  Eigen::VectorXd beta_;     // basic values
  Eigen::VectorXd reduced_;  // current reduced costs
  std::vector<std::size_t> basis_;
  std::vector<Status> status_;
  std::vector<double> art_sign_;
  Eigen::VectorXd current_cost_;
  bool phase_two_ready_ = false;
  std::size_t pivots_since_refactor_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace monoinv::milp::detail
