#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "monoinv/milp.hpp"
#include "simplex.hpp"

namespace monoinv::milp {

namespace {

using detail::DenseSimplex;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Objective comparison in the model's sense: true if a is better than b by more than tol.
bool better(Sense sense, double a, double b, double tol) {
  return sense == Sense::Maximize ? a > b + tol : a < b - tol;
}

}  // namespace

MilpSolution solve_lp(const MilpModel& model, const Tolerances& tol) {
  const auto start = Clock::now();
  DenseSimplex lp(model, tol);
  MilpSolution sol;
  auto result = lp.solve();
  sol.nodes = 1;
  sol.lp_iterations = lp.iterations();
  switch (result) {
    case DenseSimplex::Result::Infeasible: sol.status = SolveStatus::Infeasible; break;
    case DenseSimplex::Result::Unbounded: sol.status = SolveStatus::Unbounded; break;
    case DenseSimplex::Result::Numerical: sol.status = SolveStatus::NumericalError; break;
    case DenseSimplex::Result::Optimal: {
      sol.values = lp.structural_values();
      // Independent check against the original rows; on failure retry once from scratch.
      if (model.max_violation(sol.values) > tol.feasibility) {
        if (lp.solve() == DenseSimplex::Result::Optimal) sol.values = lp.structural_values();
      }
      if (model.max_violation(sol.values) > tol.feasibility) {
        sol.status = SolveStatus::NumericalError;
        sol.values.clear();
        break;
      }
      sol.status = SolveStatus::Optimal;
      sol.objective = model.objective_value(sol.values);
      sol.row_duals = lp.row_duals();
      break;
    }
  }
  sol.seconds = seconds_since(start);
  return sol;
}

MilpSolution solve_milp(const MilpModel& model, const Budget& budget, SearchMode mode, const Tolerances& tol) {
  const auto start = Clock::now();
  const Sense sense = model.sense();
  const auto& vars = model.variables();
  std::vector<std::size_t> binaries;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].binary) binaries.push_back(j);
  }

  MilpSolution best;
  best.status = SolveStatus::Infeasible;
  bool have_incumbent = false;
  bool numerical_trouble = false;
  bool out_of_budget = false;

  struct Pending {
    DenseSimplex lp;
    std::size_t var;
    double value;
  };
  // Slots are reused across pushes so tableau storage is allocated once per depth.
  std::vector<Pending> stack;
  std::size_t depth = 0;

  DenseSimplex lp(model, tol);
  auto result = lp.solve();
  if (result == DenseSimplex::Result::Unbounded) {
    best.status = SolveStatus::Unbounded;
    best.nodes = 1;
    best.seconds = seconds_since(start);
    return best;
  }

  std::size_t nodes = 0;
  bool have_node = true;
  while (have_node) {
    ++nodes;
    if (nodes > budget.node_limit || seconds_since(start) > budget.time_limit_seconds) {
      out_of_budget = true;
      break;
    }

    bool prune = false;
    if (result == DenseSimplex::Result::Numerical || result == DenseSimplex::Result::Unbounded) {
      numerical_trouble = true;
      prune = true;
    } else if (result == DenseSimplex::Result::Infeasible) {
      prune = true;
    } else if (have_incumbent && !better(sense, lp.objective(), best.objective, tol.objective)) {
      prune = true;
    }

    if (!prune) {
      const auto x = lp.structural_values();
      std::size_t branch_var = vars.size();
      double most = tol.integrality;
      for (std::size_t j : binaries) {
        const double frac = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
        if (frac > most) {
          most = frac;
          branch_var = j;
        }
      }

      if (branch_var == vars.size()) {
        // Integral: pin every binary to its rounded value and re-solve so the
        // continuous part is consistent with exact 0/1 values.
        for (std::size_t j : binaries) {
          const double v = std::round(x[j]);
          lp.set_bounds(j, v, v);
        }
        auto polished = lp.resolve();
        std::vector<double> values;
        if (polished == DenseSimplex::Result::Optimal) {
          values = lp.structural_values();
          for (std::size_t j : binaries) values[j] = std::round(values[j]);
        }
        if (polished != DenseSimplex::Result::Optimal || model.max_violation(values) > tol.feasibility) {
          numerical_trouble = true;
        } else {
          const double obj = model.objective_value(values);
          if (!have_incumbent || better(sense, obj, best.objective, tol.objective)) {
            have_incumbent = true;
            best.values = std::move(values);
            best.objective = obj;
          }
          if (mode == SearchMode::FirstFeasible) break;
        }
        prune = true;
      } else {
        const double first = x[branch_var] >= 0.5 ? 1.0 : 0.0;
        if (depth < stack.size()) {
          stack[depth].lp = lp;
          stack[depth].var = branch_var;
          stack[depth].value = 1.0 - first;
        } else {
          stack.push_back({lp, branch_var, 1.0 - first});
        }
        ++depth;
        lp.set_bounds(branch_var, first, first);
        result = lp.resolve();
        continue;
      }
    }

    if (depth == 0) {
      have_node = false;
    } else {
      auto& next = stack[--depth];
      std::swap(lp, next.lp);
      lp.set_bounds(next.var, next.value, next.value);
      result = lp.resolve();
    }
  }

  best.nodes = nodes;
  best.lp_iterations = lp.iterations();
  best.seconds = seconds_since(start);
  if (have_incumbent) {
    if (model.max_violation(best.values) > tol.feasibility || model.max_integrality_gap(best.values) > tol.integrality) {
      throw std::logic_error("solve_milp: incumbent failed the final feasibility check");
    }
    if (out_of_budget) best.status = SolveStatus::FeasibleBudgetHit;
    else if (mode == SearchMode::FirstFeasible || numerical_trouble) best.status = SolveStatus::Feasible;
    else best.status = SolveStatus::Optimal;
  } else if (out_of_budget) {
    best.status = SolveStatus::BudgetUnknown;
  } else if (numerical_trouble) {
    best.status = SolveStatus::NumericalError;
  } else {
    best.status = SolveStatus::Infeasible;
  }
  return best;
}

}  // namespace monoinv::milp
