#pragma once

#include <cmath>
#include <cstdint>

#include "monoinv/milp.hpp"
#include "monoinv/rng.hpp"

// Random bounded MILPs with up to 12 binaries and 20 continuous variables,
// plus an exhaustive oracle that fixes every binary assignment and solves the LP.

inline monoinv::milp::MilpModel random_milp(std::uint64_t seed) {
  using namespace monoinv::milp;
  monoinv::SplitMix64 rng(seed);
  MilpModel m;
  const std::size_t nb = 1 + rng.below(12);
  const std::size_t nc = rng.below(21);
  const std::size_t rows = 1 + rng.below(10);
  for (std::size_t j = 0; j < nb; ++j) m.add_binary("b" + std::to_string(j));
  for (std::size_t j = 0; j < nc; ++j) {
    const double lo = rng.below(4) == 0 ? -rng.uniform(0, 5) : 0.0;
    m.add_variable("c" + std::to_string(j), lo, lo + rng.uniform(1, 10));
  }
  const std::size_t n = nb + nc;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.below(3) == 0) continue;
      const double a = std::round(rng.uniform(-6, 6) * 4) / 4;
      if (a != 0.0) terms.push_back({j, a});
      scale += std::abs(a);
    }
    const auto kind = rng.below(6);
    const Relation rel = kind == 0 ? Relation::Equal : kind < 3 ? Relation::GreaterEqual : Relation::LessEqual;
    double rhs = std::round(rng.uniform(-0.3, 0.6) * scale * 4) / 4;
    if (rel == Relation::GreaterEqual) rhs = -std::abs(rhs) * 0.5;
    m.add_constraint(std::move(terms), rel, rhs);
  }
  std::vector<Term> obj;
  for (std::size_t j = 0; j < n; ++j) obj.push_back({j, std::round(rng.uniform(-5, 5) * 8) / 8});
  m.set_objective(std::move(obj), rng.below(2) ? Sense::Maximize : Sense::Minimize);
  return m;
}

struct EnumerationResult {
  bool feasible = false;
  double objective = 0.0;
};

inline EnumerationResult enumerate_milp(const monoinv::milp::MilpModel& model) {
  using namespace monoinv::milp;
  std::vector<std::size_t> bins;
  for (std::size_t j = 0; j < model.variables().size(); ++j) {
    if (model.variables()[j].binary) bins.push_back(j);
  }
  EnumerationResult best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bins.size()); ++mask) {
    MilpModel fixed = model;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double v = (mask >> b) & 1 ? 1.0 : 0.0;
      fixed.set_bounds(bins[b], v, v);
    }
    const auto sol = solve_lp(fixed);
    if (sol.status != SolveStatus::Optimal) continue;
    const bool better = !best.feasible || (model.sense() == Sense::Maximize ? sol.objective > best.objective
                                                                            : sol.objective < best.objective);
    if (better) best = {true, sol.objective};
  }
  return best;
}
