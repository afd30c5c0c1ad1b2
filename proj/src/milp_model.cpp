#include "monoinv/milp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace monoinv::milp {

std::size_t MilpModel::add_variable(std::string name, double lower, double upper) {
  variables_.push_back({std::move(name), lower, upper, false});
  return variables_.size() - 1;
}

std::size_t MilpModel::add_binary(std::string name) {
  variables_.push_back({std::move(name), 0.0, 1.0, true});
  return variables_.size() - 1;
}

std::size_t MilpModel::add_constraint(std::vector<Term> terms, Relation relation, double rhs, std::string name) {
  for (const auto& t : terms) {
    if (t.var >= variables_.size()) throw std::invalid_argument("MilpModel: constraint references unknown variable");
  }
  constraints_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return constraints_.size() - 1;
}

void MilpModel::set_objective(std::vector<Term> terms, Sense sense) {
  for (const auto& t : terms) {
    if (t.var >= variables_.size()) throw std::invalid_argument("MilpModel: objective references unknown variable");
  }
  objective_ = std::move(terms);
  sense_ = sense;
}

void MilpModel::set_bounds(std::size_t var, double lower, double upper) {
  auto& v = variables_.at(var);
  if (v.binary && (lower < 0.0 || upper > 1.0)) throw std::invalid_argument("MilpModel: binary bounds outside [0,1]");
  v.lower = lower;
  v.upper = upper;
}

std::size_t MilpModel::binary_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.binary; }));
}

double MilpModel::objective_value(const std::vector<double>& values) const {
  double s = 0.0;
  for (const auto& t : objective_) s += t.coef * values[t.var];
  return s;
}

double MilpModel::row_activity(std::size_t row, const std::vector<double>& values) const {
  double s = 0.0;
  for (const auto& t : constraints_[row].terms) s += t.coef * values[t.var];
  return s;
}

double MilpModel::max_violation(const std::vector<double>& values) const {
  if (values.size() != variables_.size()) throw std::invalid_argument("MilpModel: assignment has wrong size");
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (!std::isfinite(values[j])) return kInf;
    worst = std::max({worst, variables_[j].lower - values[j], values[j] - variables_[j].upper});
  }
  for (std::size_t r = 0; r < constraints_.size(); ++r) {
    const double act = row_activity(r, values);
    const auto& c = constraints_[r];
    switch (c.relation) {
      case Relation::LessEqual: worst = std::max(worst, act - c.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
      case Relation::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
    }
  }
  return worst;
}

double MilpModel::max_integrality_gap(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].binary) worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  return worst;
}

void MilpModel::validate() const {
  for (const auto& v : variables_) {
    if (!std::isfinite(v.lower)) throw std::invalid_argument("MilpModel: variable " + v.name + " needs a finite lower bound");
    if (std::isnan(v.upper) || v.upper < v.lower) throw std::invalid_argument("MilpModel: variable " + v.name + " has empty bounds");
    if (v.binary && (v.lower < 0.0 || v.upper > 1.0)) throw std::invalid_argument("MilpModel: binary " + v.name + " outside [0,1]");
  }
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("MilpModel: non-finite right-hand side");
    for (const auto& t : c.terms) {
      if (!std::isfinite(t.coef)) throw std::invalid_argument("MilpModel: non-finite coefficient");
    }
  }
}

namespace {

std::string lp_name(const MilpModel& m, std::size_t j) {
  const auto& n = m.variables()[j].name;
  return n.empty() ? "v" + std::to_string(j) : n;
}

void write_terms(std::ostream& os, const MilpModel& m, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << lp_name(m, 0);
    return;
  }
  for (const auto& t : terms) os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << lp_name(m, t.var);
}

}  // namespace

void MilpModel::write_lp(std::ostream& os) const {
  os.precision(17);
  os << (sense_ == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  if (!variables_.empty()) write_terms(os, *this, objective_);
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < constraints_.size(); ++r) {
    const auto& c = constraints_[r];
    os << ' ' << (c.name.empty() ? "c" + std::to_string(r) : c.name) << ':';
    write_terms(os, *this, c.terms);
    os << (c.relation == Relation::LessEqual ? " <= " : c.relation == Relation::Equal ? " = " : " >= ") << c.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    if (v.binary) continue;
    os << ' ' << v.lower << " <= " << lp_name(*this, j) << " <= ";
    if (std::isfinite(v.upper)) os << v.upper << '\n';
    else os << "+inf\n";
  }
  os << "Binaries\n";
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].binary) os << ' ' << lp_name(*this, j) << '\n';
  }
  os << "End\n";
}

const char* to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::FeasibleBudgetHit: return "feasible_budget_hit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::BudgetUnknown: return "budget_unknown";
    case SolveStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

bool has_solution(SolveStatus s) noexcept {
  return s == SolveStatus::Optimal || s == SolveStatus::Feasible || s == SolveStatus::FeasibleBudgetHit;
}

}  // namespace monoinv::milp
