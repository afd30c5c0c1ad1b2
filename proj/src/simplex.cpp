#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace monoinv::milp::detail {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPrimalTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr std::size_t kRefactorInterval = 100;
constexpr std::size_t kDegenerateBeforeBland = 50;

std::shared_ptr<const StandardForm> build_form(const MilpModel& model) {
  model.validate();
  auto form = std::make_shared<StandardForm>();
  const auto& vars = model.variables();
  const auto& cons = model.constraints();
  const std::size_t n = vars.size();
  const std::size_t m = cons.size();
  std::size_t slacks = 0;
  for (const auto& c : cons) slacks += c.relation != Relation::Equal ? 1 : 0;

  const std::size_t core = n + slacks;
  form->structural = n;
  form->first_artificial = core;
  form->A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(core));
  form->b.resize(static_cast<Eigen::Index>(m));
  form->lower.assign(core + m, 0.0);
  form->upper.assign(core + m, kInf);
  form->cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(core + m));
  form->objective_sign = model.sense() == Sense::Maximize ? -1.0 : 1.0;

  for (std::size_t j = 0; j < n; ++j) {
    form->lower[j] = vars[j].lower;
    form->upper[j] = vars[j].upper;
  }
  std::size_t slack = n;
  for (std::size_t r = 0; r < m; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    for (const auto& t : cons[r].terms) form->A(row, static_cast<Eigen::Index>(t.var)) += t.coef;
    form->b(row) = cons[r].rhs;
    if (cons[r].relation == Relation::LessEqual) form->A(row, static_cast<Eigen::Index>(slack++)) = 1.0;
    if (cons[r].relation == Relation::GreaterEqual) form->A(row, static_cast<Eigen::Index>(slack++)) = -1.0;
  }
  for (const auto& t : model.objective()) {
    form->cost(static_cast<Eigen::Index>(t.var)) += form->objective_sign * t.coef;
  }
  return form;
}

}  // namespace

DenseSimplex::DenseSimplex(const MilpModel& model, const Tolerances& tol)
    : form_(build_form(model)), tol_(tol), lower_(form_->lower), upper_(form_->upper) {}

void DenseSimplex::set_bounds(std::size_t var, double lower, double upper) {
  if (var >= form_->structural) throw std::out_of_range("DenseSimplex::set_bounds");
  const bool nonbasic = phase_two_ready_ && status_[var] != Status::Basic;
  const double before = nonbasic ? nonbasic_value(var) : 0.0;
  lower_[var] = lower;
  upper_[var] = upper;
  if (!nonbasic) return;
  if (status_[var] == Status::AtUpper && !std::isfinite(upper)) status_[var] = Status::AtLower;
  const double shift = nonbasic_value(var) - before;
  if (shift != 0.0) beta_ -= shift * tableau_.col(static_cast<Eigen::Index>(var));
}

void DenseSimplex::pivot(std::size_t row, std::size_t col) {
  const auto r = static_cast<Eigen::Index>(row);
  const auto q = static_cast<Eigen::Index>(col);
  tableau_.row(r) /= tableau_(r, q);
  Eigen::VectorXd column = tableau_.col(q);
  column(r) = 0.0;
  const Eigen::RowVectorXd prow = tableau_.row(r);
  for (Eigen::Index c = 0; c < tableau_.cols(); ++c) {
    if (prow(c) != 0.0) tableau_.col(c) -= prow(c) * column;
  }
  tableau_.col(q).setZero();
  tableau_(r, q) = 1.0;

  const double dq = reduced_(q);
  if (dq != 0.0) reduced_ -= dq * prow.transpose();
  reduced_(q) = 0.0;

  basis_[row] = col;
  status_[col] = Status::Basic;
  ++pivots_since_refactor_;
  ++iterations_;
}

bool DenseSimplex::refactor() {
  const auto m = static_cast<Eigen::Index>(basis_.size());
  const std::size_t first_art = form_->first_artificial;
  const auto core = static_cast<Eigen::Index>(first_art);
  pivots_since_refactor_ = 0;
  if (m == 0) return true;

  Eigen::MatrixXd B(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t j = basis_[static_cast<std::size_t>(i)];
    if (j < first_art) {
      B.col(i) = form_->A.col(static_cast<Eigen::Index>(j));
    } else {
      B.col(i).setZero();
      B(static_cast<Eigen::Index>(j - first_art), i) = art_sign_[j - first_art];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    max_diag = std::max(max_diag, std::abs(packed(i, i)));
    min_diag = std::min(min_diag, std::abs(packed(i, i)));
  }
  if (!(min_diag > 1e-11 * std::max(1.0, max_diag))) return false;

  tableau_.leftCols(core) = lu.solve(form_->A);
  Eigen::MatrixXd arts = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) arts(i, i) = art_sign_[static_cast<std::size_t>(i)];
  tableau_.rightCols(m) = lu.solve(arts);

  Eigen::VectorXd rhs = form_->b;
  for (std::size_t j = 0; j < first_art; ++j) {
    if (status_[j] == Status::Basic) continue;
    const double v = nonbasic_value(j);
    if (v != 0.0) rhs -= v * form_->A.col(static_cast<Eigen::Index>(j));
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const std::size_t j = first_art + i;
    if (status_[j] != Status::Basic) {
      const double v = nonbasic_value(j);
      if (v != 0.0) rhs(static_cast<Eigen::Index>(i)) -= v * art_sign_[i];
    }
  }
  beta_ = lu.solve(rhs);
  recompute_reduced_costs(current_cost_);
  return true;
}

void DenseSimplex::recompute_reduced_costs(const Eigen::VectorXd& cost) {
  current_cost_ = cost;
  Eigen::VectorXd basic_cost(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) basic_cost(static_cast<Eigen::Index>(i)) = cost(static_cast<Eigen::Index>(basis_[i]));
  reduced_ = cost - tableau_.transpose() * basic_cost;
  for (std::size_t j : basis_) reduced_(static_cast<Eigen::Index>(j)) = 0.0;
}

DenseSimplex::Result DenseSimplex::primal(const Eigen::VectorXd& cost) {
  recompute_reduced_costs(cost);
  const std::size_t m = basis_.size();
  const std::size_t N = status_.size();
  const std::size_t max_iter = 50 * (m + N) + 1000;
  std::size_t degenerate = 0;
  bool bland = false;

  for (std::size_t it = 0; it < max_iter; ++it) {
    if (pivots_since_refactor_ >= kRefactorInterval && !refactor()) return Result::Numerical;

    std::size_t q = kNone;
    double best = 0.0;
    double dir = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      if (status_[j] == Status::Basic || !(upper_[j] > lower_[j])) continue;
      const double dj = reduced_(static_cast<Eigen::Index>(j));
      double score = 0.0;
      double d = 0.0;
      if (status_[j] == Status::AtLower && dj < -kReducedCostTol) {
        score = -dj;
        d = 1.0;
      } else if (status_[j] == Status::AtUpper && dj > kReducedCostTol) {
        score = dj;
        d = -1.0;
      } else {
        continue;
      }
      if (bland) {
        q = j;
        dir = d;
        break;
      }
      if (score > best) {
        best = score;
        q = j;
        dir = d;
      }
    }
    if (q == kNone) return Result::Optimal;

    const auto qi = static_cast<Eigen::Index>(q);
    double theta = upper_[q] - lower_[q];
    std::size_t leave = kNone;
    bool leave_at_upper = false;
    double leave_alpha = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const double alpha = dir * tableau_(ri, qi);
      const std::size_t jb = basis_[r];
      double limit;
      bool to_upper;
      if (alpha > tol_.pivot) {
        limit = (beta_(ri) - lower_[jb]) / alpha;
        to_upper = false;
      } else if (alpha < -tol_.pivot && std::isfinite(upper_[jb])) {
        limit = (upper_[jb] - beta_(ri)) / -alpha;
        to_upper = true;
      } else {
        continue;
      }
      limit = std::max(limit, 0.0);
      bool take = false;
      if (limit < theta - kTieTol) {
        take = true;
      } else if (limit <= theta + kTieTol && leave != kNone) {
        take = bland ? jb < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
      }
      if (take) {
        theta = limit;
        leave = r;
        leave_at_upper = to_upper;
        leave_alpha = alpha;
      }
    }
    if (!std::isfinite(theta)) return Result::Unbounded;

    if (theta < kTieTol) {
      if (++degenerate > kDegenerateBeforeBland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }

    if (theta != 0.0) beta_ -= (dir * theta) * tableau_.col(qi);
    if (leave == kNone) {
      status_[q] = status_[q] == Status::AtLower ? Status::AtUpper : Status::AtLower;
      ++iterations_;
      continue;
    }
    const double entering_value = nonbasic_value(q) + dir * theta;
    const std::size_t leaving = basis_[leave];
    status_[leaving] = leave_at_upper ? Status::AtUpper : Status::AtLower;
    pivot(leave, q);
    beta_(static_cast<Eigen::Index>(leave)) = entering_value;
  }
  return Result::Numerical;
}

DenseSimplex::Result DenseSimplex::dual() {
  const std::size_t m = basis_.size();
  const std::size_t N = status_.size();
  const std::size_t max_iter = 50 * (m + N) + 1000;
  std::vector<bool> skipped(m, false);
  std::size_t degenerate = 0;
  bool bland = false;

  for (std::size_t it = 0; it < max_iter; ++it) {
    if (pivots_since_refactor_ >= kRefactorInterval && !refactor()) return Result::Numerical;

    std::size_t r = kNone;
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (skipped[i]) continue;
      const std::size_t j = basis_[i];
      const double v = beta_(static_cast<Eigen::Index>(i));
      const double infeas = std::max(lower_[j] - v, v - upper_[j]);
      if (infeas <= kPrimalTol) continue;
      if (bland) {
        if (r == kNone || j < basis_[r]) r = i;
      } else if (infeas > worst) {
        worst = infeas;
        r = i;
      }
    }
    if (r == kNone) return Result::Optimal;

    const auto ri = static_cast<Eigen::Index>(r);
    const std::size_t jr = basis_[r];
    const bool below = beta_(ri) < lower_[jr];
    const double target = below ? lower_[jr] : upper_[jr];
    const double infeas = below ? lower_[jr] - beta_(ri) : beta_(ri) - upper_[jr];

    std::size_t q = kNone;
    double best_ratio = kInf;
    double best_alpha = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      if (status_[c] == Status::Basic || !(upper_[c] > lower_[c])) continue;
      const double a = tableau_(ri, static_cast<Eigen::Index>(c));
      const bool at_lower = status_[c] == Status::AtLower;
      const bool eligible = below ? ((at_lower && a < -tol_.pivot) || (!at_lower && a > tol_.pivot))
                                  : ((at_lower && a > tol_.pivot) || (!at_lower && a < -tol_.pivot));
      if (!eligible) continue;
      const double ratio = std::abs(reduced_(static_cast<Eigen::Index>(c))) / std::abs(a);
      bool take = false;
      if (ratio < best_ratio - kTieTol) {
        take = true;
      } else if (ratio <= best_ratio + kTieTol) {
        take = bland ? false : std::abs(a) > std::abs(best_alpha);
      }
      if (take) {
        best_ratio = ratio;
        best_alpha = a;
        q = c;
      }
    }
    if (q == kNone) {
      if (infeas > tol_.feasibility) return Result::Infeasible;
      skipped[r] = true;
      continue;
    }

    if (best_ratio < kTieTol) {
      if (++degenerate > kDegenerateBeforeBland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }

    const auto qi = static_cast<Eigen::Index>(q);
    const double delta = (beta_(ri) - target) / tableau_(ri, qi);
    beta_ -= delta * tableau_.col(qi);
    const double entering_value = nonbasic_value(q) + delta;
    status_[jr] = below ? Status::AtLower : Status::AtUpper;
    pivot(r, q);
    beta_(ri) = entering_value;
  }
  return Result::Numerical;
}

DenseSimplex::Result DenseSimplex::cold_solve() {
  const std::size_t m = static_cast<std::size_t>(form_->A.rows());
  const std::size_t first_art = form_->first_artificial;
  const std::size_t N = first_art + m;
  const auto mi = static_cast<Eigen::Index>(m);
  phase_two_ready_ = false;

  // Artificial bounds are reset: they are only open during phase one.
  for (std::size_t i = 0; i < m; ++i) {
    lower_[first_art + i] = 0.0;
    upper_[first_art + i] = kInf;
  }
  status_.assign(N, Status::AtLower);
  for (std::size_t j = 0; j < first_art; ++j) {
    if (!std::isfinite(lower_[j])) throw std::invalid_argument("DenseSimplex: variable without finite lower bound");
  }

  Eigen::VectorXd residual = form_->b;
  for (std::size_t j = 0; j < form_->structural; ++j) {
    const double v = lower_[j];
    if (v != 0.0) residual -= v * form_->A.col(static_cast<Eigen::Index>(j));
  }

  // Crash basis: a slack whose sign fits the residual starts basic, otherwise an artificial.
  art_sign_.assign(m, 1.0);
  basis_.assign(m, kNone);
  Eigen::VectorXd diag(mi);
  for (std::size_t j = form_->structural; j < first_art; ++j) {
    const auto col = form_->A.col(static_cast<Eigen::Index>(j));
    Eigen::Index row = 0;
    col.cwiseAbs().maxCoeff(&row);
    const double s = col(row);
    if (residual(row) * s >= 0.0) {
      basis_[static_cast<std::size_t>(row)] = j;
      diag(row) = s;
    }
  }
  Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (basis_[i] != kNone) {
      upper_[first_art + i] = 0.0;
      continue;
    }
    art_sign_[i] = residual(ii) >= 0.0 ? 1.0 : -1.0;
    basis_[i] = first_art + i;
    diag(ii) = art_sign_[i];
    phase_one(static_cast<Eigen::Index>(first_art + i)) = 1.0;
  }
  for (std::size_t i = 0; i < m; ++i) status_[basis_[i]] = Status::Basic;

  tableau_.resize(mi, static_cast<Eigen::Index>(N));
  tableau_.leftCols(static_cast<Eigen::Index>(first_art)) = diag.cwiseInverse().asDiagonal() * form_->A;
  tableau_.rightCols(mi).setZero();
  for (Eigen::Index i = 0; i < mi; ++i) tableau_(i, static_cast<Eigen::Index>(first_art) + i) = art_sign_[static_cast<std::size_t>(i)] / diag(i);
  beta_ = residual.cwiseQuotient(diag);
  pivots_since_refactor_ = 0;

  Result r = primal(phase_one);
  if (r != Result::Optimal) return r == Result::Unbounded ? Result::Numerical : r;

  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis_[i] >= first_art) infeasibility += std::max(0.0, beta_(static_cast<Eigen::Index>(i)));
  }
  if (infeasibility > tol_.feasibility) return Result::Infeasible;

  // Drive remaining artificials out of the basis where a pivot exists.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis_[i] < first_art) continue;
    const auto ii = static_cast<Eigen::Index>(i);
    std::size_t q = kNone;
    double best = 1e-7;
    for (std::size_t j = 0; j < first_art; ++j) {
      if (status_[j] == Status::Basic) continue;
      const double a = std::abs(tableau_(ii, static_cast<Eigen::Index>(j)));
      if (a > best) {
        best = a;
        q = j;
      }
    }
    if (q == kNone) continue;
    const double value = nonbasic_value(q);
    const std::size_t leaving = basis_[i];
    status_[leaving] = Status::AtLower;
    pivot(i, q);
    beta_(ii) = value;
  }
  for (std::size_t i = 0; i < m; ++i) upper_[first_art + i] = 0.0;

  r = primal(form_->cost);
  if (r == Result::Optimal) phase_two_ready_ = true;
  return r;
}

DenseSimplex::Result DenseSimplex::solve() { return cold_solve(); }

DenseSimplex::Result DenseSimplex::resolve() {
  if (!phase_two_ready_) return cold_solve();
  Result r = dual();
  if (r == Result::Optimal) r = primal(form_->cost);
  if (r == Result::Numerical) return cold_solve();
  return r;
}

std::vector<double> DenseSimplex::structural_values() const {
  std::vector<double> x(form_->structural);
  for (std::size_t j = 0; j < form_->structural; ++j) {
    if (status_[j] != Status::Basic) x[j] = nonbasic_value(j);
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i] < form_->structural) x[basis_[i]] = beta_(static_cast<Eigen::Index>(i));
  }
  return x;
}

double DenseSimplex::objective() const {
  const auto x = structural_values();
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += form_->cost(static_cast<Eigen::Index>(j)) * x[j];
  return form_->objective_sign * s;
}

std::vector<double> DenseSimplex::row_duals() const {
  std::vector<double> y(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const double d = reduced_(static_cast<Eigen::Index>(form_->first_artificial + i));
    y[i] = form_->objective_sign * (-art_sign_[i] * d);
  }
  return y;
}

}  // namespace monoinv::milp::detail
