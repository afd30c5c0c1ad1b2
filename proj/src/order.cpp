#include "monoinv/order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace monoinv {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

void validate_entries(const std::vector<double>& e) {
  if (e.empty()) throw std::invalid_argument("NonNegVector: empty vector");
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!std::isfinite(e[i]) || e[i] < 0.0) {
      throw std::invalid_argument("NonNegVector: entry " + std::to_string(i) + " = " +
                                  std::to_string(e[i]) + " is not a finite nonnegative number");
    }
  }
}

}  // namespace

NonNegVector::NonNegVector(std::vector<double> entries) : entries_(std::move(entries)) {
  validate_entries(entries_);
}

NonNegVector::NonNegVector(std::initializer_list<double> entries) : entries_(entries) {
  validate_entries(entries_);
}

NonNegVector NonNegVector::zeros(std::size_t dim) { return NonNegVector(std::vector<double>(dim, 0.0)); }

NonNegVector NonNegVector::clamped(std::span<const double> values, double tol) {
  std::vector<double> v(values.begin(), values.end());
  for (auto& e : v) {
    if (e < 0.0 && e >= -tol) e = 0.0;
  }
  return NonNegVector(std::move(v));
}

bool leq(const NonNegVector& a, const NonNegVector& b, double tol) {
  require_same_dim(a.dim(), b.dim(), "leq");
  if (tol < 0.0) throw std::invalid_argument("leq: negative tolerance");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] > b[i] + tol) return false;
  }
  return true;
}

double order_excess(const NonNegVector& a, const NonNegVector& b) {
  require_same_dim(a.dim(), b.dim(), "order_excess");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, a[i] - b[i]);
  return worst;
}

double max_abs_diff(const NonNegVector& a, const NonNegVector& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

bool Box::contains(const NonNegVector& x, double tol) const { return leq(x, corner_, tol); }

PolyLowerSet::PolyLowerSet(Eigen::MatrixXd A, Eigen::VectorXd b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.cols() == 0) throw std::invalid_argument("PolyLowerSet: zero-dimensional set");
  if (A_.rows() != b_.size()) throw std::invalid_argument("PolyLowerSet: A and b row counts differ");
  if (!A_.allFinite() || !b_.allFinite()) throw std::invalid_argument("PolyLowerSet: non-finite entry");
  if ((A_.array() < 0.0).any()) throw std::invalid_argument("PolyLowerSet: A has a negative entry");
  if ((b_.array() < 0.0).any()) throw std::invalid_argument("PolyLowerSet: b has a negative entry");
}

PolyLowerSet PolyLowerSet::rectangle(const NonNegVector& bounds) {
  const auto n = static_cast<Eigen::Index>(bounds.dim());
  return PolyLowerSet(Eigen::MatrixXd::Identity(n, n), bounds.as_eigen());
}

double PolyLowerSet::excess(const NonNegVector& x) const {
  require_same_dim(dim(), x.dim(), "PolyLowerSet");
  if (A_.rows() == 0) return -std::numeric_limits<double>::infinity();
  return (A_ * x.as_eigen() - b_).maxCoeff();
}

bool PolyLowerSet::contains(const NonNegVector& x, double tol) const {
  // x ⪰ 0 holds by construction of NonNegVector.
  return excess(x) <= tol;
}

double PolyLowerSet::coordinate_bound(std::size_t i) const {
  if (i >= dim()) throw std::out_of_range("PolyLowerSet::coordinate_bound");
  // With A ⪰ 0 the other coordinates can sit at zero, so the bound is row-wise.
  double bound = std::numeric_limits<double>::infinity();
  const auto col = static_cast<Eigen::Index>(i);
  for (Eigen::Index r = 0; r < A_.rows(); ++r) {
    if (A_(r, col) > 0.0) bound = std::min(bound, b_(r) / A_(r, col));
  }
  return bound;
}

BoxUnion::BoxUnion(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
  for (const auto& b : boxes_) require_same_dim(b.dim(), boxes_.front().dim(), "BoxUnion");
}

std::optional<std::size_t> BoxUnion::find(const NonNegVector& x, double tol) const {
  for (std::size_t p = 0; p < boxes_.size(); ++p) {
    if (boxes_[p].contains(x, tol)) return p;
  }
  return std::nullopt;
}

bool box_membership(const Box& s, const NonNegVector& x, double tol) { return s.contains(x, tol); }

bool polyset_membership(const PolyLowerSet& s, const NonNegVector& x, double tol) { return s.contains(x, tol); }

UnionMembership union_membership(const BoxUnion& u, const NonNegVector& x, double tol) {
  auto idx = u.find(x, tol);
  return {idx.has_value(), idx};
}

}  // namespace monoinv
