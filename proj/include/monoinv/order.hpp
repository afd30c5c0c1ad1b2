#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace monoinv {

/// Default tolerance for order comparisons on values produced by plain arithmetic.
inline constexpr double kOrderTol = 1e-9;
/// Tolerance for comparisons involving LP/MILP solver output.
inline constexpr double kSolverTol = 1e-6;

/// A point of the nonnegative orthant. Construction rejects negative or
/// non-finite entries and empty vectors.
class NonNegVector {
public:
  NonNegVector() = default;
  explicit NonNegVector(std::vector<double> entries);
  NonNegVector(std::initializer_list<double> entries);

  /// Zero vector of the given dimension.
  static NonNegVector zeros(std::size_t dim);

  /// Builds a vector from raw values, snapping entries in [-tol, 0) to zero.
  /// Anything more negative still throws.
  static NonNegVector clamped(std::span<const double> values, double tol);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }
  Eigen::Map<const Eigen::VectorXd> as_eigen() const {
    return {entries_.data(), static_cast<Eigen::Index>(entries_.size())};
  }

  friend bool operator==(const NonNegVector&, const NonNegVector&) = default;

private:
  std::vector<double> entries_;
};

/// a ⪯ b entrywise, with a_i <= b_i + tol accepted.
bool leq(const NonNegVector& a, const NonNegVector& b, double tol = kOrderTol);

/// max_i (a_i - b_i); nonpositive iff a ⪯ b.
double order_excess(const NonNegVector& a, const NonNegVector& b);

/// max_i |a_i - b_i|.
double max_abs_diff(const NonNegVector& a, const NonNegVector& b);

/// The box R(corner) = {x ⪰ 0 : x ⪯ corner}.
class Box {
public:
  explicit Box(NonNegVector corner) : corner_(std::move(corner)) {}

  const NonNegVector& corner() const noexcept { return corner_; }
  std::size_t dim() const noexcept { return corner_.dim(); }
  bool contains(const NonNegVector& x, double tol = kOrderTol) const;

private:
  NonNegVector corner_;
};

/// {x ⪰ 0 : A x ⪯ b} with A entrywise nonnegative, hence a lower-set.
class PolyLowerSet {
public:
  PolyLowerSet(Eigen::MatrixXd A, Eigen::VectorXd b);

  /// The rectangle {x : x ⪯ bounds}.
  static PolyLowerSet rectangle(const NonNegVector& bounds);

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(A_.cols()); }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(A_.rows()); }

  bool contains(const NonNegVector& x, double tol = kSolverTol) const;

  /// max_r (A x - b)_r, or -inf without rows. Nonpositive iff x is inside.
  double excess(const NonNegVector& x) const;

  /// Largest value of coordinate i over the set; +inf if unbounded.
  double coordinate_bound(std::size_t i) const;

private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

/// Ordered union of boxes. Membership reports the smallest containing index.
class BoxUnion {
public:
  BoxUnion() = default;
  explicit BoxUnion(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  std::size_t size() const noexcept { return boxes_.size(); }
  bool empty() const noexcept { return boxes_.empty(); }

  std::optional<std::size_t> find(const NonNegVector& x, double tol = kOrderTol) const;
  bool contains(const NonNegVector& x, double tol = kOrderTol) const { return find(x, tol).has_value(); }

private:
  std::vector<Box> boxes_;
};

struct UnionMembership {
  bool member = false;
  std::optional<std::size_t> index;
};

bool box_membership(const Box& s, const NonNegVector& x, double tol = kOrderTol);
bool polyset_membership(const PolyLowerSet& s, const NonNegVector& x, double tol = kSolverTol);
UnionMembership union_membership(const BoxUnion& u, const NonNegVector& x, double tol = kOrderTol);

}  // namespace monoinv
