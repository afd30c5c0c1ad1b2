#pragma once

#include <cstddef>
#include <string>

#include "monoinv/order.hpp"

namespace monoinv {

/// Index into a system's finite control alphabet.
using Control = std::size_t;

/// Discrete-time system x+ = f(x, w, u) on the positive orthant with
/// disturbances in R(w*) and a finite control alphabet. Implementations are
/// expected to be cooperative (order preserving in x and w for every u);
/// check_monotone tests that empirically.
class MonotoneSystem {
public:
  virtual ~MonotoneSystem() = default;

  virtual std::size_t state_dim() const = 0;
  virtual const NonNegVector& disturbance_bound() const = 0;
  virtual std::size_t control_count() const = 0;
  virtual std::string control_label(Control u) const = 0;

  /// Throws std::invalid_argument for an unknown control or a disturbance
  /// outside R(w*).
  virtual NonNegVector step(const NonNegVector& x, const NonNegVector& w, Control u) const = 0;

  /// Worst-case successor f(x, w*, u).
  NonNegVector step_worst(const NonNegVector& x, Control u) const { return step(x, disturbance_bound(), u); }
};

}  // namespace monoinv
