#pragma once

#include <cstdint>

#include "monoinv/system.hpp"

namespace monoinv {

struct MonotonicityReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Largest max_i (f(x1,w1,u)_i - f(x2,w2,u)_i) seen; <= 0 when no violation.
  double worst_violation = 0.0;
};

/// Randomized test of the cooperative property: draws ordered pairs x1 ⪯ x2 in
/// `domain`, w1 ⪯ w2 in R(w*) and a control, and counts successor pairs that
/// break the order by more than `tol`. Deterministic for a given seed.
MonotonicityReport check_monotone(const MonotoneSystem& sys, std::size_t samples, std::uint64_t seed,
                                  const Box& domain, double tol = kOrderTol);

}  // namespace monoinv
