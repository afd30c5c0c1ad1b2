#include "monoinv/monotone_check.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "monoinv/rng.hpp"

namespace monoinv {

namespace {

// Lower point uniform in R(corner); upper point uniform between it and the corner.
std::pair<NonNegVector, NonNegVector> ordered_pair(SplitMix64& rng, const NonNegVector& corner) {
  std::vector<double> lo(corner.dim()), hi(corner.dim());
  for (std::size_t i = 0; i < corner.dim(); ++i) {
    lo[i] = rng.uniform(0.0, corner[i]);
    hi[i] = rng.uniform(lo[i], corner[i]);
  }
  return {NonNegVector(std::move(lo)), NonNegVector(std::move(hi))};
}

}  // namespace

MonotonicityReport check_monotone(const MonotoneSystem& sys, std::size_t samples, std::uint64_t seed,
                                  const Box& domain, double tol) {
  if (samples == 0) throw std::invalid_argument("check_monotone: samples must be >= 1");
  if (domain.dim() != sys.state_dim()) throw std::invalid_argument("check_monotone: domain dimension mismatch");

  SplitMix64 rng(seed);
  MonotonicityReport report;
  report.samples = samples;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    auto [x1, x2] = ordered_pair(rng, domain.corner());
    auto [w1, w2] = ordered_pair(rng, sys.disturbance_bound());
    const Control u = rng.below(sys.control_count());
    const double excess = order_excess(sys.step(x1, w1, u), sys.step(x2, w2, u));
    report.worst_violation = std::max(report.worst_violation, excess);
    if (excess > tol) ++report.violations;
  }
  return report;
}

}  // namespace monoinv
