#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "monoinv/encoder.hpp"
#include "monoinv/invariance.hpp"
#include "monoinv/order.hpp"
#include "monoinv/system.hpp"

namespace monoinv {

/// Repeats the certificate's controls; needs no state measurement.
struct OpenLoopPolicy {
  SSequenceCertificate cert;
};

/// Applies the control of the lowest-index box of Ω* containing the state.
struct FeedbackPolicy {
  Rcis rcis;
};

using Policy = std::variant<OpenLoopPolicy, FeedbackPolicy>;

struct Adversary {
  enum class Kind { WorstCase, Uniform };
  Kind kind = Kind::WorstCase;
  std::uint64_t seed = 0;

  static Adversary worst_case() { return {Kind::WorstCase, 0}; }
  /// Each component drawn uniformly from [0, w*_i].
  static Adversary uniform(std::uint64_t seed) { return {Kind::Uniform, seed}; }
};

/// Sets to record membership in. Γ is checked phase-matched: the state at step
/// k is tested against R(x∞_{k mod T}).
struct Monitors {
  std::optional<PolyLowerSet> safe;
  std::optional<BoxUnion> omega;
  std::optional<LimitCycle> cycle;
};

enum class TrajectoryStatus { Completed, LeftRegion };

struct Trajectory {
  std::vector<NonNegVector> states;        ///< steps + 1 entries
  std::vector<Control> controls;           ///< one per step
  std::vector<NonNegVector> disturbances;  ///< one per step
  std::vector<std::size_t> phases;         ///< k mod T per state (0 without a period)
  std::vector<std::optional<bool>> in_safe, in_omega, in_gamma;  ///< per state, empty when not monitored
  TrajectoryStatus status = TrajectoryStatus::Completed;
  /// Period of the open-loop policy, 0 for feedback.
  std::size_t period = 0;
  /// Open-loop start outside R(x*_0): the invariance guarantee does not apply.
  bool guarantee_void = false;
};

/// Rolls the system forward for `steps` steps (>= 1). A feedback policy that
/// finds the state outside Ω* stops the run with status LeftRegion.
Trajectory simulate(const MonotoneSystem& sys, const NonNegVector& x0, const Policy& policy,
                    const Adversary& adversary, std::size_t steps, const Monitors& monitors = {});

struct CertificateReport {
  bool witness_ok = false;  ///< supplied states match the re-simulated witness
  bool safe_ok = false;     ///< x*_k ∈ S for k < T
  bool closure_ok = false;  ///< x*_T ⪯ x*_0
  bool controls_ok = false; ///< every control is in the alphabet and the lengths agree
  double witness_residual = 0.0;
  double safety_residual = 0.0;   ///< max over k < T of the S excess, positive part
  double closure_residual = 0.0;  ///< max_i (x*_T - x*_0)_i, positive part
  std::optional<std::size_t> first_violated_step;
  std::vector<NonNegVector> resimulated;  ///< x*_0 .. x*_T under w*

  bool pass() const noexcept { return witness_ok && safe_ok && closure_ok && controls_ok; }
};

/// Re-simulates the witness from x*_0 under w* and checks the three
/// certificate conditions within tol. When the certificate carries only x*_0
/// the witness comparison is trivially satisfied.
CertificateReport verify_certificate(const MonotoneSystem& sys, const PolyLowerSet& safe,
                                     const SSequenceCertificate& cert, double tol = kDecodeTol);

struct DominanceReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  ///< max over steps of max_i (x_k - x*_k)_i
};

/// Compares each trajectory state with the worst-case run from x*_0 at the
/// same step. Requires an open-loop trajectory with the certificate's period
/// and x_0 ⪯ x*_0; throws std::invalid_argument otherwise.
DominanceReport dominance_check(const MonotoneSystem& sys, const SSequenceCertificate& cert,
                                const Trajectory& traj, double tol = kOrderTol);

/// Positive part of max_i (x - x∞_phase)_i: zero iff x lies in the phase-matched box of Γ.
double gamma_excess(const LimitCycle& cycle, const NonNegVector& x, std::size_t phase);

struct InvarianceReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  ///< smallest-box order excess of the worst successor
};

/// Samples box index p, x ∈ R(x*_p) and w ⪯ w* uniformly and checks that
/// f(x, w, u*_p) stays in Ω*. Deterministic for a given seed.
InvarianceReport check_rcis_invariance(const MonotoneSystem& sys, const Rcis& rcis, std::size_t samples,
                                       std::uint64_t seed, double tol = kDecodeTol);

}  // namespace monoinv
