#include "monoinv/simulate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "monoinv/rng.hpp"

namespace monoinv {

namespace {

NonNegVector draw_uniform(SplitMix64& rng, const NonNegVector& upper) {
  std::vector<double> v(upper.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(0.0, upper[i]);
  return NonNegVector(std::move(v));
}

}  // namespace

Trajectory simulate(const MonotoneSystem& sys, const NonNegVector& x0, const Policy& policy,
                    const Adversary& adversary, std::size_t steps, const Monitors& monitors) {
  if (steps == 0) throw std::invalid_argument("simulate: steps must be at least 1");
  if (x0.dim() != sys.state_dim()) throw std::invalid_argument("simulate: x0 has the wrong dimension");

  const auto* open_loop = std::get_if<OpenLoopPolicy>(&policy);
  const auto* feedback = std::get_if<FeedbackPolicy>(&policy);
  Trajectory traj;
  if (open_loop) {
    if (open_loop->cert.T == 0 || open_loop->cert.controls.size() != open_loop->cert.T) {
      throw std::invalid_argument("simulate: malformed certificate");
    }
    traj.period = open_loop->cert.T;
    traj.guarantee_void = !open_loop->cert.x_star.empty() && !leq(x0, open_loop->cert.x_star[0]);
  }
  if (monitors.cycle && monitors.cycle->points.empty()) throw std::invalid_argument("simulate: empty limit cycle");

  SplitMix64 rng(adversary.seed);
  auto record = [&](const NonNegVector& x, std::size_t k) {
    const std::size_t phase = traj.period ? k % traj.period : 0;
    traj.states.push_back(x);
    traj.phases.push_back(phase);
    traj.in_safe.push_back(monitors.safe ? std::optional<bool>(monitors.safe->contains(x)) : std::nullopt);
    traj.in_omega.push_back(monitors.omega ? std::optional<bool>(monitors.omega->contains(x)) : std::nullopt);
    std::optional<bool> gamma;
    if (monitors.cycle) {
      const auto& pts = monitors.cycle->points;
      gamma = traj.period ? leq(x, pts[phase % pts.size()]) : build_attractive_set(*monitors.cycle).contains(x);
    }
    traj.in_gamma.push_back(gamma);
  };

  NonNegVector x = x0;
  record(x, 0);
  for (std::size_t k = 0; k < steps; ++k) {
    Control u;
    if (open_loop) {
      u = open_loop_policy(open_loop->cert, k);
    } else {
      const auto c = feedback_policy(feedback->rcis, x);
      if (!c) {
        traj.status = TrajectoryStatus::LeftRegion;
        break;
      }
      u = *c;
    }
    NonNegVector w = adversary.kind == Adversary::Kind::WorstCase ? sys.disturbance_bound()
                                                                  : draw_uniform(rng, sys.disturbance_bound());
    x = sys.step(x, w, u);
    traj.controls.push_back(u);
    traj.disturbances.push_back(std::move(w));
    record(x, k + 1);
  }
  return traj;
}

CertificateReport verify_certificate(const MonotoneSystem& sys, const PolyLowerSet& safe,
                                     const SSequenceCertificate& cert, double tol) {
  CertificateReport rep;
  const std::size_t T = cert.T;
  auto flag_step = [&](std::size_t k) {
    if (!rep.first_violated_step || k < *rep.first_violated_step) rep.first_violated_step = k;
  };

  rep.controls_ok = T > 0 && cert.controls.size() == T && !cert.x_star.empty() &&
                    (cert.x_star.size() == 1 || cert.x_star.size() == T + 1) &&
                    cert.x_star[0].dim() == sys.state_dim() && safe.dim() == sys.state_dim();
  if (!rep.controls_ok) {
    rep.first_violated_step = 0;
    return rep;
  }
  for (std::size_t k = 0; k < T; ++k) {
    if (cert.controls[k] >= sys.control_count()) {
      rep.controls_ok = false;
      flag_step(k);
      break;
    }
  }

  rep.resimulated.push_back(cert.x_star[0]);
  rep.witness_ok = true;
  rep.safe_ok = true;
  for (std::size_t k = 0; k < T && rep.controls_ok; ++k) {
    const auto& xk = rep.resimulated.back();
    const double excess = std::max(0.0, safe.excess(xk));
    rep.safety_residual = std::max(rep.safety_residual, excess);
    if (excess > tol) {
      rep.safe_ok = false;
      flag_step(k);
    }
    rep.resimulated.push_back(sys.step_worst(xk, cert.controls[k]));
    if (cert.x_star.size() == T + 1) {
      const double diff = max_abs_diff(rep.resimulated.back(), cert.x_star[k + 1]);
      rep.witness_residual = std::max(rep.witness_residual, diff);
      if (diff > tol) {
        rep.witness_ok = false;
        flag_step(k + 1);
      }
    }
  }
  if (!rep.controls_ok) {
    rep.witness_ok = rep.safe_ok = false;
    return rep;
  }
  rep.closure_residual = std::max(0.0, order_excess(rep.resimulated[T], rep.resimulated[0]));
  rep.closure_ok = rep.closure_residual <= tol;
  if (!rep.closure_ok) flag_step(T);
  return rep;
}

DominanceReport dominance_check(const MonotoneSystem& sys, const SSequenceCertificate& cert,
                                const Trajectory& traj, double tol) {
  if (cert.T == 0 || cert.x_star.empty()) throw std::invalid_argument("dominance_check: malformed certificate");
  if (traj.states.empty()) throw std::invalid_argument("dominance_check: empty trajectory");
  if (traj.period != cert.T) {
    throw std::invalid_argument("dominance_check: trajectory period does not match the certificate");
  }
  for (std::size_t k = 0; k < traj.phases.size(); ++k) {
    if (traj.phases[k] != k % cert.T || (k < traj.controls.size() && traj.controls[k] != cert.controls[k % cert.T])) {
      throw std::invalid_argument("dominance_check: trajectory is not phase-aligned with the certificate");
    }
  }
  if (!leq(traj.states[0], cert.x_star[0], tol)) {
    throw std::invalid_argument("dominance_check: x0 is not below x*_0");
  }

  DominanceReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  NonNegVector witness = cert.x_star[0];
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double excess = order_excess(traj.states[k], witness);
    rep.worst_excess = std::max(rep.worst_excess, excess);
    ++rep.checked;
    if (excess > tol) ++rep.violations;
    if (k < traj.controls.size()) witness = sys.step_worst(witness, traj.controls[k]);
  }
  return rep;
}

double gamma_excess(const LimitCycle& cycle, const NonNegVector& x, std::size_t phase) {
  if (cycle.points.empty()) throw std::invalid_argument("gamma_excess: empty limit cycle");
  return std::max(0.0, order_excess(x, cycle.points[phase % cycle.points.size()]));
}

InvarianceReport check_rcis_invariance(const MonotoneSystem& sys, const Rcis& rcis, std::size_t samples,
                                       std::uint64_t seed, double tol) {
  if (rcis.region.empty()) throw std::invalid_argument("check_rcis_invariance: empty region");
  SplitMix64 rng(seed);
  InvarianceReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const auto& boxes = rcis.region.boxes();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto p = static_cast<std::size_t>(rng.below(boxes.size()));
    // One draw in four takes the extreme pair (corner, w*).
    const bool extreme = rng.below(4) == 0;
    const NonNegVector x = extreme ? boxes[p].corner() : draw_uniform(rng, boxes[p].corner());
    const NonNegVector w = extreme ? sys.disturbance_bound() : draw_uniform(rng, sys.disturbance_bound());
    const NonNegVector next = sys.step(x, w, rcis.policy[p]);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : boxes) best = std::min(best, order_excess(next, b.corner()));
    rep.worst_excess = std::max(rep.worst_excess, best);
    ++rep.samples;
    if (best > tol) ++rep.violations;
  }
  return rep;
}

}  // namespace monoinv
