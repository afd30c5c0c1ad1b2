#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "monoinv/invariance.hpp"
#include "monoinv/switched_affine.hpp"
#include "monoinv/traffic.hpp"

using namespace monoinv;

namespace {

SSequenceCertificate single_step_cert(const MonotoneSystem& sys, NonNegVector x0) {
  SSequenceCertificate cert;
  cert.T = 1;
  cert.controls = {0};
  cert.x_star = {x0, sys.step_worst(x0, 0)};
  return cert;
}

}  // namespace

TEST(FindSSequence, SwitchedIsMinimalAtSeven) {
  const auto loaded = load_switched();
  SearchOptions opts;
  opts.t_max = 10;
  const auto r = find_s_sequence(*loaded.system, loaded.safe_set, opts);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->T, 7u);
  EXPECT_TRUE(r.minimal);
  ASSERT_EQ(r.horizons.size(), 7u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(r.horizons[i].status, HorizonStatus::ProvenInfeasible);
  EXPECT_EQ(r.horizons[6].status, HorizonStatus::Found);
}

TEST(FindSSequence, LaterStartIsNotMinimal) {
  const auto loaded = load_switched();
  SearchOptions opts;
  opts.t_min = 7;
  opts.t_max = 7;
  const auto r = find_s_sequence(*loaded.system, loaded.safe_set, opts);
  ASSERT_TRUE(r.certificate);
  EXPECT_FALSE(r.minimal);
}

TEST(FindSSequence, UnstableSystemHasNone) {
  const auto sys = SwitchedAffineSystem::from_matrices({2.0 * Eigen::MatrixXd::Identity(2, 2)}, NonNegVector{0.1, 0.1});
  const auto safe = PolyLowerSet::rectangle(NonNegVector{1, 1});
  SearchOptions opts;
  opts.t_max = 6;
  opts.objective = Objective::Feasibility;
  const auto r = find_s_sequence(sys, safe, opts);
  EXPECT_FALSE(r.certificate);
  ASSERT_EQ(r.horizons.size(), 6u);
  for (const auto& h : r.horizons) EXPECT_EQ(h.status, HorizonStatus::ProvenInfeasible);
}

TEST(FindSSequence, TrafficAtFiveFirstFeasible) {
  const auto loaded = load_traffic();
  SearchOptions opts;
  opts.t_min = 5;
  opts.t_max = 5;
  opts.objective = Objective::Feasibility;
  const auto r = find_s_sequence(*loaded.system, loaded.safe_set, opts);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->T, 5u);
}

TEST(FindSSequence, BudgetExhaustionIsUnknown) {
  const auto loaded = load_traffic();
  SearchOptions opts;
  opts.t_min = 4;
  opts.t_max = 4;
  opts.objective = Objective::Feasibility;
  opts.node_budget = 50;
  const auto r = find_s_sequence(*loaded.system, loaded.safe_set, opts);
  EXPECT_FALSE(r.certificate);
  ASSERT_EQ(r.horizons.size(), 1u);
  EXPECT_EQ(r.horizons[0].status, HorizonStatus::BudgetUnknown);
}

TEST(FindSSequence, RejectsBadOptions) {
  const auto loaded = load_switched();
  SearchOptions opts;
  opts.t_min = 0;
  EXPECT_THROW(find_s_sequence(*loaded.system, loaded.safe_set, opts), std::invalid_argument);
  opts.t_min = 3;
  opts.t_max = 2;
  EXPECT_THROW(find_s_sequence(*loaded.system, loaded.safe_set, opts), std::invalid_argument);
}

TEST(BuildRcis, Examples) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  const auto rcis = build_rcis(cert);
  EXPECT_EQ(rcis.region.size(), 7u);
  EXPECT_NEAR(rcis.region.boxes()[0].corner()[0], 16.15, 0.005);
  EXPECT_NEAR(rcis.region.boxes()[0].corner()[1], 33.85, 0.005);
  EXPECT_EQ(rcis.policy, cert.controls);

  const auto one = build_rcis(single_step_cert(*sw.system, NonNegVector{1, 1}));
  EXPECT_EQ(one.region.size(), 1u);

  const auto traffic = load_traffic();
  const auto t = build_rcis(load_cert(traffic, "cert_traffic.json"));
  EXPECT_EQ(t.region.size(), 5u);
  EXPECT_EQ(t.region.boxes()[0].dim(), 12u);
}

TEST(FeedbackPolicy, MinimalIndexLookup) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  const auto rcis = build_rcis(cert);
  for (std::size_t p = 0; p < 7; ++p) {
    const auto u = feedback_policy(rcis, cert.x_star[p]);
    ASSERT_TRUE(u);
    const auto first = rcis.region.find(cert.x_star[p]);
    ASSERT_TRUE(first);
    EXPECT_LE(*first, p);
    EXPECT_EQ(*u, cert.controls[*first]);
  }
  EXPECT_EQ(feedback_policy(rcis, NonNegVector{0, 0}), cert.controls[0]);
  EXPECT_FALSE(feedback_policy(rcis, NonNegVector{40, 40}));
}

TEST(OpenLoopPolicy, RepeatsTheSequence) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  const std::vector<std::string> expected{"1", "2", "2", "1", "2", "2", "2"};
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(sw.system->control_label(open_loop_policy(cert, k)), expected[k]);
  EXPECT_EQ(sw.system->control_label(open_loop_policy(cert, 7)), "1");
  EXPECT_EQ(open_loop_policy(cert, 13), cert.controls[6]);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(open_loop_policy(cert, k), open_loop_policy(cert, k + 7));

  const auto traffic = load_traffic();
  const auto tc = load_cert(traffic, "cert_traffic.json");
  EXPECT_EQ(open_loop_policy(tc, 5), tc.controls[0]);
  EXPECT_EQ(traffic.system->control_label(open_loop_policy(tc, 5)), "NS-NS-NS-NS-NS-NS");
}

TEST(LimitCycle, SwitchedExample) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  const auto cycle = compute_limit_cycle(*sw.system, cert);
  ASSERT_EQ(cycle.points.size(), 7u);
  EXPECT_NEAR(cycle.points[0][0], 13.62, 0.01);
  EXPECT_NEAR(cycle.points[0][1], 27.78, 0.01);
  EXPECT_EQ(cycle.monotonicity_violations, 0u);
  EXPECT_LT(cycle.residual, 1e-9);
  // Closing the cycle returns to its first point.
  const auto back = sw.system->step_worst(cycle.points[6], cert.controls[6]);
  EXPECT_LT(max_abs_diff(back, cycle.points[0]), 1e-8);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_TRUE(leq(cycle.points[k], cert.x_star[k]));
}

TEST(LimitCycle, ZeroDynamicsSettlesInOnePeriod) {
  const auto sys = SwitchedAffineSystem::from_matrices({Eigen::MatrixXd::Zero(2, 2)}, NonNegVector{0.2, 0.1});
  const auto cycle = compute_limit_cycle(sys, single_step_cert(sys, NonNegVector{5, 5}));
  EXPECT_EQ(cycle.periods, 1u);
  EXPECT_EQ(cycle.points[0], NonNegVector({0.2, 0.1}));
}

TEST(LimitCycle, TrafficConvergesBelowWitness) {
  const auto traffic = load_traffic();
  const auto cert = load_cert(traffic, "cert_traffic.json");
  const auto cycle = compute_limit_cycle(*traffic.system, cert);
  ASSERT_EQ(cycle.points.size(), 5u);
  EXPECT_EQ(cycle.monotonicity_violations, 0u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_TRUE(leq(cycle.points[k], cert.x_star[k]));
}

TEST(LimitCycle, Errors) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  EXPECT_THROW(compute_limit_cycle(*sw.system, cert, 1e-9, 3), LimitCycleError);
  EXPECT_THROW(compute_limit_cycle(*sw.system, cert, 0.0), std::invalid_argument);
}

TEST(AttractiveSet, ContainedInRcis) {
  const auto sw = load_switched();
  const auto cert = load_cert(sw, "cert_switched.json");
  const auto gamma = build_attractive_set(compute_limit_cycle(*sw.system, cert));
  const auto omega = build_rcis(cert).region;
  EXPECT_EQ(gamma.size(), 7u);
  for (const auto& b : gamma.boxes()) EXPECT_TRUE(omega.contains(b.corner()));

  LimitCycle zero;
  zero.points = {NonNegVector::zeros(2), NonNegVector::zeros(2)};
  const auto g0 = build_attractive_set(zero);
  EXPECT_TRUE(g0.contains(NonNegVector{0, 0}));
  EXPECT_FALSE(g0.contains(NonNegVector{1e-3, 0}));
}

TEST(NecessityBound, Arithmetic) {
  EXPECT_DOUBLE_EQ(necessity_bound(1, 1, 0.1, 2), 100.0);
  EXPECT_DOUBLE_EQ(necessity_bound(5, 0.5, 0.2, 1), 50.0);
  EXPECT_DOUBLE_EQ(necessity_bound(3, 0.7, 0.2, 2) / necessity_bound(3, 0.7, 0.4, 2), 4.0);
  EXPECT_THROW(necessity_bound(0, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(necessity_bound(1, -1, 1, 1), std::invalid_argument);
  EXPECT_THROW(necessity_bound(1, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(necessity_bound(1, 1, 1, 0), std::invalid_argument);
}
