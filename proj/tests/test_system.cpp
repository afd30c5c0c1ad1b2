#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "monoinv/monotone_check.hpp"
#include "monoinv/rng.hpp"
#include "monoinv/switched_affine.hpp"
#include "monoinv/traffic.hpp"

using namespace monoinv;

namespace {

const SwitchedAffineSystem& switched_sys() {
  static const auto loaded = load_switched();
  return dynamic_cast<const SwitchedAffineSystem&>(*loaded.system);
}

const TrafficNetwork& traffic_net() {
  static const auto loaded = load_traffic();
  return dynamic_cast<const TrafficNetwork&>(*loaded.system);
}

// Link 1 (entry) feeds link 2 through junction a; link 2 leaves at junction b.
TrafficNetwork two_link_net(double beta = 0.5) {
  Link l1{1, Direction::EW, "a", std::nullopt, 20.0, 60.0, 5.0, true};
  Link l2{2, Direction::EW, "b", std::string("a"), 20.0, 60.0, 0.0, false};
  return TrafficNetwork({l1, l2}, {"a", "b"}, {{1, 2, beta}});
}

}  // namespace

TEST(StepSwitched, Examples) {
  const auto& sys = switched_sys();
  const auto x1 = step_switched(sys, NonNegVector{16.15, 33.85}, NonNegVector{0.2, 0.1}, 0);
  EXPECT_NEAR(x1[0], 27.81, 1e-12);
  EXPECT_NEAR(x1[1], 20.255, 1e-12);
  EXPECT_EQ(step_switched(sys, NonNegVector{0, 0}, NonNegVector{0, 0}, 1), NonNegVector({0, 0}));
  const auto e = step_switched(sys, NonNegVector{1, 0}, NonNegVector{0, 0}, 1);
  EXPECT_NEAR(e[0], 0.7, 1e-15);
  EXPECT_NEAR(e[1], 0.1, 1e-15);
}

TEST(StepSwitched, Errors) {
  const auto& sys = switched_sys();
  EXPECT_THROW(sys.step(NonNegVector{1, 1}, NonNegVector{0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(sys.step(NonNegVector{1, 1}, NonNegVector{0.3, 0}, 0), std::invalid_argument);
  EXPECT_THROW(sys.control_for_label("3"), std::invalid_argument);
  EXPECT_EQ(sys.control_for_label("2"), 1u);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, -0.1, 0, 1;
  EXPECT_THROW(SwitchedAffineSystem::from_matrices({bad}, NonNegVector{0, 0}), std::invalid_argument);
}

TEST(Outflow, Examples) {
  const auto net = two_link_net();
  const Control a_ew = net.control_from_phases({Direction::EW, Direction::EW});
  const Control a_ns = net.control_from_phases({Direction::NS, Direction::EW});
  EXPECT_DOUBLE_EQ(outflow(net, NonNegVector{48, 0}, a_ew, 0), 20.0);
  EXPECT_DOUBLE_EQ(outflow(net, NonNegVector{14, 0}, a_ew, 0), 14.0);
  EXPECT_DOUBLE_EQ(outflow(net, NonNegVector{48, 0}, a_ns, 0), 0.0);
}

TEST(StepTraffic, EmptyNetworkStaysEmpty) {
  const auto& net = traffic_net();
  const auto zero = NonNegVector::zeros(12);
  for (Control u = 0; u < net.control_count(); ++u) EXPECT_EQ(step_traffic(net, zero, zero, u), zero);
}

TEST(StepTraffic, SingleLinkHandOracle) {
  // Link 2 holds 14 vehicles on red; link 1 sends 20 with beta_12 = 0.7.
  const auto& net = traffic_net();
  std::vector<double> x(12, 0.0);
  x[0] = 48;
  x[1] = 14;
  // Junction a green for EW (link 1), junction b NS so link 2 (EW) is red.
  std::vector<Direction> phases(6, Direction::NS);
  phases[net.junction_index("a")] = Direction::EW;
  const auto next = step_traffic(net, NonNegVector(x), NonNegVector::zeros(12), net.control_from_phases(phases));
  EXPECT_NEAR(next[1], 28.0, 1e-12);
  EXPECT_NEAR(next[0], 28.0, 1e-12);
}

TEST(StepTraffic, BundledPlanFirstStepMatchesForwardOracle) {
  const auto loaded = load_traffic();
  const auto cert = load_cert(loaded, "cert_traffic.json");
  const auto x1 = loaded.system->step_worst(cert.x_star[0], cert.controls[0]);
  // Frozen from an independent forward simulation of the bundled plan.
  const std::vector<double> expected{56, 18, 60, 56, 22.66, 60, 4, 5.27, 15, 54, 24, 24};
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(x1[i], expected[i], 1e-9) << "link " << i + 1;
}

TEST(StepTraffic, RejectsDisturbanceAboveBound) {
  const auto& net = traffic_net();
  std::vector<double> w(12, 0.0);
  w[0] = 8.5;
  EXPECT_THROW(net.step(NonNegVector::zeros(12), NonNegVector(w), 0), std::invalid_argument);
}

TEST(StepTraffic, ConservesOrExitsAndStaysNonNegative) {
  const auto& net = traffic_net();
  SplitMix64 rng(21);
  const auto zero = NonNegVector::zeros(12);
  for (int s = 0; s < 2000; ++s) {
    std::vector<double> x(12);
    for (auto& v : x) v = rng.uniform(0, 80);
    const NonNegVector xv(x);
    const Control u = rng.below(net.control_count());
    const auto next = step_traffic(net, xv, zero, u);
    double before = 0, after = 0;
    for (std::size_t i = 0; i < 12; ++i) {
      before += xv[i];
      after += next[i];
      EXPECT_GE(next[i], 0.0);
      EXPECT_LE(outflow(net, xv, u, i), std::min(xv[i], net.links()[i].saturation_flow));
    }
    EXPECT_LE(after, before + 1e-9);
  }
}

TEST(TrafficNetwork, ValidatesTopologyAndRatios) {
  Link l1{1, Direction::EW, "a", std::nullopt, 20.0, 60.0, 5.0, true};
  Link l2{2, Direction::EW, "b", std::string("a"), 20.0, 60.0, 0.0, false};
  Link l3{3, Direction::NS, "a", std::string("b"), 20.0, 60.0, 0.0, false};
  EXPECT_THROW(TrafficNetwork({l1, l2, l3}, {"a", "b"}, {{1, 3, 0.5}}), std::invalid_argument);
  EXPECT_THROW(TrafficNetwork({l1, l2, l3}, {"a", "b"}, {{2, 3, 0.6}, {2, 3, 0.5}}), std::invalid_argument);
  EXPECT_THROW(TrafficNetwork({l1, l2}, {"a", "b"}, {{1, 2, 1.5}}), std::invalid_argument);
  EXPECT_THROW(TrafficNetwork({l1, l1}, {"a", "b"}, {}), std::invalid_argument);
  EXPECT_NO_THROW(TrafficNetwork({l1, l2, l3}, {"a", "b"}, {{1, 2, 0.5}, {2, 3, 0.5}}));
}

TEST(TrafficNetwork, ControlLabelsFollowSortedJunctions) {
  const auto& net = traffic_net();
  EXPECT_EQ(net.control_count(), 64u);
  const Control u = net.control_from_phases(
      {Direction::NS, Direction::EW, Direction::EW, Direction::NS, Direction::EW, Direction::EW});
  EXPECT_EQ(net.control_label(u), "NS-EW-EW-NS-EW-EW");
  EXPECT_EQ(net.phase(u, 3), Direction::NS);
}

TEST(CooperativeBound, Examples) {
  const auto net = two_link_net(0.5);
  auto r = cooperative_bound_check(net, {{2, 100.0}}, {{1, 2, 0.5}});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].ok);
  EXPECT_DOUBLE_EQ(r[0].limit, 80.0);
  r = cooperative_bound_check(net, {{2, 70.0}}, {{1, 2, 0.5}});
  EXPECT_FALSE(r[0].ok);
  EXPECT_DOUBLE_EQ(r[0].limit, 50.0);
  r = cooperative_bound_check(net, {{1, 70.0}}, {{1, 2, 0.5}});
  EXPECT_TRUE(r[0].ok);
}

TEST(CooperativeBound, ZeroRatioThrows) {
  const auto net = two_link_net(0.5);
  EXPECT_THROW(cooperative_bound_check(net, {{1, 100.0}}, {{2, 1, 0.5}}), std::invalid_argument);
}

TEST(CheckMonotone, BundledSystemsHaveNoViolations) {
  const auto& sys = switched_sys();
  auto rep = check_monotone(sys, 10000, 1, Box(NonNegVector{50, 50}));
  EXPECT_EQ(rep.samples, 10000u);
  EXPECT_EQ(rep.violations, 0u);
  const auto& net = traffic_net();
  rep = check_monotone(net, 10000, 2, Box(net.safe_bounds()));
  EXPECT_EQ(rep.violations, 0u);
}

TEST(CheckMonotone, FlagsNegativeEntry) {
  // The constructor rejects negative matrices, so wrap a mutated step.
  class Mutated final : public MonotoneSystem {
  public:
    std::size_t state_dim() const override { return 2; }
    const NonNegVector& disturbance_bound() const override { return w_; }
    std::size_t control_count() const override { return 1; }
    std::string control_label(Control) const override { return "1"; }
    NonNegVector step(const NonNegVector& x, const NonNegVector& w, Control) const override {
      return NonNegVector::clamped(std::vector<double>{1.5 * x[0] + 0.1 * x[1] + w[0],
                                                       std::max(0.0, 30.0 - 0.2 * x[0] + 0.5 * x[1]) + w[1]},
                                   0.0);
    }

  private:
    NonNegVector w_{0.2, 0.1};
  };
  const auto rep = check_monotone(Mutated{}, 10000, 3, Box(NonNegVector{50, 50}));
  EXPECT_GT(rep.violations, 0u);
  EXPECT_GT(rep.worst_violation, 0.0);
}

TEST(CheckMonotone, ReproducibleForFixedSeed) {
  const auto& net = traffic_net();
  const auto a = check_monotone(net, 2000, 77, Box(net.safe_bounds()));
  const auto b = check_monotone(net, 2000, 77, Box(net.safe_bounds()));
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.worst_violation, b.worst_violation);
}
