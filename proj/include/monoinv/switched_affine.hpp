#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "monoinv/system.hpp"

namespace monoinv {

/// x+ = A_u x + w with every A_u entrywise nonnegative.
class SwitchedAffineSystem final : public MonotoneSystem {
public:
  struct Mode {
    std::string label;
    Eigen::MatrixXd A;
  };

  SwitchedAffineSystem(std::vector<Mode> modes, NonNegVector w_star);

  /// Modes labelled "1", "2", ... in order.
  static SwitchedAffineSystem from_matrices(std::vector<Eigen::MatrixXd> matrices, NonNegVector w_star);

  std::size_t state_dim() const override { return static_cast<std::size_t>(w_star_.dim()); }
  const NonNegVector& disturbance_bound() const override { return w_star_; }
  std::size_t control_count() const override { return modes_.size(); }
  std::string control_label(Control u) const override;
  NonNegVector step(const NonNegVector& x, const NonNegVector& w, Control u) const override;

  const std::vector<Mode>& modes() const noexcept { return modes_; }
  /// Control index for a mode label; throws if unknown.
  Control control_for_label(const std::string& label) const;

private:
  std::vector<Mode> modes_;
  NonNegVector w_star_;
};

/// Operation-level entry point: A_u x + w.
NonNegVector step_switched(const SwitchedAffineSystem& sys, const NonNegVector& x, const NonNegVector& w, Control u);

}  // namespace monoinv
