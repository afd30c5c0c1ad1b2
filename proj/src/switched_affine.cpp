#include "monoinv/switched_affine.hpp"

#include <stdexcept>

namespace monoinv {

SwitchedAffineSystem::SwitchedAffineSystem(std::vector<Mode> modes, NonNegVector w_star)
    : modes_(std::move(modes)), w_star_(std::move(w_star)) {
  if (modes_.empty()) throw std::invalid_argument("SwitchedAffineSystem: no modes");
  const auto n = static_cast<Eigen::Index>(w_star_.dim());
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const auto& A = modes_[m].A;
    if (A.rows() != n || A.cols() != n) {
      throw std::invalid_argument("SwitchedAffineSystem: mode " + modes_[m].label + " is not " +
                                  std::to_string(n) + "x" + std::to_string(n));
    }
    if (!A.allFinite() || (A.array() < 0.0).any()) {
      throw std::invalid_argument("SwitchedAffineSystem: mode " + modes_[m].label +
                                  " has a negative or non-finite entry");
    }
    for (std::size_t q = 0; q < m; ++q) {
      if (modes_[q].label == modes_[m].label) {
        throw std::invalid_argument("SwitchedAffineSystem: duplicate mode label " + modes_[m].label);
      }
    }
  }
}

SwitchedAffineSystem SwitchedAffineSystem::from_matrices(std::vector<Eigen::MatrixXd> matrices, NonNegVector w_star) {
  std::vector<Mode> modes;
  modes.reserve(matrices.size());
  for (std::size_t m = 0; m < matrices.size(); ++m) modes.push_back({std::to_string(m + 1), std::move(matrices[m])});
  return SwitchedAffineSystem(std::move(modes), std::move(w_star));
}

std::string SwitchedAffineSystem::control_label(Control u) const {
  if (u >= modes_.size()) throw std::invalid_argument("SwitchedAffineSystem: unknown control " + std::to_string(u));
  return modes_[u].label;
}

Control SwitchedAffineSystem::control_for_label(const std::string& label) const {
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    if (modes_[m].label == label) return m;
  }
  throw std::invalid_argument("SwitchedAffineSystem: unknown mode label " + label);
}

NonNegVector SwitchedAffineSystem::step(const NonNegVector& x, const NonNegVector& w, Control u) const {
  if (u >= modes_.size()) throw std::invalid_argument("SwitchedAffineSystem: unknown control " + std::to_string(u));
  if (x.dim() != state_dim() || w.dim() != state_dim()) {
    throw std::invalid_argument("SwitchedAffineSystem: dimension mismatch");
  }
  if (!leq(w, w_star_)) throw std::invalid_argument("SwitchedAffineSystem: disturbance exceeds w*");
  Eigen::VectorXd next = modes_[u].A * x.as_eigen() + w.as_eigen();
  return NonNegVector(std::vector<double>(next.data(), next.data() + next.size()));
}

NonNegVector step_switched(const SwitchedAffineSystem& sys, const NonNegVector& x, const NonNegVector& w, Control u) {
  return sys.step(x, w, u);
}

}  // namespace monoinv
