#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "monoinv/milp.hpp"
#include "monoinv/order.hpp"
#include "monoinv/switched_affine.hpp"
#include "monoinv/traffic.hpp"

namespace monoinv {

enum class Objective { Feasibility, MaxL1X0 };

/// Finite control sequence whose worst-case witness trajectory stays in S and
/// returns below its start: x*_{k+1} = f(x*_k, w*, u*_k), x*_k ∈ S for k < T,
/// x*_T ⪯ x*_0.
struct SSequenceCertificate {
  std::size_t T = 0;
  std::vector<Control> controls;    ///< u*_0 .. u*_{T-1}
  std::vector<NonNegVector> x_star;  ///< x*_0 .. x*_T
};

/// MILP for a fixed horizon plus the index maps needed to read a solution back.
struct EncodingArtifacts {
  enum class Kind { Switched, Traffic };

  EncodingArtifacts(Kind k, std::size_t horizon, PolyLowerSet safe)
      : kind(k), T(horizon), safe_set(std::move(safe)) {}

  Kind kind;
  std::size_t T;
  milp::MilpModel model;
  PolyLowerSet safe_set;
  std::vector<std::vector<std::size_t>> state_var;  ///< [k][i], k = 0..T
  std::vector<std::vector<std::size_t>> mode_var;   ///< switched: [k][m] one-hot
  std::vector<std::vector<std::size_t>> junction_var;  ///< traffic: [k][j], 1 = NS
  std::vector<std::vector<std::size_t>> selector_var;  ///< traffic: [k][l], 1 = flow saturated at c
  std::vector<std::vector<std::size_t>> flow_var;      ///< traffic: [k][l]
  /// Big-M per linking constraint row (0 for rows without one).
  std::vector<double> big_m;
  /// Smallest big-M touching each state coordinate; decoded states must stay
  /// below half of it for the relaxed rows to be sound.
  std::vector<double> state_big_m;
};

/// Raised when a solver assignment does not survive exact re-simulation.
class DecodeMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBigMCap = 1000.0;
inline constexpr double kDecodeTol = 1e-5;

/// One-hot mode binaries per step, big-M links x*_{k+1} to A_m x*_k + w*.
EncodingArtifacts encode_switched(const SwitchedAffineSystem& sys, const PolyLowerSet& safe, std::size_t T,
                                  Objective objective);

/// Junction binaries, per-link flow variables with a saturation selector
/// implementing z = g * min(x, c), and equality state updates.
EncodingArtifacts encode_traffic(const TrafficNetwork& net, std::size_t T, Objective objective);

/// Dispatches on the concrete system type. For a traffic network the safe set
/// must be the network's own rectangle.
EncodingArtifacts encode(const MonotoneSystem& sys, const PolyLowerSet& safe, std::size_t T, Objective objective);

/// Reads the controls and x*_0 out of a solver assignment, re-simulates the
/// witness with the exact dynamics and checks it against the solver's states
/// and the s-sequence conditions. Throws DecodeMismatch on any disagreement.
SSequenceCertificate decode(const EncodingArtifacts& artifacts, const milp::MilpSolution& sol,
                            const MonotoneSystem& sys);

}  // namespace monoinv
