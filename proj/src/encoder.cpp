#include "monoinv/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monoinv {

using milp::Relation;
using milp::Term;

namespace {

std::string idx(std::size_t k, std::size_t i) { return std::to_string(k) + "_" + std::to_string(i); }

void require_horizon(std::size_t T) {
  if (T < 1) throw std::invalid_argument("encode: horizon T must be >= 1");
}

double big_m_for(double bound) {
  return std::isfinite(bound) ? std::min(kBigMCap, 2.0 * bound) : kBigMCap;
}

// Adds a row and records its big-M (0 when the row has none).
void add_row(EncodingArtifacts& a, std::vector<Term> terms, Relation rel, double rhs, std::string name, double m = 0.0) {
  a.model.add_constraint(std::move(terms), rel, rhs, std::move(name));
  a.big_m.push_back(m);
}

void add_closure_and_objective(EncodingArtifacts& a, std::size_t n, Objective objective) {
  for (std::size_t i = 0; i < n; ++i) {
    add_row(a, {{a.state_var[a.T][i], 1.0}, {a.state_var[0][i], -1.0}}, Relation::LessEqual, 0.0, "close_" + std::to_string(i));
  }
  std::vector<Term> obj;
  if (objective == Objective::MaxL1X0) {
    for (std::size_t i = 0; i < n; ++i) obj.push_back({a.state_var[0][i], 1.0});
  }
  a.model.set_objective(std::move(obj), milp::Sense::Maximize);
}

}  // namespace

EncodingArtifacts encode_switched(const SwitchedAffineSystem& sys, const PolyLowerSet& safe, std::size_t T,
                                  Objective objective) {
  require_horizon(T);
  const std::size_t n = sys.state_dim();
  if (safe.dim() != n) throw std::invalid_argument("encode_switched: safe set dimension mismatch");
  const auto& modes = sys.modes();
  const auto& w = sys.disturbance_bound();

  EncodingArtifacts a(EncodingArtifacts::Kind::Switched, T, safe);
  std::vector<double> ub(n);
  for (std::size_t i = 0; i < n; ++i) ub[i] = safe.coordinate_bound(i);

  // |x_{k+1,i} - (A_m x_k)_i - w_i| is at most max(ub_i, sum_j A_ij ub_j + w_i).
  std::vector<std::vector<double>> M(modes.size(), std::vector<double>(n));
  a.state_big_m.assign(n, kBigMCap);
  for (std::size_t m = 0; m < modes.size(); ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      double reach = w[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double aij = modes[m].A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (aij > 0.0) reach += aij * ub[j];
      }
      M[m][i] = big_m_for(std::max(ub[i], reach));
      a.state_big_m[i] = std::min(a.state_big_m[i], M[m][i]);
    }
  }

  a.state_var.resize(T + 1);
  for (std::size_t k = 0; k <= T; ++k) {
    for (std::size_t i = 0; i < n; ++i) a.state_var[k].push_back(a.model.add_variable("x_" + idx(k, i), 0.0, ub[i]));
  }
  a.mode_var.resize(T);
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t m = 0; m < modes.size(); ++m) a.mode_var[k].push_back(a.model.add_binary("b_" + idx(k, m)));
  }

  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t r = 0; r < safe.rows(); ++r) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < n; ++i) {
        const double c = safe.A()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
        if (c != 0.0) terms.push_back({a.state_var[k][i], c});
      }
      add_row(a, std::move(terms), Relation::LessEqual, safe.b()(static_cast<Eigen::Index>(r)), "safe_" + idx(k, r));
    }

    std::vector<Term> onehot;
    for (std::size_t m = 0; m < modes.size(); ++m) onehot.push_back({a.mode_var[k][m], 1.0});
    add_row(a, std::move(onehot), Relation::Equal, 1.0, "mode_" + std::to_string(k));

    for (std::size_t m = 0; m < modes.size(); ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Term> e{{a.state_var[k + 1][i], 1.0}};
        for (std::size_t j = 0; j < n; ++j) {
          const double aij = modes[m].A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (aij != 0.0) e.push_back({a.state_var[k][j], -aij});
        }
        const double bm = M[m][i];
        // b = 1 forces x_{k+1,i} = (A_m x_k)_i + w_i; b = 0 relaxes both sides by M.
        auto upper = e;
        upper.push_back({a.mode_var[k][m], bm});
        add_row(a, std::move(upper), Relation::LessEqual, w[i] + bm, "link_hi_" + idx(k, m) + "_" + std::to_string(i), bm);
        auto lower = std::move(e);
        lower.push_back({a.mode_var[k][m], -bm});
        add_row(a, std::move(lower), Relation::GreaterEqual, w[i] - bm, "link_lo_" + idx(k, m) + "_" + std::to_string(i), bm);
      }
    }
  }
  add_closure_and_objective(a, n, objective);
  return a;
}

EncodingArtifacts encode_traffic(const TrafficNetwork& net, std::size_t T, Objective objective) {
  require_horizon(T);
  const auto& links = net.links();
  const std::size_t L = links.size();
  const std::size_t J = net.junctions().size();

  EncodingArtifacts a(EncodingArtifacts::Kind::Traffic, T, net.safe_set());
  a.state_big_m.resize(L);
  for (std::size_t l = 0; l < L; ++l) a.state_big_m[l] = big_m_for(links[l].safe_bound);

  a.state_var.resize(T + 1);
  for (std::size_t k = 0; k <= T; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      a.state_var[k].push_back(a.model.add_variable("x_" + idx(k, l), 0.0, links[l].safe_bound));
    }
  }
  a.junction_var.resize(T);
  a.selector_var.resize(T);
  a.flow_var.resize(T);
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t j = 0; j < J; ++j) a.junction_var[k].push_back(a.model.add_binary("u_" + idx(k, j)));
    for (std::size_t l = 0; l < L; ++l) a.selector_var[k].push_back(a.model.add_binary("d_" + idx(k, l)));
    for (std::size_t l = 0; l < L; ++l) {
      a.flow_var[k].push_back(a.model.add_variable("z_" + idx(k, l), 0.0, links[l].saturation_flow));
    }
  }

  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      const auto x = a.state_var[k][l];
      const auto z = a.flow_var[k][l];
      const auto d = a.selector_var[k][l];
      const auto u = a.junction_var[k][net.head_junction_index(l)];
      const double c = links[l].saturation_flow;
      const bool ns = links[l].dir == Direction::NS;
      const std::string tag = idx(k, l);
      // Each M is twice the range of the expression it relaxes: z <= c and
      // x - z <= x^s. Green indicator g = u for NS links and 1 - u for EW
      // links; the selector is pinned to 0 on red, where it has no meaning.
      const double m_flow = big_m_for(c);
      const double m_state = big_m_for(links[l].safe_bound);
      add_row(a, {{z, 1.0}, {x, -1.0}}, Relation::LessEqual, 0.0, "z_le_x_" + tag);
      if (ns) {
        add_row(a, {{z, 1.0}, {u, -m_flow}}, Relation::LessEqual, 0.0, "z_red_" + tag, m_flow);
        add_row(a, {{z, 1.0}, {x, -1.0}, {d, m_state}, {u, -m_state}}, Relation::GreaterEqual, -m_state, "z_ge_x_" + tag, m_state);
        add_row(a, {{z, 1.0}, {d, -m_flow}, {u, -m_flow}}, Relation::GreaterEqual, c - 2.0 * m_flow, "z_ge_c_" + tag, m_flow);
        add_row(a, {{d, 1.0}, {u, -1.0}}, Relation::LessEqual, 0.0, "d_le_g_" + tag);
      } else {
        add_row(a, {{z, 1.0}, {u, m_flow}}, Relation::LessEqual, m_flow, "z_red_" + tag, m_flow);
        add_row(a, {{z, 1.0}, {x, -1.0}, {d, m_state}, {u, m_state}}, Relation::GreaterEqual, 0.0, "z_ge_x_" + tag, m_state);
        add_row(a, {{z, 1.0}, {d, -m_flow}, {u, m_flow}}, Relation::GreaterEqual, c - m_flow, "z_ge_c_" + tag, m_flow);
        add_row(a, {{d, 1.0}, {u, 1.0}}, Relation::LessEqual, 1.0, "d_le_g_" + tag);
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<Term> row{{a.state_var[k + 1][l], 1.0}, {a.state_var[k][l], -1.0}, {a.flow_var[k][l], 1.0}};
      for (const auto& t : net.turns()) {
        if (net.link_index(t.to) == l && t.ratio != 0.0) row.push_back({a.flow_var[k][net.link_index(t.from)], -t.ratio});
      }
      add_row(a, std::move(row), Relation::Equal, links[l].disturbance_bound, "update_" + idx(k, l));
    }
  }
  add_closure_and_objective(a, L, objective);
  return a;
}

EncodingArtifacts encode(const MonotoneSystem& sys, const PolyLowerSet& safe, std::size_t T, Objective objective) {
  if (const auto* s = dynamic_cast<const SwitchedAffineSystem*>(&sys)) return encode_switched(*s, safe, T, objective);
  if (const auto* t = dynamic_cast<const TrafficNetwork*>(&sys)) {
    const auto own = t->safe_set();
    if (own.A() != safe.A() || own.b() != safe.b()) {
      throw std::invalid_argument("encode: a traffic network is encoded against its own x^s rectangle");
    }
    return encode_traffic(*t, T, objective);
  }
  throw std::invalid_argument("encode: unsupported system type");
}

SSequenceCertificate decode(const EncodingArtifacts& a, const milp::MilpSolution& sol, const MonotoneSystem& sys) {
  if (!milp::has_solution(sol.status)) throw std::invalid_argument("decode: solution carries no assignment");
  const auto& v = sol.values;
  if (v.size() != a.model.variables().size()) throw std::invalid_argument("decode: assignment size does not match model");
  const std::size_t n = sys.state_dim();
  if (a.state_var.empty() || a.state_var[0].size() != n) throw std::invalid_argument("decode: system does not match encoding");

  SSequenceCertificate cert;
  cert.T = a.T;
  for (std::size_t k = 0; k < a.T; ++k) {
    if (a.kind == EncodingArtifacts::Kind::Switched) {
      std::size_t chosen = 0;
      double total = 0.0;
      for (std::size_t m = 0; m < a.mode_var[k].size(); ++m) {
        const double b = v[a.mode_var[k][m]];
        total += b;
        if (b > v[a.mode_var[k][chosen]]) chosen = m;
      }
      if (std::abs(total - 1.0) > kSolverTol || std::abs(v[a.mode_var[k][chosen]] - 1.0) > kSolverTol) {
        throw DecodeMismatch("decode: mode binaries at step " + std::to_string(k) + " are not one-hot");
      }
      cert.controls.push_back(chosen);
    } else {
      Control u = 0;
      for (std::size_t j = 0; j < a.junction_var[k].size(); ++j) {
        const double b = v[a.junction_var[k][j]];
        if (std::abs(b - std::round(b)) > kSolverTol) {
          throw DecodeMismatch("decode: junction binary at step " + std::to_string(k) + " is fractional");
        }
        if (b > 0.5) u |= Control{1} << j;
      }
      cert.controls.push_back(u);
    }
  }

  auto solver_state = [&](std::size_t k) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = v[a.state_var[k][i]];
    return s;
  };

  // Simulation from the decoded x*_0 is authoritative; the solver's later states are only compared.
  cert.x_star.push_back(NonNegVector::clamped(solver_state(0), kSolverTol));
  for (std::size_t k = 0; k < a.T; ++k) {
    cert.x_star.push_back(sys.step_worst(cert.x_star[k], cert.controls[k]));
    const auto solver = solver_state(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(solver[i] - cert.x_star[k + 1][i]) > kDecodeTol) {
        throw DecodeMismatch("decode: solver state x*_" + std::to_string(k + 1) + "[" + std::to_string(i) +
                             "] = " + std::to_string(solver[i]) + " but simulation gives " +
                             std::to_string(cert.x_star[k + 1][i]));
      }
    }
  }

  for (std::size_t k = 0; k <= a.T; ++k) {
    if (k < a.T && a.safe_set.excess(cert.x_star[k]) > kDecodeTol) {
      throw DecodeMismatch("decode: x*_" + std::to_string(k) + " leaves the safe set");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (cert.x_star[k][i] > 0.5 * a.state_big_m[i] + kDecodeTol) {
        throw DecodeMismatch("decode: state exceeds M/2; big-M relaxation not sound");
      }
    }
  }
  if (order_excess(cert.x_star[a.T], cert.x_star[0]) > kDecodeTol) {
    throw DecodeMismatch("decode: x*_T is not below x*_0");
  }
  return cert;
}

}  // namespace monoinv
