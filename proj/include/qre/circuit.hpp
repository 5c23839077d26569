// Copyright 2026 The qre authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "qre/grouping.hpp"
#include "qre/pauli.hpp"

namespace qre {

// Gate set {arbitrary single-qubit U, CNOT}.
struct Gate {
  enum class Kind { Single, Cnot };
  Kind kind = Kind::Single;
  int q0 = 0;           // qubit (Single) or control (Cnot)
  int q1 = 0;           // target (Cnot)
  Eigen::Matrix2cd u;   // Single only

  static Gate single(int q, const Eigen::Matrix2cd& u) {
    if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("single-qubit gate matrix is not unitary");
    Gate g;
    g.kind = Kind::Single;
    g.q0 = q;
    g.u = u;
    return g;
  }

  static Gate cnot(int control, int target) {
    if (control == target)
      throw std::invalid_argument("CNOT control and target must differ");
    Gate g;
    g.kind = Kind::Cnot;
    g.q0 = control;
    g.q1 = target;
    return g;
  }
};

struct Circuit {
  int n = 0;
  double global_phase = 0.0;
  std::vector<Gate> gates;

  void push(const Gate& g) {
    int hi = g.kind == Gate::Kind::Cnot ? std::max(g.q0, g.q1) : g.q0;
    int lo = g.kind == Gate::Kind::Cnot ? std::min(g.q0, g.q1) : g.q0;
    if (lo < 0 || hi >= n) throw std::out_of_range("gate operand out of range");
    gates.push_back(g);
  }

  void append(const Circuit& other) {
    if (other.n != n) throw std::invalid_argument("circuit size mismatch");
    global_phase += other.global_phase;
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }
};

struct GateCount {
  int64_t n_1q = 0;
  int64_t n_2q = 0;
  int64_t depth = 0;
};

inline GateCount count_gates(const Circuit& c) {
  GateCount gc;
  std::vector<int64_t> qubit_depth(c.n, 0);
  for (const auto& g : c.gates) {
    if (g.kind == Gate::Kind::Single) {
      ++gc.n_1q;
      qubit_depth[g.q0] += 1;
    } else {
      ++gc.n_2q;
      int64_t d = std::max(qubit_depth[g.q0], qubit_depth[g.q1]) + 1;
      qubit_depth[g.q0] = qubit_depth[g.q1] = d;
    }
  }
  for (int64_t d : qubit_depth) gc.depth = std::max(gc.depth, d);
  return gc;
}

// Two-qubit gate estimate for n_T controlled Trotter steps: each single-qubit
// gate controls with at most 3 CNOTs, each CNOT becomes a Toffoli at most 6.
inline int64_t controlled_trotter_cost(int64_t n_t, const GateCount& base) {
  if (n_t < 1) throw std::invalid_argument("n_T must be >= 1");
  return n_t * (3 * base.n_1q + 6 * base.n_2q);
}

namespace detail {

inline Eigen::Matrix2cd hadamard_matrix() {
  Eigen::Matrix2cd h;
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// V with V Y V^dag = Z (basis change for Y), V = H S^dag.
inline Eigen::Matrix2cd y_basis_matrix() {
  Eigen::Matrix2cd v;
  double s = 1.0 / std::sqrt(2.0);
  v << std::complex<double>(s, 0), std::complex<double>(0, -s),
       std::complex<double>(s, 0), std::complex<double>(0, s);
  return v;
}

inline Eigen::Matrix2cd rz_matrix(double theta) {
  // exp(-i theta Z / 2), no extra global phase
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(std::complex<double>(0, -theta / 2));
  m(1, 1) = std::exp(std::complex<double>(0, theta / 2));
  return m;
}

}  // namespace detail

// Circuit for exp(-i * coefficient * angle_scale * word): basis change onto Z,
// CNOT ladder to the highest support qubit, Rz, uncompute.  Exactly
// 2*(weight-1) CNOTs.
inline Circuit synth_pauli_exponential(int n, const PauliTerm& term,
                                       double angle_scale) {
  if (term.word.is_identity())
    throw std::invalid_argument("cannot synthesize an identity Pauli exponential");
  if (term.word.n != n) throw std::invalid_argument("word size mismatch");
  double theta = term.coefficient * angle_scale;
  Circuit c;
  c.n = n;
  std::vector<int> support;
  for (int q = 0; q < n; ++q) {
    if (term.word.letter(q) != PauliLetter::I) support.push_back(q);
  }
  const auto h = detail::hadamard_matrix();
  const auto vy = detail::y_basis_matrix();
  for (int q : support) {
    switch (term.word.letter(q)) {
      case PauliLetter::X: c.push(Gate::single(q, h)); break;
      case PauliLetter::Y: c.push(Gate::single(q, vy)); break;
      default: break;
    }
  }
  for (size_t k = 0; k + 1 < support.size(); ++k) {
    c.push(Gate::cnot(support[k], support[k + 1]));
  }
  c.push(Gate::single(support.back(), detail::rz_matrix(2.0 * theta)));
  for (size_t k = support.size() - 1; k-- > 0;) {
    c.push(Gate::cnot(support[k], support[k + 1]));
  }
  for (int q : support) {
    switch (term.word.letter(q)) {
      case PauliLetter::X: c.push(Gate::single(q, h)); break;
      case PauliLetter::Y: c.push(Gate::single(q, vy.adjoint())); break;
      default: break;
    }
  }
  return c;
}

// Peephole pass: cancels adjacent identical CNOT pairs and merges adjacent
// single-qubit gates (commuting past gates on disjoint qubits).  Preserves the
// unitary exactly; never increases gate counts.
inline void peephole_optimize(Circuit& c, double identity_tol = 1e-12) {
  bool changed = true;
  auto touches = [](const Gate& g, int q) {
    return g.q0 == q || (g.kind == Gate::Kind::Cnot && g.q1 == q);
  };
  while (changed) {
    changed = false;
    std::vector<bool> removed(c.gates.size(), false);
    for (size_t i = 0; i < c.gates.size(); ++i) {
      if (removed[i]) continue;
      Gate& gi = c.gates[i];
      // find the next live gate sharing a qubit with gi
      for (size_t j = i + 1; j < c.gates.size(); ++j) {
        if (removed[j]) continue;
        Gate& gj = c.gates[j];
        bool overlap = touches(gj, gi.q0) ||
                       (gi.kind == Gate::Kind::Cnot && touches(gj, gi.q1));
        if (!overlap) continue;
        if (gi.kind == Gate::Kind::Cnot && gj.kind == Gate::Kind::Cnot &&
            gi.q0 == gj.q0 && gi.q1 == gj.q1) {
          removed[i] = removed[j] = true;
          changed = true;
        } else if (gi.kind == Gate::Kind::Single && gj.kind == Gate::Kind::Single &&
                   gi.q0 == gj.q0) {
          gj.u = (gj.u * gi.u).eval();
          removed[i] = true;
          changed = true;
        }
        break;
      }
    }
    if (changed) {
      std::vector<Gate> kept;
      kept.reserve(c.gates.size());
      for (size_t i = 0; i < c.gates.size(); ++i) {
        if (!removed[i]) kept.push_back(c.gates[i]);
      }
      c.gates = std::move(kept);
    }
    // strip single-qubit gates that reduced to a global phase
    for (size_t i = 0; i < c.gates.size(); ++i) {
      Gate& g = c.gates[i];
      if (g.kind != Gate::Kind::Single) continue;
      std::complex<double> d = g.u(0, 0);
      if (std::abs(g.u(0, 1)) < identity_tol && std::abs(g.u(1, 0)) < identity_tol &&
          std::abs(g.u(1, 1) - d) < identity_tol && std::abs(std::abs(d) - 1.0) < identity_tol) {
        c.global_phase += std::arg(d);
        c.gates.erase(c.gates.begin() + static_cast<ptrdiff_t>(i));
        --i;
        changed = true;
      }
    }
  }
}

enum class TrotterStrategy { Naive, Grouped, Cancel };

// First-order Trotter circuit for exp(-iHt) with r steps.  Naive keeps the
// Hamiltonian term order; grouped orders terms by commuting group (full
// relation); cancel additionally runs the peephole pass.
inline Circuit synth_trotter_step(const PauliSum& h, double t, int r,
                                  TrotterStrategy strategy) {
  if (r < 1) throw std::invalid_argument("Trotter step count must be >= 1");
  if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
  Circuit c;
  c.n = h.n();
  c.global_phase = -h.identity_offset() * t;
  std::vector<size_t> order;
  if (strategy == TrotterStrategy::Naive) {
    order.resize(h.num_terms());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  } else {
    auto groups = sorted_insertion_group(h, CommutationRelation::Full);
    for (const auto& g : groups.groups) order.insert(order.end(), g.begin(), g.end());
  }
  Circuit step;
  step.n = h.n();
  for (size_t idx : order) {
    step.append(synth_pauli_exponential(h.n(), h.terms()[idx], t / r));
  }
  for (int k = 0; k < r; ++k) c.gates.insert(c.gates.end(), step.gates.begin(), step.gates.end());
  if (strategy == TrotterStrategy::Cancel) peephole_optimize(c);
  return c;
}

// ---- routing -------------------------------------------------------------

struct CouplingGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;

  static CouplingGraph from_edges(int n, std::vector<std::pair<int, int>> edges) {
    CouplingGraph g;
    g.n = n;
    g.adjacency.resize(n);
    for (auto [a, b] : edges) {
      if (a == b) throw std::invalid_argument("self-loop in coupling graph");
      if (a < 0 || b < 0 || a >= n || b >= n)
        throw std::invalid_argument("coupling edge out of range");
      g.adjacency[a].push_back(b);
      g.adjacency[b].push_back(a);
    }
    g.edges = std::move(edges);
    if (!g.connected()) throw std::invalid_argument("coupling graph is not connected");
    return g;
  }

  bool connected() const {
    if (n == 0) return true;
    std::vector<bool> seen(n, false);
    std::deque<int> queue{0};
    seen[0] = true;
    int count = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adjacency[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          queue.push_back(w);
        }
      }
    }
    return count == n;
  }

  bool has_edge(int a, int b) const {
    for (int w : adjacency[a]) {
      if (w == b) return true;
    }
    return false;
  }

  std::vector<int> shortest_path(int from, int to) const {
    std::vector<int> prev(n, -1);
    std::deque<int> queue{from};
    prev[from] = from;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      if (v == to) break;
      for (int w : adjacency[v]) {
        if (prev[w] < 0) {
          prev[w] = v;
          queue.push_back(w);
        }
      }
    }
    std::vector<int> path;
    for (int v = to; v != from; v = prev[v]) path.push_back(v);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  }
};

// Standard heavy-hex lattice: `rows` horizontal lines of 4*cols+1 qubits with
// bridge qubits every four columns, offset by two on alternating rows.
// Degree <= 3, connected.
inline CouplingGraph heavy_hex(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("heavy_hex extents must be >= 1");
  int row_len = 4 * cols + 1;
  std::vector<std::pair<int, int>> edges;
  int next = rows * row_len;
  auto rq = [&](int r, int c) { return r * row_len + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < row_len; ++c) edges.emplace_back(rq(r, c), rq(r, c + 1));
  }
  for (int r = 0; r + 1 < rows; ++r) {
    int offset = (r % 2 == 0) ? 0 : 2;
    for (int c = offset; c < row_len; c += 4) {
      int bridge = next++;
      edges.emplace_back(rq(r, c), bridge);
      edges.emplace_back(bridge, rq(r + 1, c));
    }
  }
  return CouplingGraph::from_edges(next, std::move(edges));
}

struct RoutingResult {
  Circuit circuit;                 // every CNOT on a coupling edge
  std::vector<int> final_layout;   // logical qubit -> physical qubit
};

// Greedy router: SWAPs (3 CNOTs) along BFS shortest paths, no lookahead.
inline RoutingResult route(const Circuit& c, const CouplingGraph& g) {
  if (g.n < c.n) throw std::invalid_argument("coupling graph smaller than circuit");
  std::vector<int> phys_of(c.n);
  for (int q = 0; q < c.n; ++q) phys_of[q] = q;
  std::vector<int> log_of(g.n, -1);
  for (int q = 0; q < c.n; ++q) log_of[q] = q;
  RoutingResult result;
  result.circuit.n = g.n;
  result.circuit.global_phase = c.global_phase;
  auto emit_swap = [&](int a, int b) {
    result.circuit.push(Gate::cnot(a, b));
    result.circuit.push(Gate::cnot(b, a));
    result.circuit.push(Gate::cnot(a, b));
    int la = log_of[a], lb = log_of[b];
    log_of[a] = lb;
    log_of[b] = la;
    if (la >= 0) phys_of[la] = b;
    if (lb >= 0) phys_of[lb] = a;
  };
  for (const auto& gate : c.gates) {
    if (gate.kind == Gate::Kind::Single) {
      result.circuit.push(Gate::single(phys_of[gate.q0], gate.u));
      continue;
    }
    int pc = phys_of[gate.q0], pt = phys_of[gate.q1];
    if (!g.has_edge(pc, pt)) {
      auto path = g.shortest_path(pc, pt);
      // move the control along the path until adjacent to the target
      for (size_t k = 0; k + 2 < path.size(); ++k) emit_swap(path[k], path[k + 1]);
      pc = phys_of[gate.q0];
      pt = phys_of[gate.q1];
    }
    result.circuit.push(Gate::cnot(pc, pt));
  }
  result.final_layout = std::move(phys_of);
  return result;
}

// ---- text export ---------------------------------------------------------
//
//   qubits <n>
//   GPHASE <angle>                        (omitted when zero)
//   U <q> <8 floats row-major re im>
//   CNOT <control> <target>

inline void export_circuit(const Circuit& c, std::ostream& out) {
  out << "qubits " << c.n << "\n";
  char buf[512];
  if (c.global_phase != 0.0) {
    std::snprintf(buf, sizeof(buf), "GPHASE %.17g\n", c.global_phase);
    out << buf;
  }
  for (const auto& g : c.gates) {
    if (g.kind == Gate::Kind::Cnot) {
      out << "CNOT " << g.q0 << " " << g.q1 << "\n";
    } else {
      std::snprintf(buf, sizeof(buf),
                    "U %d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", g.q0,
                    g.u(0, 0).real(), g.u(0, 0).imag(), g.u(0, 1).real(),
                    g.u(0, 1).imag(), g.u(1, 0).real(), g.u(1, 0).imag(),
                    g.u(1, 1).real(), g.u(1, 1).imag());
      out << buf;
    }
  }
}

}  // namespace qre
