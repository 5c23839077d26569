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

#include <optional>
#include <string>
#include <vector>

#include "qre/circuit.hpp"
#include "qre/lbfgs.hpp"
#include "qre/sim.hpp"

namespace qre {

// Hermitian generator G; the ansatz factor is exp(i theta G).
struct PoolOperator {
  PauliSum generator;
  std::string label;
};

// Qubit-excitation pool: singles (X_i Y_j - Y_i X_j)/2 for i<j and the
// standard eight-term doubles on four distinct qubits.
inline std::vector<PoolOperator> build_qe_pool(int n) {
  if (n < 2) throw std::invalid_argument("pool requires at least two qubits");
  std::vector<PoolOperator> pool;
  auto word = [&](std::initializer_list<std::pair<int, PauliLetter>> letters) {
    PauliWord w = PauliWord::identity(n);
    for (auto [q, p] : letters) w.set(q, p);
    return w;
  };
  using PL = PauliLetter;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      PauliSum g(n);
      g.add(0.5, word({{i, PL::X}, {j, PL::Y}}));
      g.add(-0.5, word({{i, PL::Y}, {j, PL::X}}));
      g.normalize();
      pool.push_back({std::move(g), "s(" + std::to_string(i) + "," + std::to_string(j) + ")"});
    }
  }
  // doubles G_ijkl over distinct i<j, k<l with (i,j) < (k,l)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
          if (k == i || k == j || l == i || l == j) continue;
          PauliSum g(n);
          auto add = [&](double c, PL a, PL b, PL cc, PL d) {
            g.add(c / 8.0, word({{i, a}, {j, b}, {k, cc}, {l, d}}));
          };
          add(+1, PL::X, PL::Y, PL::X, PL::X);
          add(+1, PL::Y, PL::X, PL::X, PL::X);
          add(+1, PL::Y, PL::Y, PL::Y, PL::X);
          add(+1, PL::Y, PL::Y, PL::X, PL::Y);
          add(-1, PL::X, PL::X, PL::Y, PL::X);
          add(-1, PL::X, PL::X, PL::X, PL::Y);
          add(-1, PL::Y, PL::X, PL::Y, PL::Y);
          add(-1, PL::X, PL::Y, PL::Y, PL::Y);
          g.normalize();
          pool.push_back({std::move(g), "d(" + std::to_string(i) + "," + std::to_string(j) +
                                            ";" + std::to_string(k) + "," +
                                            std::to_string(l) + ")"});
        }
      }
    }
  }
  return pool;
}

// exp(i theta G)|s> applied term by term; valid because every generator's
// Pauli terms mutually commute and each word squares to identity.
inline StateVector apply_pool_rotation(const StateVector& s, const PoolOperator& op,
                                       double theta) {
  StateVector out = s;
  for (const auto& term : op.generator.terms()) {
    double angle = theta * term.coefficient;
    Eigen::VectorXcd rotated = std::cos(angle) * out.amplitudes;
    rotated += std::complex<double>(0, std::sin(angle)) *
               apply_word(term.word, out.amplitudes);
    out.amplitudes = std::move(rotated);
  }
  return out;
}

// <state| [H, iG] |state> = -2 Im <H state | G state>; the energy derivative
// at theta = 0 for appending exp(i theta G).
inline double operator_gradient(const PauliSum& h, const StateVector& state,
                                const PoolOperator& op) {
  if (state.n != h.n()) throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXcd h_psi = apply_sum(h, state.amplitudes);
  Eigen::VectorXcd g_psi = apply_sum(op.generator, state.amplitudes);
  return -2.0 * h_psi.dot(g_psi).imag();
}

struct AdaptStop {
  double grad_tol = 1e-3;
  std::optional<double> epsilon_target;     // |E - reference_energy| target
  std::optional<double> reference_energy;
  int max_iters = 50;
};

struct AdaptTraceRow {
  int iteration = 0;
  std::string selected_label;
  double gradient = 0.0;
  double energy = 0.0;
  int64_t n_2q_cumulative = 0;
};

struct AdaptState {
  std::vector<size_t> ansatz_ops;  // pool indices, application order
  std::vector<double> thetas;
  double energy = 0.0;
  double gradient_norm = 0.0;  // pool gradient inf-norm at last selection
  int iterations = 0;
  std::string status;  // "gradient_converged" | "target_reached" | "max_iters"
  std::vector<AdaptTraceRow> trace;
};

namespace detail {

inline StateVector adapt_ansatz_state(const StateVector& reference,
                                      const std::vector<PoolOperator>& pool,
                                      const std::vector<size_t>& ops,
                                      const Eigen::VectorXd& thetas) {
  StateVector s = reference;
  for (size_t k = 0; k < ops.size(); ++k) {
    s = apply_pool_rotation(s, pool[ops[k]], thetas[static_cast<Eigen::Index>(k)]);
  }
  return s;
}

// Energy and analytic gradient via one forward and one backward sweep.
inline double adapt_energy_gradient(const PauliSum& h, const StateVector& reference,
                                    const std::vector<PoolOperator>& pool,
                                    const std::vector<size_t>& ops,
                                    const Eigen::VectorXd& thetas,
                                    Eigen::VectorXd& grad) {
  size_t count = ops.size();
  std::vector<StateVector> forward(count + 1);
  forward[0] = reference;
  for (size_t k = 0; k < count; ++k) {
    forward[k + 1] = apply_pool_rotation(forward[k], pool[ops[k]],
                                         thetas[static_cast<Eigen::Index>(k)]);
  }
  Eigen::VectorXcd h_psi = apply_sum(h, forward[count].amplitudes);
  double energy = forward[count].amplitudes.dot(h_psi).real();
  Eigen::VectorXcd back = h_psi;
  for (size_t k = count; k-- > 0;) {
    // grad_k = 2 Re <back | iG_k |forward_{k+1}>  (derivative commutes with U_k)
    Eigen::VectorXcd g_f = apply_sum(pool[ops[k]].generator, forward[k + 1].amplitudes);
    std::complex<double> ip = back.dot(std::complex<double>(0, 1) * g_f);
    grad[static_cast<Eigen::Index>(k)] = 2.0 * ip.real();
    StateVector tmp;
    tmp.n = reference.n;
    tmp.amplitudes = std::move(back);
    back = apply_pool_rotation(tmp, pool[ops[k]],
                               -thetas[static_cast<Eigen::Index>(k)])
               .amplitudes;
  }
  return energy;
}

}  // namespace detail

// ADAPT loop: append the largest-|gradient| pool operator, reoptimize all
// parameters from the previous optimum (warm start, new theta = 0).
inline AdaptState adapt_run(const PauliSum& h, const StateVector& reference,
                            const std::vector<PoolOperator>& pool,
                            const AdaptStop& stop) {
  reference.check_normalized();
  AdaptState state;
  Eigen::VectorXd thetas(0);
  auto current_state = [&]() {
    return detail::adapt_ansatz_state(reference, pool, state.ansatz_ops, thetas);
  };
  StateVector psi = reference;
  state.energy = expectation(psi, h);
  state.status = "max_iters";
  for (int iter = 1; iter <= stop.max_iters; ++iter) {
    double best_grad = 0.0;
    size_t best_idx = 0;
    for (size_t p = 0; p < pool.size(); ++p) {
      double grad = operator_gradient(h, psi, pool[p]);
      if (std::abs(grad) > std::abs(best_grad)) {
        best_grad = grad;
        best_idx = p;
      }
    }
    state.gradient_norm = std::abs(best_grad);
    if (state.gradient_norm < stop.grad_tol) {
      state.status = "gradient_converged";
      break;
    }
    state.ansatz_ops.push_back(best_idx);
    thetas.conservativeResize(thetas.size() + 1);
    thetas[thetas.size() - 1] = 0.0;
    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
      return detail::adapt_energy_gradient(h, reference, pool, state.ansatz_ops, x, grad);
    };
    auto optimum = lbfgs_minimize(objective, thetas, 1e-8, 500);
    if (optimum.value <= state.energy + 1e-8) {
      thetas = optimum.x;
      state.energy = optimum.value;
    }  // else keep best-so-far parameters (optimizer failed to improve)
    psi = current_state();
    state.energy = expectation(psi, h);
    state.iterations = iter;
    AdaptTraceRow row;
    row.iteration = iter;
    row.selected_label = pool[best_idx].label;
    row.gradient = best_grad;
    row.energy = state.energy;
    state.trace.push_back(row);
    if (stop.epsilon_target && stop.reference_energy &&
        std::abs(state.energy - *stop.reference_energy) < *stop.epsilon_target) {
      state.status = "target_reached";
      break;
    }
  }
  state.thetas.assign(thetas.data(), thetas.data() + thetas.size());
  // fill cumulative gate counts
  int64_t cumulative = 0;
  for (size_t k = 0; k < state.trace.size() && k < state.ansatz_ops.size(); ++k) {
    const auto& gen = pool[state.ansatz_ops[k]].generator;
    for (const auto& term : gen.terms()) {
      cumulative += 2 * (term.word.weight() - 1);
    }
    state.trace[k].n_2q_cumulative = cumulative;
  }
  return state;
}

// Gate counts of the synthesized ansatz circuit (term-by-term Pauli ladders).
inline Circuit ansatz_circuit(const AdaptState& state,
                              const std::vector<PoolOperator>& pool, int n) {
  Circuit c;
  c.n = n;
  for (size_t k = 0; k < state.ansatz_ops.size(); ++k) {
    const auto& gen = pool[state.ansatz_ops[k]].generator;
    for (const auto& term : gen.terms()) {
      // exp(i theta c W) = exp(-i c (-theta) W)
      c.append(synth_pauli_exponential(n, term, -state.thetas[k]));
    }
  }
  return c;
}

inline GateCount ansatz_gate_count(const AdaptState& state,
                                   const std::vector<PoolOperator>& pool, int n) {
  return count_gates(ansatz_circuit(state, pool, n));
}

}  // namespace qre
