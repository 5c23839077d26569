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

#include <cmath>
#include <complex>
#include <map>

#include "qre/circuit.hpp"
#include "qre/hamlib.hpp"
#include "qre/sim.hpp"

namespace qre {

// Which Trotter-step reading the perturbative shift describes: the symmetric
// pass H_1..H_M,H_M..H_1 or the plain first-order product H_1..H_M.
enum class TrotterShiftVariant { Symmetric, FirstOrder };

namespace detail {

struct ScaledWord {
  std::complex<double> coefficient;
  PauliWord word;
};

// [a, b] = 2ab when the words anticommute, else 0.
inline std::optional<ScaledWord> commutator(const ScaledWord& a, const ScaledWord& b) {
  if (commutes(a.word, b.word)) return std::nullopt;
  auto p = multiply(a.word, b.word);
  return ScaledWord{2.0 * a.coefficient * b.coefficient * p.phase, p.word};
}

}  // namespace detail

// <phi0| V_2 |phi0> where V_2 = -(1/24) sum_{mu<nu<=nu'} (1 - d_{nu nu'}/2)
// [H_{nu'}, [H_nu, H_mu]] over the variant's operator list.  This is the t^2
// coefficient of the ground eigenphase deviation of the corresponding
// Trotter-step product.
inline double v2_exact(const PauliSum& h, const StateVector& ground,
                       TrotterShiftVariant variant = TrotterShiftVariant::Symmetric) {
  if (h.num_terms() > 30)
    throw std::runtime_error("v2_exact limited to 30 terms (O(M^3) commutators)");
  if (ground.n != h.n()) throw std::invalid_argument("state dimension mismatch");
  std::vector<detail::ScaledWord> ops;
  for (const auto& t : h.terms()) ops.push_back({t.coefficient, t.word});
  if (variant == TrotterShiftVariant::Symmetric) {
    for (size_t i = h.num_terms(); i-- > 0;) {
      ops.push_back({h.terms()[i].coefficient, h.terms()[i].word});
    }
  }
  size_t len = ops.size();
  std::map<std::pair<uint64_t, uint64_t>, std::complex<double>> acc;
  for (size_t mu = 0; mu + 1 < len; ++mu) {
    for (size_t nu = mu + 1; nu < len; ++nu) {
      auto inner = detail::commutator(ops[nu], ops[mu]);
      if (!inner) continue;
      for (size_t nup = nu; nup < len; ++nup) {
        auto outer = detail::commutator(ops[nup], *inner);
        if (!outer) continue;
        double f = nup == nu ? 0.5 : 1.0;
        acc[{outer->word.x, outer->word.z}] += (-f / 24.0) * outer->coefficient;
      }
    }
  }
  std::complex<double> value = 0.0;
  for (const auto& [key, coeff] : acc) {
    PauliWord w{h.n(), key.first, key.second};
    value += coeff * pauli_expectation(ground, w);
  }
  if (std::abs(value.imag()) > 1e-9)
    throw std::runtime_error("V_2 expectation has a non-negligible imaginary part");
  return value.real();
}

// Closed-form dominating bound (1/24) h_max^3 M^3.
inline double v2_bound(const PauliSum& h) {
  double h_max = h.max_abs_coefficient();
  double m = static_cast<double>(h.num_terms());
  return h_max * h_max * h_max * m * m * m / 24.0;
}

struct QpeBoundReport {
  int n_qubits = 0;
  size_t term_count = 0;
  double h_max = 0.0;
  double e1_bound = 0.0;                  // |E^(1)| value used for dt
  std::optional<double> e1_exact;         // when computed on a small system
  double t = 0.0;                         // evolution time pi / (4 norm)
  double dt = 0.0;                        // max Trotter step length
  int64_t n_t = 0;
  int64_t n_c = 0;
  int64_t n_2q = 0;
  bool norm_is_exact = true;              // false: triangle bound, n_T is an upper estimate
};

// Trotter-step plan for single-ancilla QPE at accuracy epsilon, given an
// energy-shift coefficient e1 (exact or bound) and per-step gate counts.
inline QpeBoundReport qpe_plan(const PauliSum& h, double epsilon, double e1,
                               const GateCount& trotter_base) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (e1 < 0.0) throw std::invalid_argument("e1 must be non-negative");
  QpeBoundReport report;
  report.n_qubits = h.n() + 1;
  report.term_count = h.num_terms();
  report.h_max = h.max_abs_coefficient();
  report.e1_bound = e1;
  bool exact = false;
  double norm = spectral_norm_or_bound(h, &exact);
  report.norm_is_exact = exact;
  report.t = M_PI / (4.0 * norm);
  report.dt = e1 > 0.0 ? std::sqrt(epsilon / e1) : report.t;
  report.n_t = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(report.t / report.dt)));
  report.n_c = static_cast<int64_t>(std::ceil(std::log2(1.0 / epsilon)));
  report.n_2q = controlled_trotter_cost(report.n_t, trotter_base);
  return report;
}

}  // namespace qre
