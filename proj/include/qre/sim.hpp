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
#include <ostream>

#include "qre/circuit.hpp"
#include "qre/dense.hpp"
#include "qre/hamlib.hpp"
#include "qre/pauli.hpp"
#include "qre/random.hpp"

namespace qre {

struct StateVector {
  int n = 0;
  Eigen::VectorXcd amplitudes;

  static StateVector zero_state(int n) { return basis_state(n, 0); }

  static StateVector basis_state(int n, uint64_t index) {
    check_dense_cap(n);
    StateVector s;
    s.n = n;
    s.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    s.amplitudes[index] = 1.0;
    return s;
  }

  double norm() const { return amplitudes.norm(); }

  void renormalize() { amplitudes /= amplitudes.norm(); }

  void check_normalized(double tol = 1e-10) const {
    if (std::abs(norm() - 1.0) > tol)
      throw std::invalid_argument("state vector is not normalized");
  }
};

inline std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw std::invalid_argument("state dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);  // conjugates a
}

namespace detail {

inline void apply_single_qubit(Eigen::VectorXcd& v, int q, const Eigen::Matrix2cd& u) {
  uint64_t bit = uint64_t{1} << q;
  for (uint64_t j = 0; j < static_cast<uint64_t>(v.size()); ++j) {
    if (j & bit) continue;
    std::complex<double> a0 = v[j], a1 = v[j | bit];
    v[j] = u(0, 0) * a0 + u(0, 1) * a1;
    v[j | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

inline void apply_cnot(Eigen::VectorXcd& v, int control, int target) {
  uint64_t cb = uint64_t{1} << control, tb = uint64_t{1} << target;
  for (uint64_t j = 0; j < static_cast<uint64_t>(v.size()); ++j) {
    if ((j & cb) && !(j & tb)) std::swap(v[j], v[j | tb]);
  }
}

}  // namespace detail

inline StateVector apply_circuit(const StateVector& s, const Circuit& c) {
  if (s.n != c.n) throw std::invalid_argument("state/circuit dimension mismatch");
  StateVector out = s;
  for (const auto& g : c.gates) {
    if (g.kind == Gate::Kind::Single) {
      detail::apply_single_qubit(out.amplitudes, g.q0, g.u);
    } else {
      detail::apply_cnot(out.amplitudes, g.q0, g.q1);
    }
  }
  if (c.global_phase != 0.0) {
    out.amplitudes *= std::exp(std::complex<double>(0, c.global_phase));
  }
  return out;
}

inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  check_dense_cap(c.n);
  Eigen::Index dim = Eigen::Index{1} << c.n;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    StateVector s = StateVector::basis_state(c.n, col);
    u.col(col) = apply_circuit(s, c).amplitudes;
  }
  return u;
}

// exp(-iHt)|s> via dense eigendecomposition.
inline StateVector exact_evolve(const PauliSum& h, double t, const StateVector& s) {
  if (h.n() != s.n) throw std::invalid_argument("state/Hamiltonian dimension mismatch");
  check_dense_cap(h.n());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h));
  const auto& w = solver.eigenvalues();
  const auto& v = solver.eigenvectors();
  Eigen::VectorXcd coeffs = v.adjoint() * s.amplitudes;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    coeffs[k] *= std::exp(std::complex<double>(0, -w[k] * t));
  }
  StateVector out;
  out.n = s.n;
  out.amplitudes = v * coeffs;
  out.renormalize();
  return out;
}

inline double pauli_expectation(const StateVector& s, const PauliWord& w) {
  if (s.n != w.n) throw std::invalid_argument("state/word dimension mismatch");
  std::complex<double> val = s.amplitudes.dot(apply_word(w, s.amplitudes));
  return val.real();
}

inline double expectation(const StateVector& s, const PauliSum& h) {
  if (s.n != h.n()) throw std::invalid_argument("state/Hamiltonian dimension mismatch");
  std::complex<double> val = s.amplitudes.dot(apply_sum(h, s.amplitudes));
  return val.real();
}

// Ground state from the deterministic eigensolver ordering (first column for
// degenerate ground spaces).
inline StateVector ground_state(const PauliSum& h) {
  check_dense_cap(h.n());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h));
  StateVector s;
  s.n = h.n();
  s.amplitudes = solver.eigenvectors().col(0);
  return s;
}

// State b with |<b|psi0>|^2 == overlap_sq; the orthogonal part is a seeded
// pseudo-random direction.
inline StateVector prepare_overlap_state(const PauliSum& h, double overlap_sq,
                                         uint64_t seed) {
  if (!(overlap_sq > 0.0) || overlap_sq > 1.0)
    throw std::invalid_argument("overlap_sq must be in (0, 1]");
  StateVector psi0 = ground_state(h);
  if (overlap_sq == 1.0) return psi0;
  Rng rng(seed);
  Eigen::VectorXcd v(psi0.amplitudes.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    v[j] = std::complex<double>(rng.gaussian(), rng.gaussian());
  }
  v -= psi0.amplitudes * psi0.amplitudes.dot(v);
  v /= v.norm();
  StateVector out;
  out.n = psi0.n;
  out.amplitudes =
      std::sqrt(overlap_sq) * psi0.amplitudes + std::sqrt(1.0 - overlap_sq) * v;
  out.renormalize();
  return out;
}

// Binary dump: "QSV1 <n>\n" then 2^n little-endian complex doubles.
inline void dump_state(const StateVector& s, std::ostream& out) {
  out << "QSV1 " << s.n << "\n";
  out.write(reinterpret_cast<const char*>(s.amplitudes.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                         s.amplitudes.size()));
}

}  // namespace qre
