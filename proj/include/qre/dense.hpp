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
#include <bit>
#include <complex>
#include <cstdlib>

#include "qre/pauli.hpp"

namespace qre {

// Qubit cap for dense 2^n work; QRE_DENSE_CAP overrides the default of 14.
inline int dense_cap() {
  if (const char* env = std::getenv("QRE_DENSE_CAP")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 14;
}

inline void check_dense_cap(int n) {
  if (n > dense_cap())
    throw std::runtime_error(
        "dense operation limited to " + std::to_string(dense_cap()) +
        " qubits (set QRE_DENSE_CAP to raise); use norm_upper_bound instead");
}

namespace detail {

// W|j> = i^{#Y} (-1)^{popcount(j & z)} |j ^ x>; basis index bit q is qubit q.
inline std::complex<double> word_column_phase(const PauliWord& w, uint64_t j) {
  static const std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int exp = std::popcount(w.x & w.z) % 4;
  std::complex<double> p = kI[exp];
  if (std::popcount(j & w.z) & 1) p = -p;
  return p;
}

}  // namespace detail

inline Eigen::VectorXcd apply_word(const PauliWord& w, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  for (uint64_t j = 0; j < static_cast<uint64_t>(v.size()); ++j) {
    out[j ^ w.x] = detail::word_column_phase(w, j) * v[j];
  }
  return out;
}

inline Eigen::VectorXcd apply_sum(const PauliSum& h, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = h.identity_offset() * v;
  for (const auto& t : h.terms()) {
    const PauliWord& w = t.word;
    for (uint64_t j = 0; j < static_cast<uint64_t>(v.size()); ++j) {
      out[j ^ w.x] += t.coefficient * detail::word_column_phase(w, j) * v[j];
    }
  }
  return out;
}

inline Eigen::MatrixXcd word_matrix(const PauliWord& w) {
  check_dense_cap(w.n);
  Eigen::Index dim = Eigen::Index{1} << w.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t j = 0; j < static_cast<uint64_t>(dim); ++j) {
    m(j ^ w.x, j) = detail::word_column_phase(w, j);
  }
  return m;
}

inline Eigen::MatrixXcd to_dense(const PauliSum& h) {
  check_dense_cap(h.n());
  Eigen::Index dim = Eigen::Index{1} << h.n();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) * h.identity_offset();
  for (const auto& t : h.terms()) {
    for (uint64_t j = 0; j < static_cast<uint64_t>(dim); ++j) {
      m(j ^ t.word.x, j) += t.coefficient * detail::word_column_phase(t.word, j);
    }
  }
  return m;
}

}  // namespace qre
