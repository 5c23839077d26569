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

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qre/dense.hpp"
#include "qre/pauli.hpp"

namespace qre {

// Spinless Fermi-Hubbard on an open-boundary nx x ny lattice; one qubit per
// site, site (x, y) -> qubit x*ny + y.
struct HubbardSpec {
  int nx = 1;
  int ny = 1;
  double t = 1.0;
  double u = 4.0;
  double mu = 0.0;

  void validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("lattice extents must be >= 1");
    if (nx * ny > 64) throw std::invalid_argument("lattice too large (> 64 sites)");
  }
};

inline PauliSum build_hubbard(const HubbardSpec& spec) {
  spec.validate();
  int n = spec.nx * spec.ny;
  auto site = [&](int x, int y) { return x * spec.ny + y; };
  std::vector<FermionTerm> terms;
  auto number_op = [](int i) {
    return std::vector<FermionOp>{{i, true}, {i, false}};
  };
  for (int x = 0; x < spec.nx; ++x) {
    for (int y = 0; y < spec.ny; ++y) {
      int i = site(x, y);
      std::vector<int> nbrs;
      if (x + 1 < spec.nx) nbrs.push_back(site(x + 1, y));
      if (y + 1 < spec.ny) nbrs.push_back(site(x, y + 1));
      for (int j : nbrs) {
        terms.push_back({-spec.t, {{i, true}, {j, false}}});
        terms.push_back({-spec.t, {{j, true}, {i, false}}});
        FermionTerm nn{spec.u, number_op(i)};
        auto nj = number_op(j);
        nn.factors.insert(nn.factors.end(), nj.begin(), nj.end());
        terms.push_back(nn);
      }
      terms.push_back({-spec.mu, number_op(i)});
    }
  }
  return jordan_wigner(terms, n);
}

// ---- canonical Pauli text format ----------------------------------------
//
//   # comment
//   qubits <n>
//   <coefficient> <word>     (word: n characters over IXYZ; all-I -> offset)

inline void save_pauli_file(const PauliSum& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "qubits " << h.n() << "\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  if (h.identity_offset() != 0.0) {
    out << fmt(h.identity_offset()) << " " << PauliWord::identity(h.n()).to_string()
        << "\n";
  }
  for (const auto& t : h.terms()) {
    out << fmt(t.coefficient) << " " << t.word.to_string() << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline PauliSum load_pauli_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  int lineno = 0;
  int n = -1;
  PauliSum h(0);
  auto parse_error = [&](const std::string& msg) {
    return std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (n < 0) {
      if (first != "qubits") throw parse_error("expected 'qubits <n>' header");
      if (!(ls >> n) || n < 0 || n > 64) throw parse_error("invalid qubit count");
      h = PauliSum(n);
      continue;
    }
    double coeff;
    auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), coeff);
    if (ec != std::errc{} || ptr != first.data() + first.size())
      throw parse_error("invalid coefficient '" + first + "'");
    std::string word;
    if (!(ls >> word)) throw parse_error("missing Pauli word");
    if (static_cast<int>(word.size()) != n)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": word length " + std::to_string(word.size()) +
                               " does not match qubit count " + std::to_string(n));
    try {
      h.add(coeff, PauliWord::from_string(word));
    } catch (const std::invalid_argument& e) {
      throw parse_error(e.what());
    }
  }
  if (n < 0) throw std::runtime_error(path.string() + ": missing 'qubits' header");
  h.normalize(0.0);  // preserve exact coefficients; only fix ordering
  return h;
}

// ---- spectral utilities --------------------------------------------------

struct SpectralInfo {
  double e0 = 0.0;
  double e1 = 0.0;
  double emax = 0.0;
  double norm2 = 0.0;
  std::vector<double> eigenvalues;  // ascending
};

inline SpectralInfo dense_spectrum(const PauliSum& h) {
  check_dense_cap(h.n());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h),
                                                         Eigen::EigenvaluesOnly);
  SpectralInfo info;
  const auto& w = solver.eigenvalues();
  info.eigenvalues.assign(w.data(), w.data() + w.size());
  info.e0 = info.eigenvalues.front();
  info.e1 = info.eigenvalues.size() > 1 ? info.eigenvalues[1] : info.e0;
  info.emax = info.eigenvalues.back();
  info.norm2 = std::max(std::abs(info.e0), std::abs(info.emax));
  return info;
}

inline double norm_upper_bound(const PauliSum& h) { return h.norm_upper_bound(); }

// Spectral norm when the dense solve is feasible, else the triangle bound.
// The flag reports which route produced the value.
inline double spectral_norm_or_bound(const PauliSum& h, bool* is_exact = nullptr) {
  if (h.n() <= dense_cap()) {
    if (is_exact) *is_exact = true;
    return dense_spectrum(h).norm2;
  }
  if (is_exact) *is_exact = false;
  return norm_upper_bound(h);
}

}  // namespace qre
