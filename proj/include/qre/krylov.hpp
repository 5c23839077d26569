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
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qre/circuit.hpp"
#include "qre/hamlib.hpp"
#include "qre/sim.hpp"

namespace qre {

struct KrylovMatrices {
  int d = 0;
  Eigen::MatrixXcd h;  // <phi_i|H|phi_j>
  Eigen::MatrixXcd s;  // <phi_i|phi_j>
};

struct EvolutionSpec {
  enum class Kind { Exact, Trotter };
  Kind kind = Kind::Exact;
  int steps = 1;
  TrotterStrategy strategy = TrotterStrategy::Grouped;

  static EvolutionSpec exact() { return {}; }
  static EvolutionSpec trotter(int steps,
                               TrotterStrategy strategy = TrotterStrategy::Grouped) {
    EvolutionSpec e;
    e.kind = Kind::Trotter;
    e.steps = steps;
    e.strategy = strategy;
    return e;
  }
};

// Krylov basis {U^j b} for j = 0..d-1 with U the time-t evolution operator.
inline std::vector<StateVector> build_subspace(const PauliSum& h, const StateVector& b,
                                               int d, const EvolutionSpec& evolution,
                                               double t) {
  if (d < 1) throw std::invalid_argument("subspace dimension must be >= 1");
  b.check_normalized();
  std::vector<StateVector> basis;
  basis.reserve(d);
  basis.push_back(b);
  std::optional<Circuit> step;
  if (evolution.kind == EvolutionSpec::Kind::Trotter) {
    step = synth_trotter_step(h, t, evolution.steps, evolution.strategy);
  }
  for (int j = 1; j < d; ++j) {
    StateVector next = step ? apply_circuit(basis.back(), *step)
                            : exact_evolve(h, t, basis.back());
    next.renormalize();
    basis.push_back(std::move(next));
  }
  return basis;
}

inline KrylovMatrices assemble_matrices(const PauliSum& h,
                                        const std::vector<StateVector>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty Krylov basis");
  int d = static_cast<int>(basis.size());
  KrylovMatrices m;
  m.d = d;
  m.h.resize(d, d);
  m.s.resize(d, d);
  std::vector<Eigen::VectorXcd> h_phi(d);
  for (int j = 0; j < d; ++j) {
    if (basis[j].n != h.n()) throw std::invalid_argument("basis dimension mismatch");
    h_phi[j] = apply_sum(h, basis[j].amplitudes);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      m.h(i, j) = basis[i].amplitudes.dot(h_phi[j]);
      m.s(i, j) = basis[i].amplitudes.dot(basis[j].amplitudes);
      if (j > i) {
        m.h(j, i) = std::conj(m.h(i, j));
        m.s(j, i) = std::conj(m.s(i, j));
      } else {
        m.h(i, i) = m.h(i, i).real();
        m.s(i, i) = m.s(i, i).real();
      }
    }
  }
  return m;
}

// S-eigenvalue threshold for the generalized eigenvalue solve.  None means a
// direct whitened solve that fails unless S is numerically positive definite.
struct Threshold {
  enum class Mode { None, Value };
  Mode mode = Mode::None;
  double delta = 0.0;

  static Threshold none() { return {}; }
  static Threshold value(double delta) { return {Mode::Value, delta}; }
};

struct GevpResult {
  bool solved = false;
  double energy = 0.0;
  int retained = 0;
  std::string status;  // "ok" or a failure reason
};

// Solves H c = E S c by projecting onto retained S-eigenvectors and whitening.
// spectral_bound, when positive, rejects energies outside +-(bound + 1e-6) as
// numerically unstable.
inline GevpResult solve_gevp(const KrylovMatrices& m, const Threshold& thr,
                             double spectral_bound = 0.0) {
  Eigen::MatrixXcd s = (m.s + m.s.adjoint()) / 2.0;
  Eigen::MatrixXcd h = (m.h + m.h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s_solver(s);
  const auto& lam = s_solver.eigenvalues();
  double lam_max = lam.maxCoeff();
  GevpResult result;
  if (lam_max <= 0.0) {
    result.status = "overlap matrix has no positive eigenvalues";
    return result;
  }
  std::vector<int> keep;
  if (thr.mode == Threshold::Mode::None) {
    if (lam.minCoeff() <= 0.0) {
      result.status = "overlap matrix not positive definite";
      return result;
    }
    for (int i = 0; i < lam.size(); ++i) keep.push_back(i);
  } else {
    for (int i = 0; i < lam.size(); ++i) {
      if (lam[i] > thr.delta) keep.push_back(i);
    }
    if (keep.empty()) {
      result.status = "no eigenvalues retained";
      return result;
    }
    for (int i : keep) {
      if (lam[i] <= 0.0) {
        result.status = "non-positive eigenvalue retained";
        return result;
      }
    }
  }
  Eigen::MatrixXcd w(m.d, static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    w.col(static_cast<int>(k)) =
        s_solver.eigenvectors().col(keep[k]) / std::sqrt(lam[keep[k]]);
  }
  Eigen::MatrixXcd projected = w.adjoint() * h * w;
  projected = (projected + projected.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> h_solver(projected,
                                                           Eigen::EigenvaluesOnly);
  double energy = h_solver.eigenvalues().minCoeff();
  result.retained = static_cast<int>(keep.size());
  if (!std::isfinite(energy)) {
    result.status = "projected solve produced non-finite values";
    return result;
  }
  if (spectral_bound > 0.0 && std::abs(energy) > spectral_bound + 1e-6) {
    result.status = "unstable (energy outside spectral bound)";
    return result;
  }
  result.solved = true;
  result.energy = energy;
  result.status = "ok";
  return result;
}

struct KrylovScanRow {
  int d = 0;
  int n_trotter = 0;  // 0 = exact evolution
  double energy = 0.0;
  double error = 0.0;
  std::string status;
};

struct KrylovScan {
  std::vector<KrylovScanRow> rows;
  double reference_energy = 0.0;
  double evolution_time = 0.0;
};

// Rows d = 1..d_max for one evolution column of a convergence scan.
inline std::vector<KrylovScanRow> scan_column(const PauliSum& h, const StateVector& b,
                                              int d_max, const EvolutionSpec& evolution,
                                              double t, const Threshold& thr,
                                              double spectral_bound,
                                              double reference_energy) {
  auto basis = build_subspace(h, b, d_max, evolution, t);
  auto matrices = assemble_matrices(h, basis);
  std::vector<KrylovScanRow> rows;
  rows.reserve(d_max);
  for (int d = 1; d <= d_max; ++d) {
    KrylovMatrices sub;
    sub.d = d;
    sub.h = matrices.h.topLeftCorner(d, d);
    sub.s = matrices.s.topLeftCorner(d, d);
    auto solved = solve_gevp(sub, thr, spectral_bound);
    KrylovScanRow row;
    row.d = d;
    row.n_trotter =
        evolution.kind == EvolutionSpec::Kind::Exact ? 0 : evolution.steps;
    row.status = solved.status;
    if (solved.solved) {
      row.energy = solved.energy;
      row.error = solved.energy - reference_energy;
    } else {
      row.energy = std::numeric_limits<double>::quiet_NaN();
      row.error = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Per-(d, n_T) energy errors against the dense ground energy.  trotter_steps
// lists the finite-r columns; the exact column is always included.
// t <= 0 selects the default pi / (4 ||H||).
inline KrylovScan convergence_scan(const PauliSum& h, double overlap_sq, int d_max,
                                   const std::vector<int>& trotter_steps, double t,
                                   const Threshold& thr, uint64_t seed) {
  SpectralInfo spec = dense_spectrum(h);
  if (t <= 0.0) t = M_PI / (4.0 * spec.norm2);
  double bound = norm_upper_bound(h);
  StateVector b = prepare_overlap_state(h, overlap_sq, seed);
  KrylovScan scan;
  scan.reference_energy = spec.e0;
  scan.evolution_time = t;
  std::vector<EvolutionSpec> columns{EvolutionSpec::exact()};
  for (int r : trotter_steps) columns.push_back(EvolutionSpec::trotter(r));
  for (const auto& evolution : columns) {
    auto rows = scan_column(h, b, d_max, evolution, t, thr, bound, spec.e0);
    scan.rows.insert(scan.rows.end(), rows.begin(), rows.end());
  }
  return scan;
}

// 8 dE_{N-1} (1 - g2)/g2 (1 + pi dE1/dE_{N-1})^{-2d}
inline double epperly_bound(double gap1, double gap_top, double overlap_sq, double d) {
  if (!(gap1 > 0.0)) throw std::invalid_argument("first gap must be positive");
  if (gap_top < gap1) throw std::invalid_argument("top gap must be >= first gap");
  if (!(overlap_sq > 0.0) || overlap_sq > 1.0)
    throw std::invalid_argument("overlap_sq must be in (0, 1]");
  double prefactor = 8.0 * gap_top * (1.0 - overlap_sq) / overlap_sq;
  return prefactor * std::pow(1.0 + M_PI * gap1 / gap_top, -2.0 * d);
}

// Smallest d with epperly_bound <= epsilon.
inline double epperly_min_dimension(double gap1, double gap_top, double overlap_sq,
                                    double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  double prefactor = 8.0 * gap_top * (1.0 - overlap_sq) / overlap_sq;
  if (prefactor <= epsilon) return 0.0;
  return std::log(prefactor / epsilon) /
         (2.0 * std::log1p(M_PI * gap1 / gap_top));
}

// Ordinary least-squares line through the points, evaluated at x_target.
inline double linear_extrapolate(const std::vector<std::pair<double, double>>& points,
                                 double x_target) {
  if (points.size() < 2) throw std::invalid_argument("need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(points.size());
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw std::invalid_argument("degenerate x values");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return intercept + slope * x_target;
}

struct KrylovResources {
  int64_t n_qubits = 0;
  int64_t n_circuits = 0;
  int64_t n_2q = 0;
};

// n_Q = n + 1 (Hadamard-test ancilla); n_C = d^2 N_groups; gates from the
// controlled-Trotter estimate.
inline KrylovResources krylov_resources(int n_qubits, int64_t d, int64_t n_groups,
                                        const GateCount& trotter_base, int64_t n_t) {
  if (d < 1 || n_groups < 1) throw std::invalid_argument("counts must be >= 1");
  KrylovResources r;
  r.n_qubits = n_qubits + 1;
  r.n_circuits = d * d * n_groups;
  r.n_2q = controlled_trotter_cost(n_t, trotter_base);
  return r;
}

}  // namespace qre
