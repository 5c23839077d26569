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

// End-to-end acceptance gate.  Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.  Checks that need
// external data files print SKIP notes when the files are absent.

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qre/adapt.hpp"
#include "qre/grouping.hpp"
#include "qre/hamlib.hpp"
#include "qre/krylov.hpp"
#include "qre/qpe.hpp"
#include "qre/sim.hpp"

using namespace qre;

namespace {

struct Criterion {
  std::ostringstream detail;
  bool ok = true;

  void require(bool condition, const std::string& label) {
    if (!condition) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << label;
    }
  }
};

std::vector<PauliSum> small_corpus() {
  std::vector<PauliSum> corpus;
  corpus.push_back(build_hubbard({1, 2, 1.0, 4.0, 0.0}));
  corpus.push_back(build_hubbard({1, 3, 1.0, 4.0, 0.5}));
  corpus.push_back(build_hubbard({2, 2, 1.0, 4.0, 0.0}));
  corpus.push_back(build_hubbard({2, 3, 1.0, 4.0, 0.0}));
  Rng rng(99);
  corpus.push_back(oracle::random_sum(rng, 4, 8));
  return corpus;
}

double min_chemical_d(const std::vector<KrylovScanRow>& rows, int n_trotter) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.n_trotter != n_trotter || row.status != "ok") continue;
    if (std::abs(row.error) <= 1e-3) best = std::min(best, static_cast<double>(row.d));
  }
  return best;
}

// --- criterion bodies -----------------------------------------------------

void criterion_1(Criterion& c) {
  GateCount base{6050622, 13016100, 0};
  auto r = krylov_resources(44, 144, 2737, base, 1);
  c.require(r.n_qubits == 45, "krylov qubit count");
  // Table value 5.7e7; the printed constant and d^2*N_groups differ by < d^2
  c.require(std::llabs(r.n_circuits - 56733696LL) <= 144LL * 144LL,
            "n_C near the printed Table value");
  c.require(std::llround(r.n_circuits / 1e6) == 57, "n_C rounds to 5.7e7");
  auto r2 = krylov_resources(44, 144, 2692, base, 1);
  c.require(std::llround(r2.n_circuits / 1e6) == 56, "n_C rounds to 5.6e7");
  PauliSum h = build_hubbard({1, 2, 1.0, 4.0, 0.0});
  c.require(qpe_plan(h, 1e-3, 0.5, base).n_c == 10, "QPE n_C = 10 at eps 1e-3");
  double total = static_cast<double>(controlled_trotter_cost(220000000, base));
  c.require(std::abs(total - 2.0e16) / 2.0e16 <= 0.10,
            "two-qubit total within 10% of 2.0e16");
}

void criterion_2(Criterion& c) {
  for (auto [nx, ny] : {std::pair{1, 2}, {2, 2}}) {
    PauliSum h = build_hubbard({nx, ny, 1.0, 4.0, 0.0});
    auto scan = convergence_scan(h, 0.85, 8, {}, 0.0, Threshold::none(), 7);
    bool reached = false;
    for (const auto& row : scan.rows) {
      if (row.status == "ok" && std::abs(row.error) <= 1e-3) reached = true;
    }
    c.require(reached, "chemical accuracy by d=8 on " + std::to_string(nx) + "x" +
                           std::to_string(ny));
  }
}

void criterion_3(Criterion& c) {
  PauliSum h = build_hubbard({2, 3, 1.0, 4.0, 0.0});
  double t = 2.0 * M_PI / dense_spectrum(h).norm2;
  auto scan = convergence_scan(h, 0.85, 24, {5, 10, 25}, t, Threshold::none(), 12);
  // Trotter error never beats exact at the same d
  std::map<std::pair<int, int>, const KrylovScanRow*> by_cell;
  for (const auto& row : scan.rows) by_cell[{row.n_trotter, row.d}] = &row;
  for (int r : {5, 10, 25}) {
    for (int d = 1; d <= 24; ++d) {
      const auto* exact = by_cell[{0, d}];
      const auto* trotter = by_cell[{r, d}];
      if (exact->status != "ok" || trotter->status != "ok") continue;
      c.require(std::abs(trotter->error) >= std::abs(exact->error) - 1e-8,
                "Trotter r=" + std::to_string(r) + " not worse at d=" +
                    std::to_string(d));
    }
  }
  // minimal chemical-accuracy d is non-increasing over r = 5, 10, 25, exact
  std::vector<double> min_d = {min_chemical_d(scan.rows, 5),
                               min_chemical_d(scan.rows, 10),
                               min_chemical_d(scan.rows, 25),
                               min_chemical_d(scan.rows, 0)};
  for (size_t k = 0; k + 1 < min_d.size(); ++k) {
    c.require(min_d[k] >= min_d[k + 1], "min chemical d non-increasing in r");
  }
  c.require(std::isfinite(min_d.back()), "exact column reaches chemical accuracy");
}

void criterion_4(Criterion& c) {
  PauliSum h = build_hubbard({2, 4, 1.0, 4.0, 0.0});
  SpectralInfo spec = dense_spectrum(h);
  StateVector b = prepare_overlap_state(h, 0.98, 7);
  double t = M_PI / (4.0 * spec.norm2);
  double bound = norm_upper_bound(h);
  int d_max = 64;
  auto rows_none = scan_column(h, b, d_max, EvolutionSpec::exact(), t,
                               Threshold::none(), bound, spec.e0);
  auto rows_thr = scan_column(h, b, d_max, EvolutionSpec::exact(), t,
                              Threshold::value(1e-4), bound, spec.e0);
  auto max_solved = [](const std::vector<KrylovScanRow>& rows) {
    int best = 0;
    for (const auto& row : rows) {
      if (row.status == "ok") best = std::max(best, row.d);
    }
    return best;
  };
  int none_d = max_solved(rows_none), thr_d = max_solved(rows_thr);
  c.require(thr_d > none_d, "threshold solves strictly larger d (" +
                                std::to_string(thr_d) + " vs " +
                                std::to_string(none_d) + ")");
  for (const auto* rows : {&rows_none, &rows_thr}) {
    for (const auto& row : *rows) {
      if (row.status == "ok") {
        c.require(row.energy >= spec.e0 - 1e-6, "solved energy above E0 - 1e-6");
      }
    }
  }
}

void criterion_5(Criterion& c) {
  for (const auto& h : small_corpus()) {
    if (h.n() > 6 || h.num_terms() == 0) continue;
    double t = 0.35;
    for (auto strategy : {TrotterStrategy::Naive, TrotterStrategy::Grouped,
                          TrotterStrategy::Cancel}) {
      Circuit circ = synth_trotter_step(h, t, 1, strategy);
      std::vector<size_t> order;
      if (strategy == TrotterStrategy::Naive) {
        order.resize(h.num_terms());
        std::iota(order.begin(), order.end(), 0);
      } else {
        auto groups = sorted_insertion_group(h, CommutationRelation::Full);
        for (const auto& g : groups.groups)
          order.insert(order.end(), g.begin(), g.end());
      }
      Eigen::Index dim = Eigen::Index{1} << h.n();
      Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(dim, dim);
      for (size_t idx : order) {
        const auto& term = h.terms()[idx];
        expected = oracle::expm_minus_i_hermitian(
                       term.coefficient * oracle::word_matrix(term.word), t) *
                   expected;
      }
      expected *= std::exp(std::complex<double>(0, -h.identity_offset() * t));
      double dist = (circuit_unitary(circ) - expected).cwiseAbs().maxCoeff();
      c.require(dist < 1e-10, "unitary match on corpus instance");
    }
  }
  for (int n : {2, 3, 4}) {
    PauliSum h = build_hubbard({n, n, 1.0, 4.0, 0.0});
    auto cnots = [&](TrotterStrategy s) {
      return count_gates(synth_trotter_step(h, 0.1, 1, s)).n_2q;
    };
    int64_t naive = cnots(TrotterStrategy::Naive);
    int64_t grouped = cnots(TrotterStrategy::Grouped);
    int64_t cancel = cnots(TrotterStrategy::Cancel);
    c.require(cancel <= grouped && grouped <= naive,
              "CNOT ordering on " + std::to_string(n) + "x" + std::to_string(n));
  }
}

void criterion_6(Criterion& c) {
  Rng rng(51);
  int tested = 0;
  while (tested < 100) {
    int n = 1 + static_cast<int>(rng.next_u64() % 4);
    int terms = 2 + static_cast<int>(rng.next_u64() % 9);
    PauliSum h = oracle::random_sum(rng, n, terms);
    if (h.num_terms() < 1) continue;
    StateVector g = ground_state(h);
    c.require(v2_bound(h) >= std::abs(v2_exact(h, g)) - 1e-12, "bound dominance");
    ++tested;
  }
  PauliSum commuting(3);
  commuting.add(0.5, PauliWord::from_string("ZII"));
  commuting.add(0.3, PauliWord::from_string("IZI"));
  commuting.add(0.2, PauliWord::from_string("ZZZ"));
  commuting.normalize();
  c.require(std::abs(v2_exact(commuting, ground_state(commuting))) < 1e-12,
            "commuting Hamiltonian shift is zero");
  PauliSum h = build_hubbard({2, 2, 1.0, 4.0, 0.0});
  GateCount base{10, 10, 10};
  for (double eps : {1e-2, 1e-3}) {
    auto coarse = qpe_plan(h, eps, 2.0, base);
    auto fine = qpe_plan(h, eps / 4.0, 2.0, base);
    c.require(fine.n_t >= 2 * coarse.n_t - 1 && fine.n_t <= 2 * coarse.n_t + 1,
              "quartering epsilon doubles n_T");
  }
}

void criterion_7(Criterion& c) {
  // closed form: H = X, pool {Y}
  PauliSum hx(1);
  hx.add(1.0, PauliWord::from_string("X"));
  hx.normalize();
  PauliSum gen(1);
  gen.add(1.0, PauliWord::from_string("Y"));
  gen.normalize();
  AdaptStop stop;
  stop.grad_tol = 1e-8;
  stop.max_iters = 5;
  auto closed = adapt_run(hx, StateVector::zero_state(1), {{gen, "y"}}, stop);
  c.require(std::abs(closed.energy + 1.0) < 1e-8, "H = X reaches E = -1");
  bool theta_ok = !closed.thetas.empty() &&
                  std::abs(std::remainder(closed.thetas[0] - M_PI / 4.0, M_PI)) < 1e-6;
  c.require(theta_ok, "theta = pi/4 within 1e-6");

  // 2x2 Hubbard to chemical accuracy
  PauliSum h = build_hubbard({2, 2, 1.0, 4.0, 0.0});
  SpectralInfo spec = dense_spectrum(h);
  // the global ground state lives in the one-particle sector, which the
  // particle-conserving pool can reach from a one-particle reference
  StateVector ref = StateVector::basis_state(4, 0b0001);
  auto pool = build_qe_pool(4);
  AdaptStop hub_stop;
  hub_stop.grad_tol = 1e-7;
  hub_stop.max_iters = 30;
  hub_stop.epsilon_target = 1e-4;
  hub_stop.reference_energy = spec.e0;
  auto state = adapt_run(h, ref, pool, hub_stop);
  c.require(std::abs(state.energy - spec.e0) <= 1e-3,
            "2x2 Hubbard chemical accuracy (err " +
                std::to_string(std::abs(state.energy - spec.e0)) + ")");
  double prev = expectation(ref, h);
  for (const auto& row : state.trace) {
    c.require(row.energy <= prev + 1e-8, "monotone energy trace");
    prev = row.energy;
  }
  for (size_t p = 0; p < pool.size(); ++p) {
    double analytic = operator_gradient(h, ref, pool[p]);
    double eps = 1e-5;
    double fd = (expectation(apply_pool_rotation(ref, pool[p], eps), h) -
                 expectation(apply_pool_rotation(ref, pool[p], -eps), h)) /
                (2 * eps);
    c.require(std::abs(analytic - fd) < 1e-6, "gradient matches finite differences");
  }
}

void criterion_8(Criterion& c) {
  for (const auto& h : small_corpus()) {
    for (auto relation : {CommutationRelation::QubitWise, CommutationRelation::Full}) {
      auto mg = sorted_insertion_group(h, relation);
      std::set<size_t> seen;
      bool valid = true;
      for (const auto& group : mg.groups) {
        for (size_t i : group) {
          if (!seen.insert(i).second) valid = false;
          for (size_t j : group) {
            bool compatible = relation == CommutationRelation::QubitWise
                                  ? qubit_wise_commutes(h.terms()[i].word,
                                                        h.terms()[j].word)
                                  : commutes(h.terms()[i].word, h.terms()[j].word);
            if (!compatible) valid = false;
          }
        }
      }
      c.require(valid && seen.size() == h.num_terms(), "partition validity");
    }
  }
  // zeroed expectations reproduce the maximally mixed closed form exactly:
  // Z-only Hamiltonian measured in the |+>^n state
  PauliSum hz(3);
  hz.add(0.7, PauliWord::from_string("ZII"));
  hz.add(-0.4, PauliWord::from_string("IZZ"));
  hz.add(0.2, PauliWord::from_string("ZZZ"));
  hz.normalize();
  auto mg = sorted_insertion_group(hz, CommutationRelation::QubitWise);
  Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(8, 1.0 / std::sqrt(8.0));
  auto est = estimate_shots(hz, mg, plus, 1e-3);
  auto mm = maximally_mixed_shot_bound(hz, mg, 1e-3);
  c.require(est.total_shots == mm.total_shots, "MM closed form equals zeroed estimate");
  for (size_t g = 0; g < mg.groups.size(); ++g) {
    c.require(std::abs(est.per_group_sigma[g] - mm.per_group_sigma[g]) < 1e-15,
              "per-group sigma equality");
  }
  // eigenstate of every term -> zero shots
  StateVector basis = StateVector::basis_state(3, 5);
  auto zero = estimate_shots(hz, mg, basis.amplitudes, 1e-3);
  c.require(zero.total_shots == 0, "eigenstate needs zero shots");

  std::filesystem::path data = "data/metaphosphate_44q.txt";
  if (std::filesystem::exists(data)) {
    PauliSum big = load_pauli_file(data);
    auto big_groups = sorted_insertion_group(big, CommutationRelation::QubitWise);
    double ratio = static_cast<double>(big_groups.groups.size()) / 2737.0;
    c.require(ratio > 0.1 && ratio < 10.0, "ingested N_groups order of magnitude");
    auto big_mm = maximally_mixed_shot_bound(big, big_groups, 3e-3);
    double shots_ratio = static_cast<double>(big_mm.total_shots) / 44.8e9;
    c.require(shots_ratio > 0.8 && shots_ratio < 1.2, "ingested MM shot bound");
  } else {
    std::cout << "criterion 8 note: SKIP ingested-file checks (" << data.string()
              << " not present)\n";
  }
}

void criterion_9(Criterion& c) {
  // permutation-equivalence oracle on a 5-qubit line
  Rng rng(34);
  auto g5 = CouplingGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  for (int trial = 0; trial < 5; ++trial) {
    PauliSum h = oracle::random_sum(rng, 5, 6);
    if (h.num_terms() == 0) continue;
    Circuit circ = synth_trotter_step(h, 0.3, 1, TrotterStrategy::Grouped);
    auto result = route(circ, g5);
    bool edges_ok = true;
    for (const auto& gate : result.circuit.gates) {
      if (gate.kind == Gate::Kind::Cnot && !g5.has_edge(gate.q0, gate.q1)) {
        edges_ok = false;
      }
    }
    c.require(edges_ok, "all routed CNOTs on edges");
    Eigen::Index dim = Eigen::Index{1} << 5;
    bool equal = true;
    for (Eigen::Index j = 0; j < dim && equal; ++j) {
      Eigen::VectorXcd got =
          apply_circuit(StateVector::basis_state(5, j), result.circuit).amplitudes;
      Eigen::VectorXcd want =
          apply_circuit(StateVector::basis_state(5, j), circ).amplitudes;
      Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(dim);
      for (Eigen::Index k = 0; k < dim; ++k) {
        uint64_t phys = 0;
        for (int q = 0; q < 5; ++q) {
          if ((k >> q) & 1) phys |= uint64_t{1} << result.final_layout[q];
        }
        expected[phys] = want[k];
      }
      if ((got - expected).cwiseAbs().maxCoeff() > 1e-10) equal = false;
    }
    c.require(equal, "routing permutation equivalence");
  }
  // heavy-hex overhead on Trotter steps
  auto overhead = [&](const PauliSum& h, int rows, int cols) {
    Circuit step = synth_trotter_step(h, 0.1, 1, TrotterStrategy::Grouped);
    auto graph = heavy_hex(rows, cols);
    auto routed = route(step, graph);
    return static_cast<double>(count_gates(routed.circuit).n_2q) /
           static_cast<double>(count_gates(step).n_2q);
  };
  for (auto [nx, ny] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
    PauliSum h = build_hubbard({nx, ny, 1.0, 4.0, 0.0});
    c.require(overhead(h, 2, 2) >= 1.0, "overhead >= 1");
  }
  PauliSum big = build_hubbard({5, 5, 1.0, 4.0, 0.0});
  double big_overhead = overhead(big, 3, 2);
  c.require(big_overhead >= 1.0, "5x5 overhead >= 1");
  c.require(big_overhead > 1.5, "5x5 overhead exceeds 1.5 (got " +
                                    std::to_string(big_overhead) + ")");
}

}  // namespace

int main() {
  std::vector<std::function<void(Criterion&)>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9};
  bool all_ok = true;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Criterion c;
    try {
      criteria[k](c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::cout << "criterion " << (k + 1) << ": " << (c.ok ? "PASS" : "FAIL");
    if (!c.ok) std::cout << " (" << c.detail.str() << ")";
    std::cout << "\n" << std::flush;
    all_ok = all_ok && c.ok;
  }
  return all_ok ? 0 : 1;
}
