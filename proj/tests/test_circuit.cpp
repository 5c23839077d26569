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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "qre/circuit.hpp"
#include "qre/hamlib.hpp"
#include "qre/sim.hpp"

using namespace qre;

namespace {

double unitary_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Ordered product exp(-i c_k t W_k) over the given term order.
Eigen::MatrixXcd ordered_product(const PauliSum& h, const std::vector<size_t>& order,
                                 double t) {
  Eigen::Index dim = Eigen::Index{1} << h.n();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (size_t idx : order) {
    const auto& term = h.terms()[idx];
    u = oracle::expm_minus_i_hermitian(
            term.coefficient * oracle::word_matrix(term.word), t) *
        u;
  }
  return u;
}

int cnot_count(const Circuit& c) {
  return static_cast<int>(count_gates(c).n_2q);
}

}  // namespace

TEST_CASE("Pauli exponential matches the dense matrix exponential") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng.next_u64() % 4);
    PauliWord w = oracle::random_word(rng, n);
    if (w.is_identity()) continue;
    PauliTerm term{rng.gaussian(), w};
    double t = rng.gaussian();
    Circuit c = synth_pauli_exponential(n, term, t);
    Eigen::MatrixXcd expected = oracle::expm_minus_i_hermitian(
        term.coefficient * oracle::word_matrix(w), t);
    CHECK(unitary_distance(circuit_unitary(c), expected) < 1e-12);
    CHECK(cnot_count(c) == 2 * (w.weight() - 1));
  }
  CHECK_THROWS_AS(
      synth_pauli_exponential(2, {1.0, PauliWord::identity(2)}, 1.0),
      std::invalid_argument);
}

TEST_CASE("gate counting and depth") {
  Circuit c;
  c.n = 3;
  c.push(Gate::single(0, detail::hadamard_matrix()));
  c.push(Gate::cnot(0, 1));
  c.push(Gate::cnot(1, 2));
  c.push(Gate::single(2, detail::rz_matrix(0.3)));
  auto gc = count_gates(c);
  CHECK(gc.n_1q == 2);
  CHECK(gc.n_2q == 2);
  CHECK(gc.depth == 4);
  CHECK(controlled_trotter_cost(10, gc) == 10 * (3 * 2 + 6 * 2));
  CHECK_THROWS_AS(controlled_trotter_cost(0, gc), std::invalid_argument);
}

TEST_CASE("peephole pass preserves the unitary and strips cancellations") {
  Circuit c;
  c.n = 2;
  c.push(Gate::cnot(0, 1));
  c.push(Gate::cnot(0, 1));
  c.push(Gate::single(0, detail::hadamard_matrix()));
  c.push(Gate::single(0, detail::hadamard_matrix()));
  peephole_optimize(c);
  CHECK(c.gates.empty());

  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    PauliSum h = oracle::random_sum(rng, 3, 5);
    if (h.num_terms() == 0) continue;
    Circuit raw = synth_trotter_step(h, 0.37, 2, TrotterStrategy::Grouped);
    Eigen::MatrixXcd before = circuit_unitary(raw);
    int cnots_before = cnot_count(raw);
    peephole_optimize(raw);
    CHECK(unitary_distance(circuit_unitary(raw), before) < 1e-10);
    CHECK(cnot_count(raw) <= cnots_before);
  }
}

TEST_CASE("Trotter strategies agree with their ordered products") {
  Rng rng(33);
  std::vector<PauliSum> corpus;
  corpus.push_back(build_hubbard({1, 2, 1.0, 4.0, 0.0}));
  corpus.push_back(build_hubbard({2, 2, 1.0, 4.0, 0.5}));
  corpus.push_back(build_hubbard({2, 3, 1.0, 4.0, 0.0}));
  corpus.push_back(oracle::random_sum(rng, 3, 6));
  double t = 0.45;
  for (const auto& h : corpus) {
    for (int r : {1, 3}) {
      for (auto strategy : {TrotterStrategy::Naive, TrotterStrategy::Grouped,
                            TrotterStrategy::Cancel}) {
        Circuit c = synth_trotter_step(h, t, r, strategy);
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
        Eigen::MatrixXcd step = ordered_product(h, order, t / r);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(dim, dim);
        for (int k = 0; k < r; ++k) expected = step * expected;
        expected *= std::exp(std::complex<double>(0, -h.identity_offset() * t));
        CHECK(unitary_distance(circuit_unitary(c), expected) < 1e-10);
      }
    }
  }
}

TEST_CASE("cancel <= grouped <= naive CNOT counts on Hubbard steps") {
  for (int n : {2, 3, 4}) {
    PauliSum h = build_hubbard({n, n, 1.0, 4.0, 0.0});
    double t = 0.1;
    int naive = cnot_count(synth_trotter_step(h, t, 1, TrotterStrategy::Naive));
    int grouped = cnot_count(synth_trotter_step(h, t, 1, TrotterStrategy::Grouped));
    int cancel = cnot_count(synth_trotter_step(h, t, 1, TrotterStrategy::Cancel));
    CHECK(cancel <= grouped);
    CHECK(grouped <= naive);
  }
}

TEST_CASE("coupling graph paths and validation") {
  auto line = CouplingGraph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(line.has_edge(0, 1));
  CHECK(!line.has_edge(0, 2));
  CHECK(line.shortest_path(0, 2) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(CouplingGraph::from_edges(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingGraph::from_edges(2, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingGraph::from_edges(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("heavy hex is connected with degree at most three") {
  for (auto [rows, cols] : {std::pair{2, 1}, {3, 2}, {2, 3}}) {
    CouplingGraph g = heavy_hex(rows, cols);
    CHECK(g.connected());
    for (const auto& adj : g.adjacency) {
      CHECK(adj.size() <= 3);
    }
    CHECK(g.n >= rows * (4 * cols + 1));
  }
}

TEST_CASE("routing a non-adjacent CNOT on a line costs one swap") {
  Circuit c;
  c.n = 3;
  c.push(Gate::cnot(0, 2));
  auto g = CouplingGraph::from_edges(3, {{0, 1}, {1, 2}});
  auto result = route(c, g);
  CHECK(cnot_count(result.circuit) == 4);  // one SWAP (3) + the CNOT
  for (const auto& gate : result.circuit.gates) {
    CHECK(g.has_edge(gate.q0, gate.q1));
  }
}

TEST_CASE("routing preserves the unitary up to the final layout permutation") {
  Rng rng(34);
  auto g5 = CouplingGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum h = oracle::random_sum(rng, 4, 5);
    if (h.num_terms() == 0) continue;
    Circuit c = synth_trotter_step(h, 0.3, 1, TrotterStrategy::Grouped);
    auto result = route(c, g5);
    for (const auto& gate : result.circuit.gates) {
      if (gate.kind == Gate::Kind::Cnot) CHECK(g5.has_edge(gate.q0, gate.q1));
    }
    // compare column by column: routed |j emb> must equal P * (c |j>)
    Eigen::Index dim_l = Eigen::Index{1} << c.n;
    for (Eigen::Index j = 0; j < dim_l; ++j) {
      StateVector phys = StateVector::basis_state(result.circuit.n, j);
      Eigen::VectorXcd got = apply_circuit(phys, result.circuit).amplitudes;
      Eigen::VectorXcd want = apply_circuit(StateVector::basis_state(c.n, j), c)
                                  .amplitudes;
      Eigen::VectorXcd expected =
          Eigen::VectorXcd::Zero(Eigen::Index{1} << result.circuit.n);
      for (Eigen::Index k = 0; k < dim_l; ++k) {
        uint64_t phys_index = 0;
        for (int q = 0; q < c.n; ++q) {
          if ((k >> q) & 1) phys_index |= uint64_t{1} << result.final_layout[q];
        }
        expected[phys_index] = want[k];
      }
      CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("text export includes phase, singles, and CNOTs") {
  Circuit c;
  c.n = 2;
  c.global_phase = 0.5;
  c.push(Gate::single(0, detail::hadamard_matrix()));
  c.push(Gate::cnot(0, 1));
  std::ostringstream out;
  export_circuit(c, out);
  std::string text = out.str();
  CHECK(text.find("qubits 2") == 0);
  CHECK(text.find("GPHASE 0.5") != std::string::npos);
  CHECK(text.find("U 0 ") != std::string::npos);
  CHECK(text.find("CNOT 0 1") != std::string::npos);
}
