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

// Batch front end: Hamiltonian generation, measurement grouping, Trotter
// synthesis/routing, Krylov convergence scans, QPE planning, ADAPT runs, and
// the combined resource table.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "qre/adapt.hpp"
#include "qre/grouping.hpp"
#include "qre/hamlib.hpp"
#include "qre/krylov.hpp"
#include "qre/qpe.hpp"

namespace {

using nlohmann::json;

// All outputs are written atomically: temp file in the target directory, then
// rename.
void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

qre::CommutationRelation parse_relation(const std::string& name) {
  if (name == "qubitwise" || name == "qw") return qre::CommutationRelation::QubitWise;
  if (name == "full") return qre::CommutationRelation::Full;
  throw CLI::ValidationError("relation", "expected 'qubitwise' or 'full'");
}

qre::TrotterStrategy parse_strategy(const std::string& name) {
  if (name == "naive") return qre::TrotterStrategy::Naive;
  if (name == "grouped") return qre::TrotterStrategy::Grouped;
  if (name == "cancel") return qre::TrotterStrategy::Cancel;
  throw CLI::ValidationError("strategy", "expected 'naive', 'grouped', or 'cancel'");
}

qre::Threshold parse_threshold(const std::string& text) {
  if (text == "none") return qre::Threshold::none();
  return qre::Threshold::value(std::stod(text));
}

// Hartree-Fock analog: the basis state with `particles` occupied sites that
// minimizes the diagonal Hamiltonian matrix element.
uint64_t reference_index_for_particles(const qre::PauliSum& h, int particles) {
  if (particles < 0 || particles > h.n())
    throw std::invalid_argument("particle number out of range");
  uint64_t dim = uint64_t{1} << h.n();
  double best = 0.0;
  uint64_t best_index = 0;
  bool found = false;
  for (uint64_t j = 0; j < dim; ++j) {
    if (std::popcount(j) != particles) continue;
    double diag = h.identity_offset();
    for (const auto& t : h.terms()) {
      if (t.word.x != 0) continue;  // off-diagonal
      diag += (std::popcount(j & t.word.z) & 1) ? -t.coefficient : t.coefficient;
    }
    if (!found || diag < best) {
      best = diag;
      best_index = j;
      found = true;
    }
  }
  return best_index;
}

std::string scan_to_csv(const std::vector<qre::KrylovScanRow>& rows) {
  std::ostringstream out;
  out << "d,n_trotter,energy,error,status\n";
  for (const auto& row : rows) {
    out << row.d << "," << row.n_trotter << "," << fmt(row.energy) << ","
        << fmt(row.error) << "," << row.status << "\n";
  }
  return out.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(field);
  return fields;
}

int run_ham(const std::string& out_path, const qre::HubbardSpec& spec) {
  qre::PauliSum h = qre::build_hubbard(spec);
  std::ostringstream text;
  {
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "qre_ham_fmt.txt";
    qre::save_pauli_file(h, tmp);
    std::ifstream in(tmp);
    text << in.rdbuf();
    std::filesystem::remove(tmp);
  }
  atomic_write(out_path, text.str());
  json summary{{"n", h.n()},
               {"terms", h.num_terms()},
               {"offset", h.identity_offset()},
               {"output", out_path}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_group(const std::string& in_path, const std::string& out_path,
              const std::string& relation, double epsilon, bool ground) {
  qre::PauliSum h = qre::load_pauli_file(in_path);
  auto mg = qre::sorted_insertion_group(h, parse_relation(relation));
  auto mm = qre::maximally_mixed_shot_bound(h, mg, epsilon);
  std::optional<qre::ShotEstimate> state_est;
  if (ground) {
    qre::StateVector g = qre::ground_state(h);
    state_est = qre::estimate_shots(h, mg, g.amplitudes, epsilon);
  }
  std::ostringstream out;
  out << "group,n_terms,sigma_mm" << (ground ? ",sigma_state" : "") << "\n";
  for (size_t g = 0; g < mg.groups.size(); ++g) {
    out << g << "," << mg.groups[g].size() << "," << fmt(mm.per_group_sigma[g]);
    if (ground) out << "," << fmt(state_est->per_group_sigma[g]);
    out << "\n";
  }
  atomic_write(out_path, out.str());
  json summary{{"n_groups", mg.groups.size()},
               {"epsilon", epsilon},
               {"shots_mm", mm.total_shots},
               {"output", out_path}};
  if (ground) summary["shots_state"] = state_est->total_shots;
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_trotter(const std::string& in_path, const std::string& out_path, double time,
                int steps, const std::string& strategy, int route_rows,
                int route_cols) {
  qre::PauliSum h = qre::load_pauli_file(in_path);
  qre::Circuit c = qre::synth_trotter_step(h, time, steps, parse_strategy(strategy));
  json summary;
  auto base = qre::count_gates(c);
  summary["n_1q"] = base.n_1q;
  summary["n_2q"] = base.n_2q;
  summary["depth"] = base.depth;
  if (route_rows > 0 && route_cols > 0) {
    auto graph = qre::heavy_hex(route_rows, route_cols);
    auto routed = qre::route(c, graph);
    auto routed_count = qre::count_gates(routed.circuit);
    summary["routed_n_2q"] = routed_count.n_2q;
    summary["routing_overhead"] =
        static_cast<double>(routed_count.n_2q) / static_cast<double>(base.n_2q);
    c = std::move(routed.circuit);
  }
  std::ostringstream text;
  qre::export_circuit(c, text);
  atomic_write(out_path, text.str());
  summary["output"] = out_path;
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_krylov_scan(const std::string& in_path, const std::string& out_path,
                    double overlap, int dmax, const std::string& trotter_list,
                    uint64_t seed, double time, const std::string& threshold,
                    int jobs) {
  qre::PauliSum h = qre::load_pauli_file(in_path);
  std::vector<int> trotter_steps;
  for (const auto& piece : split(trotter_list, ',')) {
    if (!piece.empty()) trotter_steps.push_back(std::stoi(piece));
  }
  qre::Threshold thr = parse_threshold(threshold);
  qre::SpectralInfo spec = qre::dense_spectrum(h);
  double t = time > 0.0 ? time : M_PI / (4.0 * spec.norm2);
  double bound = qre::norm_upper_bound(h);
  qre::StateVector b = qre::prepare_overlap_state(h, overlap, seed);
  std::vector<qre::EvolutionSpec> columns{qre::EvolutionSpec::exact()};
  for (int r : trotter_steps) columns.push_back(qre::EvolutionSpec::trotter(r));
  std::vector<std::vector<qre::KrylovScanRow>> column_rows(columns.size());
  if (jobs < 1) jobs = 1;
  std::mutex next_mutex;
  size_t next = 0;
  auto worker = [&]() {
    while (true) {
      size_t k;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= columns.size()) return;
        k = next++;
      }
      column_rows[k] =
          qre::scan_column(h, b, dmax, columns[k], t, thr, bound, spec.e0);
    }
  };
  std::vector<std::thread> pool;
  size_t thread_count = std::min<size_t>(jobs, columns.size());
  for (size_t k = 0; k + 1 < thread_count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<qre::KrylovScanRow> rows;
  for (auto& col : column_rows) rows.insert(rows.end(), col.begin(), col.end());
  atomic_write(out_path, scan_to_csv(rows));
  json summary{{"rows", rows.size()},
               {"t", t},
               {"reference_energy", spec.e0},
               {"output", out_path}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_qpe_plan(const std::string& in_path, const std::string& out_path,
                 double epsilon, const std::string& e1_mode) {
  qre::PauliSum h = qre::load_pauli_file(in_path);
  qre::GateCount base =
      qre::count_gates(qre::synth_trotter_step(h, 1.0, 1, qre::TrotterStrategy::Grouped));
  double e1 = qre::v2_bound(h);
  std::optional<double> e1_exact;
  if (e1_mode == "exact") {
    qre::StateVector g = qre::ground_state(h);
    e1_exact = qre::v2_exact(h, g);
    e1 = std::abs(*e1_exact);
  } else if (e1_mode != "bound") {
    throw CLI::ValidationError("e1-mode", "expected 'bound' or 'exact'");
  }
  auto plan = qre::qpe_plan(h, epsilon, e1, base);
  plan.e1_exact = e1_exact;
  json report{{"n_qubits", plan.n_qubits},
              {"term_count", plan.term_count},
              {"h_max", plan.h_max},
              {"e1_bound", plan.e1_bound},
              {"t", plan.t},
              {"dt", plan.dt},
              {"n_t", plan.n_t},
              {"n_c", plan.n_c},
              {"n_2q", plan.n_2q},
              {"norm_is_exact", plan.norm_is_exact}};
  if (plan.e1_exact) report["e1_exact"] = *plan.e1_exact;
  atomic_write(out_path, report.dump(2) + "\n");
  std::cout << report.dump() << "\n";
  return 0;
}

int run_adapt(const std::string& in_path, const std::string& out_path, int particles,
              int64_t reference_index, double grad_tol, int max_iters,
              double target) {
  qre::PauliSum h = qre::load_pauli_file(in_path);
  uint64_t index = reference_index >= 0
                       ? static_cast<uint64_t>(reference_index)
                       : reference_index_for_particles(h, particles);
  qre::StateVector ref = qre::StateVector::basis_state(h.n(), index);
  auto pool = qre::build_qe_pool(h.n());
  qre::AdaptStop stop;
  stop.grad_tol = grad_tol;
  stop.max_iters = max_iters;
  if (target > 0.0) {
    stop.epsilon_target = target;
    stop.reference_energy = qre::dense_spectrum(h).e0;
  }
  auto state = qre::adapt_run(h, ref, pool, stop);
  std::ostringstream out;
  out << "iter,selected_label,gradient,energy,n_2q_cumulative\n";
  for (const auto& row : state.trace) {
    out << row.iteration << "," << row.selected_label << "," << fmt(row.gradient)
        << "," << fmt(row.energy) << "," << row.n_2q_cumulative << "\n";
  }
  atomic_write(out_path, out.str());
  json summary{{"energy", state.energy},
               {"iterations", state.iterations},
               {"status", state.status},
               {"reference_index", index},
               {"gradient_norm", state.gradient_norm},
               {"output", out_path}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_report(const std::string& ham_path, const std::string& system,
               const std::string& adapt_path, const std::string& krylov_path,
               const std::string& qpe_path, const std::string& out_path) {
  qre::PauliSum h = qre::load_pauli_file(ham_path);
  auto groups = qre::sorted_insertion_group(h, qre::CommutationRelation::QubitWise);
  int64_t n_groups = static_cast<int64_t>(groups.groups.size());
  std::ostringstream out;
  out << "system,n,N_terms,N_groups,algorithm,n_Q,n_C,n_2Q,provenance\n";
  auto emit = [&](const std::string& algorithm, int64_t n_q, int64_t n_c,
                  int64_t n_2q, const std::string& provenance) {
    out << system << "," << h.n() << "," << h.num_terms() << "," << n_groups << ","
        << algorithm << "," << n_q << "," << n_c << "," << n_2q << ","
        << provenance << "\n";
  };
  if (!adapt_path.empty()) {
    std::ifstream in(adapt_path);
    if (!in) throw std::runtime_error("cannot open " + adapt_path);
    std::string line;
    std::getline(in, line);  // header
    int64_t n_2q = 0;
    int64_t iters = 0;
    while (std::getline(in, line)) {
      auto fields = split(line, ',');
      if (fields.size() < 5) continue;
      n_2q = std::stoll(fields[4]);
      ++iters;
    }
    // one energy evaluation per iteration, one circuit per measurement group
    emit("adapt", h.n(), n_groups * std::max<int64_t>(iters, 1), n_2q, "exact");
  }
  if (!krylov_path.empty()) {
    std::ifstream in(krylov_path);
    if (!in) throw std::runtime_error("cannot open " + krylov_path);
    std::string line;
    std::getline(in, line);
    int64_t best_d = 1;
    int64_t max_trotter = 1;
    while (std::getline(in, line)) {
      auto fields = split(line, ',');
      if (fields.size() < 5) continue;
      if (fields[4] == "ok") best_d = std::max<int64_t>(best_d, std::stoll(fields[0]));
      max_trotter = std::max<int64_t>(max_trotter, std::stoll(fields[1]));
    }
    qre::GateCount base = qre::count_gates(
        qre::synth_trotter_step(h, 1.0, 1, qre::TrotterStrategy::Grouped));
    auto res = qre::krylov_resources(h.n(), best_d, n_groups, base, max_trotter);
    emit("krylov", res.n_qubits, res.n_circuits, res.n_2q, "estimated-upper");
  }
  if (!qpe_path.empty()) {
    std::ifstream in(qpe_path);
    if (!in) throw std::runtime_error("cannot open " + qpe_path);
    json report = json::parse(in);
    emit("qpe", report.at("n_qubits").get<int64_t>(),
         report.at("n_c").get<int64_t>(), report.at("n_2q").get<int64_t>(),
         report.value("norm_is_exact", false) && report.contains("e1_exact")
             ? "exact"
             : "estimated-upper");
  }
  atomic_write(out_path, out.str());
  std::cout << json{{"output", out_path}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum resource estimation toolkit"};
  app.require_subcommand(1);

  // ham hubbard
  auto* ham = app.add_subcommand("ham", "Hamiltonian generation");
  ham->require_subcommand(1);
  auto* hubbard = ham->add_subcommand("hubbard", "spinless Fermi-Hubbard lattice");
  qre::HubbardSpec spec;
  std::string ham_out;
  hubbard->add_option("--nx", spec.nx, "lattice extent x")->required();
  hubbard->add_option("--ny", spec.ny, "lattice extent y")->required();
  hubbard->add_option("--t", spec.t, "hopping amplitude");
  hubbard->add_option("--u", spec.u, "interaction strength");
  hubbard->add_option("--mu", spec.mu, "chemical potential");
  hubbard->add_option("-o,--output", ham_out, "output Pauli file")->required();

  // group
  auto* group = app.add_subcommand("group", "measurement grouping and shots");
  std::string group_in, group_out, relation = "qubitwise";
  double group_eps = 1e-3;
  bool group_ground = false;
  group->add_option("-i,--input", group_in, "Pauli file")->required();
  group->add_option("-o,--output", group_out, "group CSV")->required();
  group->add_option("--relation", relation, "qubitwise|full");
  group->add_option("--epsilon", group_eps, "target precision (Ha)");
  group->add_flag("--ground", group_ground, "also estimate shots on the ground state");

  // trotter
  auto* trotter = app.add_subcommand("trotter", "Trotter circuit synthesis");
  std::string trotter_in, trotter_out, strategy = "grouped";
  double trotter_time = 1.0;
  int trotter_steps = 1, route_rows = 0, route_cols = 0;
  trotter->add_option("-i,--input", trotter_in, "Pauli file")->required();
  trotter->add_option("-o,--output", trotter_out, "circuit text file")->required();
  trotter->add_option("--time", trotter_time, "evolution time");
  trotter->add_option("--steps", trotter_steps, "Trotter steps");
  trotter->add_option("--strategy", strategy, "naive|grouped|cancel");
  trotter->add_option("--route-rows", route_rows, "heavy-hex rows (enables routing)");
  trotter->add_option("--route-cols", route_cols, "heavy-hex cols (enables routing)");

  // krylov scan
  auto* krylov = app.add_subcommand("krylov", "quantum Krylov studies");
  krylov->require_subcommand(1);
  auto* scan = krylov->add_subcommand("scan", "convergence scan over d and Trotter steps");
  std::string scan_in, scan_out, trotter_list, threshold = "none";
  double overlap = 0.85, scan_time = 0.0;
  int dmax = 8, jobs = 1;
  uint64_t seed = 7;
  scan->add_option("-i,--input", scan_in, "Pauli file")->required();
  scan->add_option("-o,--output", scan_out, "scan CSV")->required();
  scan->add_option("--overlap", overlap, "|<b|psi0>|^2");
  scan->add_option("--dmax", dmax, "maximum subspace dimension");
  scan->add_option("--trotter", trotter_list, "comma-separated Trotter step counts");
  scan->add_option("--seed", seed, "reference-state seed");
  scan->add_option("--time", scan_time, "evolution time (0 = pi/(4 ||H||))");
  scan->add_option("--threshold", threshold, "'none' or S-eigenvalue cutoff");
  scan->add_option("--jobs", jobs, "parallel scan columns");

  // qpe plan
  auto* qpe = app.add_subcommand("qpe", "phase-estimation planning");
  qpe->require_subcommand(1);
  auto* plan = qpe->add_subcommand("plan", "Trotter-step and circuit counts");
  std::string plan_in, plan_out, e1_mode = "bound";
  double plan_eps = 1e-3;
  plan->add_option("-i,--input", plan_in, "Pauli file")->required();
  plan->add_option("-o,--output", plan_out, "report JSON")->required();
  plan->add_option("--epsilon", plan_eps, "target accuracy (Ha)");
  plan->add_option("--e1-mode", e1_mode, "bound|exact");

  // adapt run
  auto* adapt = app.add_subcommand("adapt", "adaptive ansatz optimization");
  adapt->require_subcommand(1);
  auto* adapt_run_cmd = adapt->add_subcommand("run", "grow and optimize the ansatz");
  std::string adapt_in, adapt_out;
  int particles = 0, max_iters = 30;
  int64_t reference_index = -1;
  double grad_tol = 1e-3, target = 0.0;
  adapt_run_cmd->add_option("-i,--input", adapt_in, "Pauli file")->required();
  adapt_run_cmd->add_option("-o,--output", adapt_out, "trace CSV")->required();
  adapt_run_cmd->add_option("--particles", particles, "reference particle number");
  adapt_run_cmd->add_option("--reference-index", reference_index,
                            "explicit reference basis index (overrides --particles)");
  adapt_run_cmd->add_option("--grad-tol", grad_tol, "pool gradient stop threshold");
  adapt_run_cmd->add_option("--max-iters", max_iters, "maximum ADAPT iterations");
  adapt_run_cmd->add_option("--target", target, "stop at |E - E0| < target (0 = off)");

  // report table
  auto* report = app.add_subcommand("report", "combined outputs");
  report->require_subcommand(1);
  auto* table = report->add_subcommand("table", "resource table CSV");
  std::string table_ham, table_system = "hubbard", table_adapt, table_krylov,
              table_qpe, table_out;
  table->add_option("-i,--input", table_ham, "Pauli file")->required();
  table->add_option("--system", table_system, "system label");
  table->add_option("--adapt", table_adapt, "adapt trace CSV");
  table->add_option("--krylov", table_krylov, "krylov scan CSV");
  table->add_option("--qpe", table_qpe, "qpe report JSON");
  table->add_option("-o,--output", table_out, "table CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    return 2;
  }

  try {
    if (hubbard->parsed()) return run_ham(ham_out, spec);
    if (group->parsed()) {
      return run_group(group_in, group_out, relation, group_eps, group_ground);
    }
    if (trotter->parsed()) {
      return run_trotter(trotter_in, trotter_out, trotter_time, trotter_steps,
                         strategy, route_rows, route_cols);
    }
    if (scan->parsed()) {
      return run_krylov_scan(scan_in, scan_out, overlap, dmax, trotter_list, seed,
                             scan_time, threshold, jobs);
    }
    if (plan->parsed()) return run_qpe_plan(plan_in, plan_out, plan_eps, e1_mode);
    if (adapt_run_cmd->parsed()) {
      return run_adapt(adapt_in, adapt_out, particles, reference_index, grad_tol,
                       max_iters, target);
    }
    if (table->parsed()) {
      return run_report(table_ham, table_system, table_adapt, table_krylov,
                        table_qpe, table_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "compute"}}.dump() << "\n";
    return 1;
  }
  return 2;
}
