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
#include <cstdint>
#include <vector>

#include "qre/dense.hpp"
#include "qre/pauli.hpp"

namespace qre {

enum class CommutationRelation { QubitWise, Full };

struct MeasurementGroups {
  CommutationRelation relation = CommutationRelation::QubitWise;
  std::vector<std::vector<size_t>> groups;  // term indices into the source sum
};

// Greedy sorted insertion: terms by descending |coefficient| (ties by
// lexicographic word order), each inserted into the first compatible group.
inline MeasurementGroups sorted_insertion_group(const PauliSum& h,
                                                CommutationRelation relation) {
  const auto& terms = h.terms();
  std::vector<size_t> order(terms.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double ca = std::abs(terms[a].coefficient), cb = std::abs(terms[b].coefficient);
    if (ca != cb) return ca > cb;
    return lex_less(terms[a].word, terms[b].word);
  });
  auto compatible = [&](const PauliWord& a, const PauliWord& b) {
    return relation == CommutationRelation::QubitWise ? qubit_wise_commutes(a, b)
                                                      : commutes(a, b);
  };
  MeasurementGroups result;
  result.relation = relation;
  for (size_t idx : order) {
    bool placed = false;
    for (auto& group : result.groups) {
      bool fits = true;
      for (size_t member : group) {
        if (!compatible(terms[idx].word, terms[member].word)) {
          fits = false;
          break;
        }
      }
      if (fits) {
        group.push_back(idx);
        placed = true;
        break;
      }
    }
    if (!placed) result.groups.push_back({idx});
  }
  return result;
}

struct ShotEstimate {
  double epsilon = 0.0;
  std::vector<double> per_group_sigma;
  uint64_t total_shots = 0;
};

namespace detail {

inline ShotEstimate shots_from_sigmas(std::vector<double> sigmas, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  double sum = 0.0;
  for (double s : sigmas) sum += s;
  ShotEstimate est;
  est.epsilon = epsilon;
  est.per_group_sigma = std::move(sigmas);
  double ratio = sum / epsilon;
  est.total_shots = static_cast<uint64_t>(std::ceil(ratio * ratio));
  return est;
}

}  // namespace detail

// Shot count to reach precision epsilon on the supplied state.  Group sigma is
// sqrt(sum_i c_i^2 Var(P_i)) with Var(P) = 1 - <P>^2; in-group covariances are
// neglected.
inline ShotEstimate estimate_shots(const PauliSum& h, const MeasurementGroups& groups,
                                   const Eigen::VectorXcd& state, double epsilon) {
  if (state.size() != (Eigen::Index{1} << h.n()))
    throw std::invalid_argument("state dimension does not match Hamiltonian");
  if (std::abs(state.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("state vector is not normalized");
  std::vector<double> expval(h.num_terms());
  for (size_t i = 0; i < h.num_terms(); ++i) {
    expval[i] = state.dot(apply_word(h.terms()[i].word, state)).real();
  }
  std::vector<double> sigmas;
  sigmas.reserve(groups.groups.size());
  for (const auto& group : groups.groups) {
    double var = 0.0;
    for (size_t i : group) {
      double c = h.terms()[i].coefficient;
      var += c * c * (1.0 - expval[i] * expval[i]);
    }
    sigmas.push_back(std::sqrt(std::max(var, 0.0)));
  }
  return detail::shots_from_sigmas(std::move(sigmas), epsilon);
}

// Worst case over states: every <P_i> = 0, sigma_g = sqrt(sum c_i^2).
inline ShotEstimate maximally_mixed_shot_bound(const PauliSum& h,
                                               const MeasurementGroups& groups,
                                               double epsilon) {
  std::vector<double> sigmas;
  sigmas.reserve(groups.groups.size());
  for (const auto& group : groups.groups) {
    double var = 0.0;
    for (size_t i : group) {
      double c = h.terms()[i].coefficient;
      var += c * c;
    }
    sigmas.push_back(std::sqrt(var));
  }
  return detail::shots_from_sigmas(std::move(sigmas), epsilon);
}

}  // namespace qre
