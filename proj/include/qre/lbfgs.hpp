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
#include <deque>
#include <functional>

namespace qre {

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking.  objective(x, grad) returns
// f(x) and fills grad.
inline MinimizeResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& objective,
    Eigen::VectorXd x0, double grad_tol = 1e-8, int max_evaluations = 500,
    int history = 10) {
  MinimizeResult result;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd grad(x.size());
  double f = objective(x, grad);
  int evals = 1;
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  while (true) {
    double gnorm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (gnorm < grad_tol || evals >= max_evaluations || x.size() == 0) {
      result.x = x;
      result.value = f;
      result.grad_inf_norm = gnorm;
      result.evaluations = evals;
      result.converged = gnorm < grad_tol;
      return result;
    }
    // two-loop recursion
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {  // not a descent direction; fall back to steepest descent
      direction = -grad;
      slope = -grad.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    double step = 1.0;
    Eigen::VectorXd x_new, grad_new(x.size());
    double f_new = f;
    bool accepted = false;
    while (evals < max_evaluations) {
      x_new = x + step * direction;
      f_new = objective(x_new, grad_new);
      ++evals;
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-16) break;
    }
    if (!accepted) {
      result.x = x;
      result.value = f;
      result.grad_inf_norm = grad.cwiseAbs().maxCoeff();
      result.evaluations = evals;
      result.converged = false;
      return result;
    }
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad_new - grad;
    double sy = s.dot(y);
    if (sy > 1e-14) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    grad = grad_new;
    f = f_new;
  }
}

}  // namespace qre
