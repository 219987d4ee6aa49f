//
// Copyright 2026 The flexacc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "flexacc/simplex.h"

#include <cmath>
#include <cstddef>

namespace flexacc {
namespace {

constexpr double kTol = 1e-11;

// Tableau with rows 0..m-1 constraints and row m the reduced costs; the last
// column is the right-hand side.
class Tableau {
 public:
  Tableau(size_t m, size_t n) : m_(m), n_(n), a_(m + 1, std::vector<double>(n + 1)),
                                basis_(m) {}

  double& at(size_t r, size_t c) { return a_[r][c]; }
  double rhs(size_t r) const { return a_[r][n_]; }
  size_t& basis(size_t r) { return basis_[r]; }

  void Pivot(size_t r, size_t c) {
    const double p = a_[r][c];
    for (double& v : a_[r]) v /= p;
    for (size_t i = 0; i <= m_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const double f = a_[i][c];
      for (size_t j = 0; j <= n_; ++j) a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  // Sets the cost row to cost - sum over basic rows, so basic columns have
  // zero reduced cost.
  void SetCosts(const std::vector<double>& cost) {
    for (size_t j = 0; j <= n_; ++j) a_[m_][j] = j < n_ ? cost[j] : 0;
    for (size_t r = 0; r < m_; ++r) {
      const double f = a_[m_][basis_[r]];
      if (f == 0) continue;
      for (size_t j = 0; j <= n_; ++j) a_[m_][j] -= f * a_[r][j];
    }
  }

  // Runs Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool Optimize(size_t allowed) {
    while (true) {
      size_t enter = allowed;
      for (size_t j = 0; j < allowed; ++j) {
        if (a_[m_][j] < -kTol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      size_t leave = m_;
      double best = 0;
      for (size_t r = 0; r < m_; ++r) {
        if (a_[r][enter] <= kTol) continue;
        const double ratio = a_[r][n_] / a_[r][enter];
        if (leave == m_ || ratio < best - kTol ||
            (std::abs(ratio - best) <= kTol && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      Pivot(leave, enter);
    }
  }

  // Objective value of the current basis (cost row stores -z).
  double Objective() const { return -a_[m_][n_]; }

 private:
  size_t m_;
  size_t n_;
  std::vector<std::vector<double>> a_;
  std::vector<size_t> basis_;
};

}  // namespace

absl::StatusOr<LpSolution> SolveLp(
    const std::vector<double>& c,
    const std::vector<LinearConstraint>& constraints) {
  const size_t n = c.size();
  const size_t m = constraints.size();
  for (const auto& con : constraints) {
    if (con.coeffs.size() != n) {
      return absl::InvalidArgumentError("constraint width mismatch");
    }
  }
  size_t slacks = 0;
  for (const auto& con : constraints) {
    if (con.sense != LinearConstraint::Sense::kEq) ++slacks;
  }
  // Columns: structural, slack/surplus, artificial (one per row).
  const size_t total = n + slacks + m;
  Tableau t(m, total);
  size_t slack_col = n;
  for (size_t r = 0; r < m; ++r) {
    const auto& con = constraints[r];
    const double sign = con.rhs < 0 ? -1.0 : 1.0;
    for (size_t j = 0; j < n; ++j) t.at(r, j) = sign * con.coeffs[j];
    if (con.sense != LinearConstraint::Sense::kEq) {
      const double s = con.sense == LinearConstraint::Sense::kLe ? 1.0 : -1.0;
      t.at(r, slack_col++) = sign * s;
    }
    t.at(r, n + slacks + r) = 1;
    t.at(r, total) = sign * con.rhs;
    t.basis(r) = n + slacks + r;
  }
  std::vector<double> phase1(total, 0.0);
  for (size_t r = 0; r < m; ++r) phase1[n + slacks + r] = 1;
  t.SetCosts(phase1);
  t.Optimize(total);
  if (t.Objective() > 1e-9) return absl::FailedPreconditionError("infeasible");
  // Drive remaining artificial variables out of the basis where possible.
  for (size_t r = 0; r < m; ++r) {
    if (t.basis(r) < n + slacks) continue;
    for (size_t j = 0; j < n + slacks; ++j) {
      if (std::abs(t.at(r, j)) > 1e-9) {
        t.Pivot(r, j);
        break;
      }
    }
  }
  std::vector<double> phase2(total, 0.0);
  for (size_t j = 0; j < n; ++j) phase2[j] = c[j];
  t.SetCosts(phase2);
  if (!t.Optimize(n + slacks)) return absl::OutOfRangeError("unbounded");
  LpSolution sol{0, std::vector<double>(n, 0.0)};
  for (size_t r = 0; r < m; ++r) {
    if (t.basis(r) < n) sol.x[t.basis(r)] = t.rhs(r);
  }
  for (size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

}  // namespace flexacc
