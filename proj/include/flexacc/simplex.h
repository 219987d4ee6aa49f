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

// A small dense two-phase simplex solver (Bland's rule) for oracle LPs.

#ifndef FLEXACC_SIMPLEX_H_
#define FLEXACC_SIMPLEX_H_

#include <vector>

#include "absl/status/statusor.h"

namespace flexacc {

struct LinearConstraint {
  enum class Sense { kLe, kEq, kGe };

  std::vector<double> coeffs;
  Sense sense;
  double rhs;
};

struct LpSolution {
  double objective;
  std::vector<double> x;
};

// Minimizes c.x subject to the constraints and x >= 0. FailedPrecondition
// ("infeasible") or OutOfRange ("unbounded") when no optimum exists.
absl::StatusOr<LpSolution> SolveLp(
    const std::vector<double>& c,
    const std::vector<LinearConstraint>& constraints);

}  // namespace flexacc

#endif  // FLEXACC_SIMPLEX_H_
