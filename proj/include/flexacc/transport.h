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

// Lossy Wasserstein distances between finitely supported distributions.
//
// W-infinity with loss gamma is computed through the characterization
//   W^gamma(P,Q) <= beta  iff  m(beta) >= 1 - gamma,
// where m(beta) is the largest mass that can be moved from P to Q using only
// pairs at distance <= beta (a bipartite max-flow). The optimum lies in the
// set {0} U {d(p,q)}, which is binary searched.

#ifndef FLEXACC_TRANSPORT_H_
#define FLEXACC_TRANSPORT_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "flexacc/histogram.h"

namespace flexacc {

class DiscreteDistribution {
 public:
  struct Atom {
    GroundPoint point;
    double mass;
  };

  // Masses must be non-negative and sum to 1 within 1e-12; zero-mass atoms
  // are dropped and repeated points merged.
  static absl::StatusOr<DiscreteDistribution> FromMasses(
      const std::vector<std::pair<GroundPoint, double>>& atoms);

  // Masses proportional to non-negative integer weights (not all zero). Keeps
  // the weights so flow computations can run in exact integer arithmetic.
  static absl::StatusOr<DiscreteDistribution> FromWeights(
      const std::vector<std::pair<GroundPoint, int64_t>>& weights);

  // x / |x| for a non-empty histogram.
  static DiscreteDistribution FromHistogram(const Histogram& x);

  static DiscreteDistribution Point(const GroundPoint& g);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  double Mass(const GroundPoint& g) const;

  bool exact() const { return !weights_.empty(); }
  const std::vector<int64_t>& weights() const { return weights_; }
  int64_t total_weight() const { return total_weight_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<int64_t> weights_;
  int64_t total_weight_ = 0;
};

struct CouplingCell {
  GroundPoint source;
  GroundPoint target;
  double mass;
};

// A (possibly lossy) coupling. Cells carry points rather than atom indices
// because padding may place mass at points outside Q's support.
struct Coupling {
  std::vector<CouplingCell> cells;

  double TotalMass() const;
  // Largest distance over cells with mass > 0.
  double MaxCellDistance() const;
};

// Delta(phi_1, P) + Delta(phi_2, Q).
double MarginalDeviation(const Coupling& phi, const DiscreteDistribution& p,
                         const DiscreteDistribution& q);

// Half the L1 distance over the union support.
double TvDistance(const DiscreteDistribution& p,
                  const DiscreteDistribution& q);

// Largest mass transportable from P to Q along pairs at distance <= beta.
double MaxTransportableMass(const DiscreteDistribution& p,
                            const DiscreteDistribution& q, double beta);

double Winf(const DiscreteDistribution& p, const DiscreteDistribution& q);

// InvalidArgument unless gamma is in [0,1].
absl::StatusOr<double> WinfLossy(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q, double gamma);

struct LossyWitness {
  double beta;
  Coupling coupling;
};

// Same beta as WinfLossy plus an optimal coupling. Untransported P mass is
// padded on the diagonal, so phi_1 = P and Delta(phi_2, Q) <= gamma.
absl::StatusOr<LossyWitness> WinfLossyWitness(const DiscreteDistribution& p,
                                              const DiscreteDistribution& q,
                                              double gamma);

struct PairFlow {
  int left;
  int right;
  int64_t amount;
};

// Integer max-flow from left to right point multisets along pairs at distance
// <= beta. Positive pair flows are appended to *flows when non-null.
int64_t BipartiteMaxFlow(
    const std::vector<std::pair<GroundPoint, int64_t>>& left,
    const std::vector<std::pair<GroundPoint, int64_t>>& right, double beta,
    std::vector<PairFlow>* flows);

// Minimum cost of moving exactly 1 - theta mass from P to Q (cost = distance
// times mass; the remaining mass is free).
absl::StatusOr<double> WAvgLossy(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q, double theta);

}  // namespace flexacc

#endif  // FLEXACC_TRANSPORT_H_
