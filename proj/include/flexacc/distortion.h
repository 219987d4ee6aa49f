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

// Measures of distortion between histograms: drop, move and drop-then-move.

#ifndef FLEXACC_DISTORTION_H_
#define FLEXACC_DISTORTION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "boost/rational.hpp"
#include "flexacc/histogram.h"

namespace flexacc {

struct DistortionKind {
  enum class Type { kDrop, kMove, kDropMove };

  Type type = Type::kDrop;
  double eta = 0;

  static DistortionKind Drop() { return {Type::kDrop, 0}; }
  static DistortionKind Move() { return {Type::kMove, 0}; }
  static DistortionKind DropMove(double eta) { return {Type::kDropMove, eta}; }

  std::string Name() const;
};

// (|x| - |y|) / |x| if y <= x pointwise, +inf otherwise. InvalidArgument if x
// is empty.
absl::StatusOr<double> Drop(const Histogram& x, const Histogram& y);

// W-infinity of the normalized histograms when |x| = |y| (0 if both are
// empty), +inf otherwise.
double Move(const Histogram& x, const Histogram& y);

struct DrmvOptions {
  // Exhaustive enumeration is used while |x| <= enumeration_bound.
  int64_t enumeration_bound = 24;
  // Evaluated as the intermediate histogram instead of searching.
  std::optional<Histogram> witness;
};

struct DrmvResult {
  double value;
  // False when the value comes from a witness instead of enumeration.
  bool exact;
  // The intermediate z attaining value (empty when value is +inf).
  Histogram witness;
};

// inf over z of drop(x,z) + eta * move(z,y). Any finite z has z <= x and
// |z| = |y|, so the drop term is forced to (|x| - |y|) / |x|.
absl::StatusOr<DrmvResult> Drmv(const Histogram& x, const Histogram& y,
                                double eta, const DrmvOptions& options = {});

// Dispatches on kind; DropMove uses Drmv with default options.
absl::StatusOr<double> Distort(const DistortionKind& kind, const Histogram& x,
                               const Histogram& y);

// sup of the distortion from x over histograms with positive probability.
absl::StatusOr<double> Dhat(
    const DistortionKind& kind, const Histogram& x,
    const std::vector<std::pair<Histogram, double>>& distribution);

using Rational = boost::rational<int64_t>;
using FractionalHistogram = std::map<GroundPoint, Rational>;

struct DropMoveSwitchResult {
  double alpha1;  // move(x, z)
  Rational alpha2;  // drop(z, y)
  FractionalHistogram s;
  // Cells (g_x, g_y, count) of the coupling between s and y, scaled by |y|.
  std::vector<std::tuple<GroundPoint, GroundPoint, Rational>> coupling;
  // Largest-remainder rounding of s and its guarantees, recomputed.
  Histogram rounded;
  double rounded_drop;
  double rounded_move;
};

// Given move(x,z) = alpha1 and drop(z,y) = alpha2 < 1, builds s with
// drop(x,s) = alpha2 and move(s,y) <= alpha1 by transporting y back along an
// optimal x-z coupling.
absl::StatusOr<DropMoveSwitchResult> DropMoveSwitch(const Histogram& x,
                                                    const Histogram& z,
                                                    const Histogram& y);

Rational FractionalSize(const FractionalHistogram& s);

// drop(x, s) in exact arithmetic; nullopt encodes +inf.
std::optional<Rational> FractionalDrop(const Histogram& x,
                                       const FractionalHistogram& s);

// W-infinity between s/|s| and y/|y|; +inf if the sizes differ.
double FractionalMove(const FractionalHistogram& s, const Histogram& y);

// Floors every bar, then hands the remaining units to the largest fractional
// parts (ties to the smaller point).
Histogram LargestRemainderRound(const FractionalHistogram& s,
                                const MetricSpace& space);

}  // namespace flexacc

#endif  // FLEXACC_DISTORTION_H_
