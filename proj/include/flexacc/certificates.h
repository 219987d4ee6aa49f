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

// Flexible-accuracy and differential-privacy certificates, their composition
// rules and the noise-width solver for the truncated Laplace mechanism.

#ifndef FLEXACC_CERTIFICATES_H_
#define FLEXACC_CERTIFICATES_H_

#include <functional>
#include <string>

#include "absl/status/statusor.h"
#include "flexacc/distortion.h"
#include "flexacc/histogram.h"
#include "flexacc/mechanisms.h"

namespace flexacc {

// (alpha, beta, gamma)-accuracy w.r.t. a distortion and an output metric.
struct AccuracyCert {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  DistortionKind distortion = DistortionKind::Drop();
  std::string metric = "hist";

  // InvalidArgument unless alpha >= 0, beta >= 0, gamma in [0,1].
  static absl::StatusOr<AccuracyCert> Create(double alpha, double beta,
                                             double gamma,
                                             DistortionKind distortion,
                                             std::string metric);

  // "CERT accuracy alpha=... beta=... gamma=... distortion=... metric=...".
  std::string ToString() const;
};

struct DPCert {
  double epsilon = 0;
  double delta = 0;
  std::string neighborhood = "hist";

  // "CERT dp eps=... delta=... neighborhood=...".
  std::string ToString() const;
};

// Monotone upper bounds on the sensitivities of a function (and mechanism).
// Unavailable bounds evaluate to +inf.
struct SensitivityBound {
  // alpha -> bound on the distortion sensitivity.
  std::function<double(double)> distortion_sens;
  // (beta1, gamma1, alpha2, gamma2) -> bound on the error sensitivity.
  std::function<double(double, double, double, double)> error_sens;
  // beta -> bound on the metric sensitivity.
  std::function<double(double)> metric_sens;
};

// The identity function computed exactly: alpha -> alpha, error beta1 when no
// extra loss is introduced (gamma2 >= gamma1), metric beta -> beta.
SensitivityBound IdentitySensitivity();

// The truncated Laplace mechanism over t bars with tau = alpha / t, for the
// identity function under drop distortion: error beta1 whenever gamma1 = 0 and
// alpha2 >= tau t.
SensitivityBound TrlapSensitivity(double tau, double t);

// A deterministic mechanism computing its own function exactly: error
// metric_sens(beta1) when gamma1 = 0.
SensitivityBound DeterministicSensitivity(
    std::function<double(double)> metric_sens);

// alpha = alpha1 + D1(alpha2), beta = tau2(beta1, gamma1; alpha2, gamma2),
// gamma = gamma2. FailedPrecondition ("composition unavailable") when a
// sensitivity is infinite.
absl::StatusOr<AccuracyCert> ComposeAccuracy(const AccuracyCert& c1,
                                             const SensitivityBound& s1,
                                             const SensitivityBound& s2,
                                             double alpha2, double gamma2,
                                             const std::string& metric);

DPCert DpPostprocess(const DPCert& c);

// FailedPrecondition ("composition unavailable") unless the preprocessing map
// is neighborhood preserving.
absl::StatusOr<DPCert> DpPreprocess(bool pre_is_neighborhood_preserving,
                                    const DPCert& c2);

// (e^eps - 1) / (2 (e^{eps q / 2} - 1)).
double TrlapDelta(double epsilon, double q);

// (epsilon, TrlapDelta(epsilon, tau n)); InvalidArgument unless
// epsilon tau n >= 2.
absl::StatusOr<DPCert> TrlapDpCert(double epsilon, double tau, int64_t n);

// ((1 + nu) epsilon, TrlapDelta(epsilon, tau n)); InvalidArgument unless
// epsilon nu > ln(1 + 1/n).
absl::StatusOr<DPCert> TrlapDpCertNu(double epsilon, double tau, int64_t n,
                                     double nu);

// q = (2/eps) ln(1 + (e^eps - 1) / (2 delta)), the inverse of TrlapDelta.
absl::StatusOr<double> SolveQ(double epsilon, double delta);

// beta -> beta for Max, Min and Support; InvalidArgument otherwise.
absl::StatusOr<SensitivityBound> AnalyticMetricSens(const StatisticKind& kind);

// (0, (w/2) sqrt(d), 0) for the identity w.r.t. drop and dhist.
AccuracyCert BucketingCert(const BucketSpec& spec);

// Bucketing composed with the truncated Laplace mechanism: (alpha, beta, 0).
absl::StatusOr<AccuracyCert> BucketHistCert(const MechParams& p);

// BucketHist post-processed by the statistic: (alpha, Delta(beta), 0).
absl::StatusOr<AccuracyCert> HbsCert(const StatisticKind& kind,
                                     const MechParams& p);

// (alpha + eta beta, 0, 0) w.r.t. drop-then-move with trade-off eta.
absl::StatusOr<AccuracyCert> DrmvAccuracyCert(const MechParams& p, double eta);

}  // namespace flexacc

#endif  // FLEXACC_CERTIFICATES_H_
