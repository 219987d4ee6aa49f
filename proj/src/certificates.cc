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

#include "flexacc/certificates.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_format.h"

namespace flexacc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status Unavailable(const std::string& what) {
  return absl::FailedPreconditionError("composition unavailable: " + what);
}

}  // namespace

absl::StatusOr<AccuracyCert> AccuracyCert::Create(double alpha, double beta,
                                                  double gamma,
                                                  DistortionKind distortion,
                                                  std::string metric) {
  if (!(alpha >= 0)) return absl::InvalidArgumentError("alpha must be >= 0");
  if (!(beta >= 0)) return absl::InvalidArgumentError("beta must be >= 0");
  if (!(gamma >= 0 && gamma <= 1)) {
    return absl::InvalidArgumentError("gamma must be in [0, 1]");
  }
  return AccuracyCert{alpha, beta, gamma, distortion, std::move(metric)};
}

std::string AccuracyCert::ToString() const {
  return absl::StrFormat(
      "CERT accuracy alpha=%.10g beta=%.10g gamma=%.10g distortion=%s "
      "metric=%s",
      alpha, beta, gamma, distortion.Name(), metric);
}

std::string DPCert::ToString() const {
  return absl::StrFormat("CERT dp eps=%.10g delta=%.10g neighborhood=%s",
                         epsilon, delta, neighborhood);
}

SensitivityBound IdentitySensitivity() {
  return SensitivityBound{
      [](double alpha) { return alpha; },
      [](double beta1, double gamma1, double, double gamma2) {
        return gamma2 >= gamma1 ? beta1 : kInf;
      },
      [](double beta) { return beta; }};
}

SensitivityBound TrlapSensitivity(double tau, double t) {
  const double needed = tau * t;
  return SensitivityBound{
      [](double alpha) { return alpha; },
      [needed](double beta1, double gamma1, double alpha2, double) {
        return gamma1 == 0 && alpha2 >= needed * (1 - 1e-12) ? beta1 : kInf;
      },
      [](double beta) { return beta; }};
}

SensitivityBound DeterministicSensitivity(
    std::function<double(double)> metric_sens) {
  return SensitivityBound{
      [](double alpha) { return alpha == 0 ? 0.0 : kInf; },
      [metric_sens](double beta1, double gamma1, double, double) {
        return gamma1 == 0 ? metric_sens(beta1) : kInf;
      },
      metric_sens};
}

absl::StatusOr<AccuracyCert> ComposeAccuracy(const AccuracyCert& c1,
                                             const SensitivityBound& s1,
                                             const SensitivityBound& s2,
                                             double alpha2, double gamma2,
                                             const std::string& metric) {
  if (!(alpha2 >= 0) || !(gamma2 >= 0 && gamma2 <= 1)) {
    return absl::InvalidArgumentError("alpha2 >= 0 and gamma2 in [0,1]");
  }
  const double d = s1.distortion_sens(alpha2);
  if (!std::isfinite(d)) return Unavailable("infinite distortion sensitivity");
  const double beta = s2.error_sens(c1.beta, c1.gamma, alpha2, gamma2);
  if (!std::isfinite(beta)) return Unavailable("infinite error sensitivity");
  return AccuracyCert{c1.alpha + d, beta, gamma2, c1.distortion, metric};
}

DPCert DpPostprocess(const DPCert& c) { return c; }

absl::StatusOr<DPCert> DpPreprocess(bool pre_is_neighborhood_preserving,
                                    const DPCert& c2) {
  if (!pre_is_neighborhood_preserving) {
    return Unavailable("preprocessing is not neighborhood preserving");
  }
  return c2;
}

double TrlapDelta(double epsilon, double q) {
  return std::expm1(epsilon) / (2 * std::expm1(epsilon * q / 2));
}

absl::StatusOr<DPCert> TrlapDpCert(double epsilon, double tau, int64_t n) {
  if (!(epsilon > 0) || !(tau > 0) || n < 1) {
    return absl::InvalidArgumentError("need epsilon > 0, tau > 0, n >= 1");
  }
  const double q = tau * static_cast<double>(n);
  if (epsilon * q < 2) {
    return absl::InvalidArgumentError(
        "certificate unavailable: epsilon * tau * n < 2");
  }
  return DPCert{epsilon, TrlapDelta(epsilon, q), "hist"};
}

absl::StatusOr<DPCert> TrlapDpCertNu(double epsilon, double tau, int64_t n,
                                     double nu) {
  if (!(epsilon > 0) || !(tau > 0) || n < 1 || !(nu > 0)) {
    return absl::InvalidArgumentError(
        "need epsilon > 0, tau > 0, nu > 0, n >= 1");
  }
  if (!(epsilon * nu > std::log1p(1.0 / static_cast<double>(n)))) {
    return absl::InvalidArgumentError(
        "certificate unavailable: epsilon * nu <= ln(1 + 1/n)");
  }
  return DPCert{(1 + nu) * epsilon,
                TrlapDelta(epsilon, tau * static_cast<double>(n)), "hist"};
}

absl::StatusOr<double> SolveQ(double epsilon, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  return 2 / epsilon * std::log1p(std::expm1(epsilon) / (2 * delta));
}

absl::StatusOr<SensitivityBound> AnalyticMetricSens(const StatisticKind& kind) {
  switch (kind.type) {
    case StatisticKind::Type::kMax:
    case StatisticKind::Type::kMin:
    case StatisticKind::Type::kSupport: {
      SensitivityBound s = IdentitySensitivity();
      return DeterministicSensitivity(s.metric_sens);
    }
    case StatisticKind::Type::kMaxK:
    case StatisticKind::Type::kMode:
      break;
  }
  return absl::InvalidArgumentError("no analytic metric-sensitivity bound for " +
                                    kind.Name());
}

AccuracyCert BucketingCert(const BucketSpec& spec) {
  return AccuracyCert{0, spec.w() / 2 * std::sqrt(double(spec.dim())), 0,
                      DistortionKind::Drop(), "hist"};
}

absl::StatusOr<AccuracyCert> BucketHistCert(const MechParams& p) {
  return ComposeAccuracy(BucketingCert(p.buckets()), IdentitySensitivity(),
                         TrlapSensitivity(p.tau(), p.t()), p.alpha(), 0,
                         "hist");
}

absl::StatusOr<AccuracyCert> HbsCert(const StatisticKind& kind,
                                     const MechParams& p) {
  auto sens = AnalyticMetricSens(kind);
  if (!sens.ok()) return sens.status();
  auto hist = BucketHistCert(p);
  if (!hist.ok()) return hist.status();
  return ComposeAccuracy(*hist, IdentitySensitivity(), *sens, 0, 0,
                         kind.Name());
}

absl::StatusOr<AccuracyCert> DrmvAccuracyCert(const MechParams& p,
                                              double eta) {
  if (!(eta >= 0)) return absl::InvalidArgumentError("eta must be >= 0");
  return AccuracyCert{p.alpha() + eta * p.beta(), 0, 0,
                      DistortionKind::DropMove(eta), "hbs"};
}

}  // namespace flexacc
