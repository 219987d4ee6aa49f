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

#include "flexacc/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flexacc/mechanisms.h"
#include "flexacc/simplex.h"

namespace flexacc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Sense = LinearConstraint::Sense;

std::vector<GroundPoint> UnionSupport(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q) {
  std::vector<GroundPoint> u;
  for (const auto& a : p.atoms()) u.push_back(a.point);
  for (const auto& a : q.atoms()) u.push_back(a.point);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

absl::Status CheckOracleSize(const DiscreteDistribution& p,
                             const DiscreteDistribution& q) {
  if (p.size() > 4 || q.size() > 4) {
    return absl::ResourceExhaustedError("oracle supports at most 4 atoms/side");
  }
  return absl::OkStatus();
}

// Lossy-coupling LP over the union support. Variables: one per allowed cell,
// then |U| deviation slacks for each marginal. Returns the minimum total
// marginal deviation (objective kDeviation) or the minimum expected distance
// subject to deviation <= budget (objective kCost).
enum class Objective { kDeviation, kCost };

absl::StatusOr<double> LossyCouplingLp(const DiscreteDistribution& p,
                                       const DiscreteDistribution& q,
                                       double beta, Objective objective,
                                       double budget) {
  const std::vector<GroundPoint> u = UnionSupport(p, q);
  const size_t m = u.size();
  std::vector<std::pair<size_t, size_t>> cells;
  for (size_t a = 0; a < m; ++a) {
    for (size_t b = 0; b < m; ++b) {
      if (Distance(u[a], u[b]) <= beta) cells.emplace_back(a, b);
    }
  }
  const size_t nc = cells.size();
  const size_t nv = nc + 2 * m;
  std::vector<LinearConstraint> cons;
  LinearConstraint total{std::vector<double>(nv, 0.0), Sense::kEq, 1.0};
  for (size_t c = 0; c < nc; ++c) total.coeffs[c] = 1;
  cons.push_back(total);
  for (int side = 0; side < 2; ++side) {
    const DiscreteDistribution& target = side == 0 ? p : q;
    for (size_t a = 0; a < m; ++a) {
      const double mass = target.Mass(u[a]);
      LinearConstraint above{std::vector<double>(nv, 0.0), Sense::kGe, -mass};
      LinearConstraint below{std::vector<double>(nv, 0.0), Sense::kGe, mass};
      for (size_t c = 0; c < nc; ++c) {
        const size_t idx = side == 0 ? cells[c].first : cells[c].second;
        if (idx == a) {
          above.coeffs[c] = -1;
          below.coeffs[c] = 1;
        }
      }
      above.coeffs[nc + side * m + a] = 1;
      below.coeffs[nc + side * m + a] = 1;
      cons.push_back(above);
      cons.push_back(below);
    }
  }
  std::vector<double> cost(nv, 0.0);
  if (objective == Objective::kDeviation) {
    for (size_t j = nc; j < nv; ++j) cost[j] = 0.5;
  } else {
    for (size_t c = 0; c < nc; ++c) {
      cost[c] = Distance(u[cells[c].first], u[cells[c].second]);
    }
    LinearConstraint dev{std::vector<double>(nv, 0.0), Sense::kLe, budget};
    for (size_t j = nc; j < nv; ++j) dev.coeffs[j] = 0.5;
    cons.push_back(dev);
  }
  auto sol = SolveLp(cost, cons);
  if (!sol.ok()) return sol.status();
  return sol->objective;
}

double Bound(const Histogram& x) { return x.space().bound(); }

absl::StatusOr<double> ScalarRelease(const StatisticValue& v) {
  if (!std::holds_alternative<double>(v)) {
    return absl::InvalidArgumentError("expected a scalar release");
  }
  return std::get<double>(v);
}

}  // namespace

absl::StatusOr<AuditInstance> AuditInstance::Create(const Histogram& x,
                                                    const Histogram& x_prime,
                                                    double tau) {
  if (x.empty() || x_prime.empty()) {
    return absl::InvalidArgumentError("audit inputs must be non-empty");
  }
  if (!(tau >= 0) || tau >= 1) {
    return absl::InvalidArgumentError("tau must be in [0, 1)");
  }
  auto nb = Neighbors(x, x_prime);
  if (!nb.ok()) return nb.status();
  if (!*nb) return absl::InvalidArgumentError("inputs are not neighbors");
  std::vector<GroundPoint> bars;
  double space = 1;
  for (const auto& [g, c] : x.entries()) bars.push_back(g);
  for (const auto& [g, c] : x_prime.entries()) {
    if (x.Count(g) == 0) bars.push_back(g);
  }
  std::sort(bars.begin(), bars.end());
  for (const auto& g : bars) {
    space *= static_cast<double>(std::max(x.Count(g), x_prime.Count(g)) + 1);
  }
  if (space > kAuditOutputGuard) {
    return absl::ResourceExhaustedError("instance too large");
  }
  return AuditInstance(x, x_prime, tau, std::move(bars));
}

std::vector<std::vector<double>> AuditInstance::BarPmfs(bool first,
                                                        double epsilon) const {
  const Histogram& h = first ? x_ : x_prime_;
  const NoiseSpec spec{tau_ * static_cast<double>(h.size()), epsilon};
  std::vector<std::vector<double>> out;
  for (const auto& g : bars_) out.push_back(TrlapOutputPmf(h.Count(g), spec));
  return out;
}

absl::StatusOr<double> TightDeltaProduct(
    const std::vector<std::vector<double>>& p,
    const std::vector<std::vector<double>>& q, double epsilon) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError("bar count mismatch");
  }
  if (!(epsilon >= 0)) return absl::InvalidArgumentError("epsilon must be >= 0");
  const size_t bars = p.size();
  std::vector<size_t> radix(bars);
  double space = 1;
  for (size_t i = 0; i < bars; ++i) {
    radix[i] = std::max(p[i].size(), q[i].size());
    space *= static_cast<double>(radix[i]);
  }
  if (space > kAuditOutputGuard) {
    return absl::ResourceExhaustedError("instance too large");
  }
  const double factor = std::exp(epsilon);
  auto at = [](const std::vector<double>& v, size_t j) {
    return j < v.size() ? v[j] : 0.0;
  };
  std::vector<size_t> idx(bars, 0);
  double delta = 0;
  while (true) {
    double pp = 1;
    double qq = 1;
    for (size_t i = 0; i < bars; ++i) {
      pp *= at(p[i], idx[i]);
      qq *= at(q[i], idx[i]);
    }
    delta += std::max(0.0, pp - factor * qq);
    size_t i = 0;
    while (i < bars && ++idx[i] == radix[i]) idx[i++] = 0;
    if (i == bars) break;
  }
  return delta;
}

absl::StatusOr<double> DpDeltaExact(const AuditInstance& inst,
                                    double epsilon) {
  const auto p = inst.BarPmfs(true, epsilon);
  const auto q = inst.BarPmfs(false, epsilon);
  auto d1 = TightDeltaProduct(p, q, epsilon);
  if (!d1.ok()) return d1.status();
  auto d2 = TightDeltaProduct(q, p, epsilon);
  if (!d2.ok()) return d2.status();
  return std::max(*d1, *d2);
}

int64_t DropAllowance(double budget, int64_t n) {
  if (!(budget > 0)) return 0;
  return static_cast<int64_t>(std::floor(budget * static_cast<double>(n) + 1e-9));
}

absl::StatusOr<double> StatisticDistance(const StatisticValue& a,
                                         const StatisticValue& b) {
  if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
    return std::abs(std::get<double>(a) - std::get<double>(b));
  }
  if (std::holds_alternative<std::vector<GroundPoint>>(a) &&
      std::holds_alternative<std::vector<GroundPoint>>(b)) {
    return Dsupp(std::get<std::vector<GroundPoint>>(a),
                 std::get<std::vector<GroundPoint>>(b));
  }
  return absl::InvalidArgumentError("statistic value kinds differ");
}

absl::StatusOr<double> FlexibleError(
    const StatisticKind& kind, const Histogram& x,
    const std::optional<StatisticValue>& released, double budget) {
  if (x.empty()) return absl::InvalidArgumentError("empty histogram");
  if (!(budget >= 0) || budget >= 1) {
    return absl::InvalidArgumentError("budget must be in [0, 1)");
  }
  if (!released.has_value()) return Bound(x);
  const int64_t allowance = DropAllowance(budget, x.size());
  const auto& entries = x.entries();
  double best = kInf;
  switch (kind.type) {
    case StatisticKind::Type::kMax:
    case StatisticKind::Type::kMaxK: {
      auto r = ScalarRelease(*released);
      if (!r.ok()) return r.status();
      const int64_t k = kind.type == StatisticKind::Type::kMax ? 1 : kind.k;
      int64_t cost = 0;
      for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (cost > allowance) break;
        if (it->second >= k) {
          best = std::min(best, std::abs(it->first.x() - *r));
          cost += it->second - k + 1;
        }
      }
      break;
    }
    case StatisticKind::Type::kMin: {
      auto r = ScalarRelease(*released);
      if (!r.ok()) return r.status();
      int64_t cost = 0;
      for (const auto& [g, c] : entries) {
        if (cost > allowance) break;
        best = std::min(best, std::abs(g.x() - *r));
        cost += c;
      }
      break;
    }
    case StatisticKind::Type::kMode: {
      auto r = ScalarRelease(*released);
      if (!r.ok()) return r.status();
      for (const auto& [b, cb] : entries) {
        int64_t cost = 0;
        for (const auto& [i, ci] : entries) {
          if (i == b) continue;
          cost += std::max<int64_t>(0, ci - cb + (i < b ? 1 : 0));
        }
        if (cost <= allowance) best = std::min(best, std::abs(b.x() - *r));
      }
      break;
    }
    case StatisticKind::Type::kSupport:
      return BruteFlexibleError(kind, x, released, budget);
  }
  return std::isfinite(best) ? best : Bound(x);
}

absl::StatusOr<double> BruteFlexibleError(
    const StatisticKind& kind, const Histogram& x,
    const std::optional<StatisticValue>& released, double budget) {
  if (x.empty()) return absl::InvalidArgumentError("empty histogram");
  if (!released.has_value()) return Bound(x);
  const int64_t allowance = DropAllowance(budget, x.size());
  std::vector<std::pair<GroundPoint, int64_t>> bars(x.entries().begin(),
                                                    x.entries().end());
  double space = 1;
  for (const auto& [g, c] : bars) space *= static_cast<double>(c + 1);
  if (space > kAuditOutputGuard) {
    return absl::ResourceExhaustedError("instance too large");
  }
  std::vector<int64_t> drop(bars.size(), 0);
  double best = kInf;
  while (true) {
    int64_t dropped = 0;
    for (int64_t d : drop) dropped += d;
    if (dropped <= allowance && dropped < x.size()) {
      Histogram y(x.space());
      for (size_t i = 0; i < bars.size(); ++i) {
        if (bars[i].second - drop[i] > 0) {
          y.Set(bars[i].first, bars[i].second - drop[i]);
        }
      }
      auto v = EvalStatistic(kind, y);
      if (v.ok()) {
        auto d = StatisticDistance(*v, *released);
        if (!d.ok()) return d.status();
        best = std::min(best, *d);
      } else if (!absl::IsFailedPrecondition(v.status())) {
        return v.status();
      }
    }
    size_t i = 0;
    while (i < bars.size() && ++drop[i] > bars[i].second) drop[i++] = 0;
    if (i == bars.size()) break;
  }
  return std::isfinite(best) ? best : Bound(x);
}

bool CheckDropWitness(const Histogram& x, const Histogram& y, double budget) {
  for (const auto& [g, c] : y.entries()) {
    if (c > x.Count(g)) return false;
  }
  return x.size() - y.size() <= DropAllowance(budget, x.size());
}

absl::StatusOr<double> BruteWinfLossy(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q,
                                      double gamma) {
  if (!(gamma >= 0 && gamma <= 1)) {
    return absl::InvalidArgumentError("gamma must be in [0, 1]");
  }
  if (auto s = CheckOracleSize(p, q); !s.ok()) return s;
  const std::vector<GroundPoint> u = UnionSupport(p, q);
  std::vector<double> candidates{0.0};
  for (const auto& a : u) {
    for (const auto& b : u) candidates.push_back(Distance(a, b));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  size_t lo = 0;
  size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    auto dev = LossyCouplingLp(p, q, candidates[mid], Objective::kDeviation, 0);
    if (!dev.ok()) return dev.status();
    if (*dev <= gamma + 1e-9) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

absl::StatusOr<double> BruteWAvgLossy(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q,
                                      double theta) {
  if (!(theta >= 0 && theta <= 1)) {
    return absl::InvalidArgumentError("theta must be in [0, 1]");
  }
  if (auto s = CheckOracleSize(p, q); !s.ok()) return s;
  return LossyCouplingLp(p, q, kInf, Objective::kCost, theta + 1e-12);
}

}  // namespace flexacc
