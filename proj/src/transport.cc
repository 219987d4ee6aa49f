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

#include "flexacc/transport.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "absl/strings/str_cat.h"

namespace flexacc {
namespace {

constexpr double kMassTol = 1e-12;
constexpr int64_t kMaxExactScale = int64_t{1} << 40;

template <typename T>
class Dinic {
 public:
  Dinic(int n, T eps) : adj_(n), level_(n), next_(n), eps_(eps) {}

  int AddEdge(int u, int v, T cap) {
    adj_[u].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    adj_[v].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, T{0}});
    return static_cast<int>(edges_.size()) - 2;
  }

  T MaxFlow(int s, int t) {
    T total{0};
    while (Bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        T f = Dfs(s, t, std::numeric_limits<T>::max());
        if (f <= eps_) break;
        total += f;
      }
    }
    return total;
  }

  // Flow pushed through the edge returned by AddEdge.
  T Flow(int e) const { return edges_[e ^ 1].cap; }

 private:
  struct Edge {
    int to;
    T cap;
  };

  bool Bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<int> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > eps_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  T Dfs(int u, int t, T f) {
    if (u == t) return f;
    for (int& i = next_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Edge& e = edges_[adj_[u][i]];
      if (e.cap <= eps_ || level_[e.to] != level_[u] + 1) continue;
      const T pushed = Dfs(e.to, t, std::min(f, e.cap));
      if (pushed > eps_) {
        e.cap -= pushed;
        edges_[adj_[u][i] ^ 1].cap += pushed;
        return pushed;
      }
    }
    return T{0};
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> next_;
  T eps_;
};

struct FlowPlan {
  double mass = 0;
  // (i, j, mass) for positive flows from atom i of P to atom j of Q.
  std::vector<std::tuple<int, int, double>> flows;
};

// Returns the common integer scale for exact flows, or 0 if unavailable.
int64_t ExactScale(const DiscreteDistribution& p,
                   const DiscreteDistribution& q) {
  if (!p.exact() || !q.exact()) return 0;
  const int64_t wp = p.total_weight();
  const int64_t wq = q.total_weight();
  const __int128 l = static_cast<__int128>(wp / std::gcd(wp, wq)) * wq;
  if (l > kMaxExactScale) return 0;
  return static_cast<int64_t>(l);
}

template <typename T>
FlowPlan SolvePlanImpl(const DiscreteDistribution& p,
                       const DiscreteDistribution& q, double beta,
                       const std::vector<T>& pcap, const std::vector<T>& qcap,
                       double unit, T eps) {
  const int n = p.size();
  const int m = q.size();
  const int s = n + m;
  const int t = n + m + 1;
  Dinic<T> flow(n + m + 2, eps);
  for (int i = 0; i < n; ++i) flow.AddEdge(s, i, pcap[i]);
  for (int j = 0; j < m; ++j) flow.AddEdge(n + j, t, qcap[j]);
  std::vector<std::tuple<int, int, int>> pair_edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (Distance(p.atoms()[i].point, q.atoms()[j].point) <= beta) {
        pair_edges.emplace_back(
            i, j, flow.AddEdge(i, n + j, std::min(pcap[i], qcap[j])));
      }
    }
  }
  FlowPlan plan;
  plan.mass = static_cast<double>(flow.MaxFlow(s, t)) / unit;
  for (const auto& [i, j, e] : pair_edges) {
    const T f = flow.Flow(e);
    if (f > eps) plan.flows.emplace_back(i, j, static_cast<double>(f) / unit);
  }
  return plan;
}

FlowPlan SolvePlan(const DiscreteDistribution& p,
                   const DiscreteDistribution& q, double beta) {
  const int64_t scale = ExactScale(p, q);
  if (scale > 0) {
    std::vector<int64_t> pcap, qcap;
    for (int64_t w : p.weights()) pcap.push_back(w * (scale / p.total_weight()));
    for (int64_t w : q.weights()) qcap.push_back(w * (scale / q.total_weight()));
    return SolvePlanImpl<int64_t>(p, q, beta, pcap, qcap,
                                  static_cast<double>(scale), 0);
  }
  std::vector<double> pcap, qcap;
  for (const auto& a : p.atoms()) pcap.push_back(a.mass);
  for (const auto& a : q.atoms()) qcap.push_back(a.mass);
  return SolvePlanImpl<double>(p, q, beta, pcap, qcap, 1.0, 1e-15);
}

std::vector<double> CandidateBetas(const DiscreteDistribution& p,
                                   const DiscreteDistribution& q) {
  std::vector<double> c{0.0};
  for (const auto& a : p.atoms()) {
    for (const auto& b : q.atoms()) c.push_back(Distance(a.point, b.point));
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

absl::Status CheckUnitInterval(double v, const char* name) {
  if (!(v >= 0 && v <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must lie in [0,1], got ", v));
  }
  return absl::OkStatus();
}

// Index of the smallest feasible candidate beta.
size_t SearchBeta(const DiscreteDistribution& p, const DiscreteDistribution& q,
                  double gamma, const std::vector<double>& candidates) {
  size_t lo = 0;
  size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (SolvePlan(p, q, candidates[mid]).mass >= 1 - gamma - kMassTol) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::FromMasses(
    const std::vector<std::pair<GroundPoint, double>>& atoms) {
  std::map<GroundPoint, double> merged;
  double total = 0;
  for (const auto& [g, m] : atoms) {
    if (!(m >= 0) || !std::isfinite(m)) {
      return absl::InvalidArgumentError("masses must be finite and >= 0");
    }
    if (m > 0) merged[g] += m;
    total += m;
  }
  if (std::abs(total - 1) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("masses sum to ", total, ", not 1"));
  }
  DiscreteDistribution d;
  for (const auto& [g, m] : merged) d.atoms_.push_back({g, m});
  return d;
}

absl::StatusOr<DiscreteDistribution> DiscreteDistribution::FromWeights(
    const std::vector<std::pair<GroundPoint, int64_t>>& weights) {
  std::map<GroundPoint, int64_t> merged;
  int64_t total = 0;
  for (const auto& [g, w] : weights) {
    if (w < 0) return absl::InvalidArgumentError("weights must be >= 0");
    if (w > 0) merged[g] += w;
    total += w;
  }
  if (total == 0) return absl::InvalidArgumentError("all weights are zero");
  DiscreteDistribution d;
  d.total_weight_ = total;
  for (const auto& [g, w] : merged) {
    d.atoms_.push_back({g, static_cast<double>(w) / static_cast<double>(total)});
    d.weights_.push_back(w);
  }
  return d;
}

DiscreteDistribution DiscreteDistribution::FromHistogram(const Histogram& x) {
  std::vector<std::pair<GroundPoint, int64_t>> w(x.entries().begin(),
                                                 x.entries().end());
  return *FromWeights(w);
}

DiscreteDistribution DiscreteDistribution::Point(const GroundPoint& g) {
  return *FromWeights({{g, 1}});
}

double DiscreteDistribution::Mass(const GroundPoint& g) const {
  for (const auto& a : atoms_) {
    if (a.point == g) return a.mass;
  }
  return 0;
}

double Coupling::TotalMass() const {
  double s = 0;
  for (const auto& c : cells) s += c.mass;
  return s;
}

double Coupling::MaxCellDistance() const {
  double d = 0;
  for (const auto& c : cells) {
    if (c.mass > 0) d = std::max(d, Distance(c.source, c.target));
  }
  return d;
}

double MarginalDeviation(const Coupling& phi, const DiscreteDistribution& p,
                         const DiscreteDistribution& q) {
  std::map<GroundPoint, double> d1, d2;
  for (const auto& c : phi.cells) {
    d1[c.source] += c.mass;
    d2[c.target] += c.mass;
  }
  for (const auto& a : p.atoms()) d1[a.point] -= a.mass;
  for (const auto& a : q.atoms()) d2[a.point] -= a.mass;
  double s = 0;
  for (const auto& [g, v] : d1) s += std::abs(v);
  for (const auto& [g, v] : d2) s += std::abs(v);
  return s / 2;
}

double TvDistance(const DiscreteDistribution& p,
                  const DiscreteDistribution& q) {
  std::map<GroundPoint, double> diff;
  for (const auto& a : p.atoms()) diff[a.point] += a.mass;
  for (const auto& a : q.atoms()) diff[a.point] -= a.mass;
  double s = 0;
  for (const auto& [g, v] : diff) s += std::abs(v);
  return std::min(1.0, s / 2);
}

double MaxTransportableMass(const DiscreteDistribution& p,
                            const DiscreteDistribution& q, double beta) {
  return SolvePlan(p, q, beta).mass;
}

double Winf(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return *WinfLossy(p, q, 0);
}

absl::StatusOr<double> WinfLossy(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q, double gamma) {
  if (auto s = CheckUnitInterval(gamma, "gamma"); !s.ok()) return s;
  if (gamma >= 1) return 0.0;
  const std::vector<double> candidates = CandidateBetas(p, q);
  return candidates[SearchBeta(p, q, gamma, candidates)];
}

absl::StatusOr<LossyWitness> WinfLossyWitness(const DiscreteDistribution& p,
                                              const DiscreteDistribution& q,
                                              double gamma) {
  if (auto s = CheckUnitInterval(gamma, "gamma"); !s.ok()) return s;
  const std::vector<double> candidates = CandidateBetas(p, q);
  LossyWitness w;
  w.beta = gamma >= 1 ? 0.0 : candidates[SearchBeta(p, q, gamma, candidates)];
  const FlowPlan plan = SolvePlan(p, q, w.beta);
  std::vector<double> out(p.size(), 0);
  for (const auto& [i, j, f] : plan.flows) {
    w.coupling.cells.push_back({p.atoms()[i].point, q.atoms()[j].point, f});
    out[i] += f;
  }
  for (int i = 0; i < p.size(); ++i) {
    const double residual = p.atoms()[i].mass - out[i];
    if (residual > 0) {
      w.coupling.cells.push_back(
          {p.atoms()[i].point, p.atoms()[i].point, residual});
    }
  }
  return w;
}

int64_t BipartiteMaxFlow(
    const std::vector<std::pair<GroundPoint, int64_t>>& left,
    const std::vector<std::pair<GroundPoint, int64_t>>& right, double beta,
    std::vector<PairFlow>* flows) {
  const int n = static_cast<int>(left.size());
  const int m = static_cast<int>(right.size());
  const int s = n + m;
  const int t = n + m + 1;
  Dinic<int64_t> flow(n + m + 2, 0);
  for (int i = 0; i < n; ++i) flow.AddEdge(s, i, left[i].second);
  for (int j = 0; j < m; ++j) flow.AddEdge(n + j, t, right[j].second);
  std::vector<std::tuple<int, int, int>> pair_edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (Distance(left[i].first, right[j].first) <= beta) {
        pair_edges.emplace_back(
            i, j,
            flow.AddEdge(i, n + j, std::min(left[i].second, right[j].second)));
      }
    }
  }
  const int64_t total = flow.MaxFlow(s, t);
  if (flows != nullptr) {
    for (const auto& [i, j, e] : pair_edges) {
      if (flow.Flow(e) > 0) flows->push_back({i, j, flow.Flow(e)});
    }
  }
  return total;
}

absl::StatusOr<double> WAvgLossy(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q, double theta) {
  if (auto s = CheckUnitInterval(theta, "theta"); !s.ok()) return s;
  const int n = p.size();
  const int m = q.size();
  const int src = n + m;
  const int dst = n + m + 1;
  const int nodes = n + m + 2;
  struct Arc {
    int to;
    double cap;
    double cost;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj(nodes);
  auto add = [&](int u, int v, double cap, double cost) {
    adj[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap, cost});
    adj[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, 0, -cost});
  };
  for (int i = 0; i < n; ++i) add(src, i, p.atoms()[i].mass, 0);
  for (int j = 0; j < m; ++j) add(n + j, dst, q.atoms()[j].mass, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      add(i, n + j, std::min(p.atoms()[i].mass, q.atoms()[j].mass),
          Distance(p.atoms()[i].point, q.atoms()[j].point));
    }
  }
  constexpr double kEps = 1e-15;
  double remaining = 1 - theta;
  double cost = 0;
  const double inf = std::numeric_limits<double>::infinity();
  while (remaining > kEps) {
    std::vector<double> dist(nodes, inf);
    std::vector<int> via(nodes, -1);
    std::vector<bool> queued(nodes, false);
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      queued[u] = false;
      for (int id : adj[u]) {
        const Arc& a = arcs[id];
        if (a.cap <= kEps) continue;
        if (dist[u] + a.cost < dist[a.to] - 1e-15) {
          dist[a.to] = dist[u] + a.cost;
          via[a.to] = id;
          if (!queued[a.to]) {
            queued[a.to] = true;
            queue.push_back(a.to);
          }
        }
      }
    }
    if (dist[dst] == inf) break;
    double push = remaining;
    for (int v = dst; v != src; v = arcs[via[v] ^ 1].to) {
      push = std::min(push, arcs[via[v]].cap);
    }
    for (int v = dst; v != src; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].cap -= push;
      arcs[via[v] ^ 1].cap += push;
    }
    cost += push * dist[dst];
    remaining -= push;
  }
  return std::max(0.0, cost);
}

}  // namespace flexacc
