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

// Command line front end: benchmark runner, single mechanism runs, privacy
// and flexible-accuracy audits, and lossy W-infinity.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "flexacc/audit.h"
#include "flexacc/baselines.h"
#include "flexacc/bench.h"
#include "flexacc/certificates.h"
#include "flexacc/hist_io.h"
#include "flexacc/histogram.h"
#include "flexacc/mechanisms.h"
#include "flexacc/rng.h"
#include "flexacc/transport.h"

namespace flexacc {
namespace {

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s << "\n";
  return 2;
}

absl::StatusOr<std::vector<double>> ParseGrid(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(part, &v)) {
      return absl::InvalidArgumentError(absl::StrCat("bad number: ", part));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty grid");
  return out;
}

std::string FormatValue(const std::optional<StatisticValue>& v) {
  if (!v.has_value()) return "undefined";
  if (const double* d = std::get_if<double>(&*v)) {
    return absl::StrFormat("%.10g", *d);
  }
  std::vector<std::string> pts;
  for (const auto& g : std::get<std::vector<GroundPoint>>(*v)) {
    pts.push_back(ToString(g));
  }
  return absl::StrCat("{", absl::StrJoin(pts, " "), "}");
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

int RunBench(const BenchArgs& a) {
  auto cfgs = ReadConfigFile(a.config);
  if (!cfgs.ok()) return Fail(cfgs.status());
  std::vector<ResultRow> rows;
  for (ExperimentConfig cfg : *cfgs) {
    if (a.seed.has_value()) cfg.seed = *a.seed;
    auto r = RunExperiment(cfg, a.threads);
    if (!r.ok()) return Fail(r.status());
    rows.insert(rows.end(), r->begin(), r->end());
  }
  const std::string csv = FormatCsv(rows);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(a.out);
    if (!out) return Fail(absl::NotFoundError("cannot write " + a.out));
    out << csv;
  }
  return 0;
}

struct MechArgs {
  std::string mech;
  std::string stat = "max";
  std::string input;
  double epsilon = 1;
  double delta = 0x1.0p-20;
  uint64_t seed = 1;
  double beta = 0;
  double alpha = 0;
  int sanpoints_rounds = 10;
};

int RunMech(const MechArgs& a) {
  auto kind = ParseStatisticKind(a.stat);
  if (!kind.ok()) return Fail(kind.status());
  auto x = ReadHistogramFile(a.input);
  if (!x.ok()) return Fail(x.status());
  auto idx = MechanismIndex(a.mech);
  if (!idx.ok()) return Fail(idx.status());
  RngStream rng(a.seed);
  std::optional<StatisticValue> value;
  if (*idx == 0 || *idx == 4 || *idx == 5) {
    absl::StatusOr<Histogram> y = absl::UnknownError("unset");
    if (*idx == 0) {
      if (a.beta > 0) {
        auto p = MechParams::Create(a.alpha, a.beta, a.epsilon,
                                    x->space().bound(), x->space().dim());
        if (!p.ok()) return Fail(p.status());
        std::cout << absl::StrFormat("params alpha=%.10g beta=%.10g w=%.10g "
                                     "t=%.10g tau=%.10g\n",
                                     p->alpha(), p->beta(), p->w(), p->t(),
                                     p->tau());
        y = MechBucketHist(*x, *p, rng);
      } else {
        auto q = SolveQ(a.epsilon, a.delta);
        if (!q.ok()) return Fail(q.status());
        const double tau = *q / static_cast<double>(x->size());
        std::cout << absl::StrFormat("params q=%.10g tau=%.10g\n", *q, tau);
        y = MechTrlap(*x, tau, a.epsilon, rng);
      }
    } else if (*idx == 4) {
      y = BnsHist(*x, a.epsilon, a.delta, rng);
    } else {
      y = SanPoints(*x, a.epsilon, a.delta, a.sanpoints_rounds, rng);
    }
    if (!y.ok()) return Fail(y.status());
    std::cout << "# release\n" << FormatHistogramText(*y);
    auto v = StatisticOfRelease(*kind, *y);
    if (!v.ok()) return Fail(v.status());
    value = *v;
  } else {
    absl::StatusOr<double> v = absl::UnknownError("unset");
    if (*idx == 1) {
      auto e = ExpMech(*kind, *x, a.epsilon, rng);
      v = e.ok() ? absl::StatusOr<double>(static_cast<double>(*e)) : e.status();
    } else if (*idx == 2) {
      v = PtrMech(*kind, *x, a.epsilon, a.delta, rng);
    } else {
      v = SsMech(*kind, *x, a.epsilon, a.delta, rng);
    }
    if (!v.ok()) return Fail(v.status());
    value = *v;
  }
  std::cout << "statistic " << kind->Name() << " " << FormatValue(value)
            << "\n";
  return 0;
}

struct AuditDpArgs {
  std::string input;
  double tau = 0;
  std::string eps_grid = "0.5,1,2";
};

// Audits every neighbor obtained by removing one element from a bar.
int RunAuditDp(const AuditDpArgs& a) {
  auto x = ReadHistogramFile(a.input);
  if (!x.ok()) return Fail(x.status());
  auto grid = ParseGrid(a.eps_grid);
  if (!grid.ok()) return Fail(grid.status());
  bool violated = false;
  for (double eps : *grid) {
    double worst = 0;
    for (const auto& g : x->Support()) {
      Histogram x_prime = *x;
      x_prime.Add(g, -1);
      if (x_prime.empty()) continue;
      auto inst = AuditInstance::Create(*x, x_prime, a.tau);
      if (!inst.ok()) return Fail(inst.status());
      auto d = DpDeltaExact(*inst, eps);
      if (!d.ok()) return Fail(d.status());
      worst = std::max(worst, *d);
    }
    auto cert = TrlapDpCert(eps, a.tau, x->size() - 1);
    if (cert.ok()) {
      const bool ok = worst <= cert->delta + 1e-9;
      violated |= !ok;
      std::cout << absl::StrFormat(
          "eps=%.6g delta_exact=%.6e delta_cert=%.6e %s\n", eps, worst,
          cert->delta, ok ? "OK" : "VIOLATION");
    } else {
      std::cout << absl::StrFormat(
          "eps=%.6g delta_exact=%.6e delta_cert=unavailable (%s)\n", eps,
          worst, cert.status().message());
    }
  }
  return violated ? 1 : 0;
}

struct AuditFlexArgs {
  std::string stat = "max";
  double budget = 0.005;
  std::string input;
  std::string release;
  std::optional<double> value;
  std::optional<double> beta;
};

int RunAuditFlex(const AuditFlexArgs& a) {
  auto kind = ParseStatisticKind(a.stat);
  if (!kind.ok()) return Fail(kind.status());
  auto x = ReadHistogramFile(a.input);
  if (!x.ok()) return Fail(x.status());
  std::optional<StatisticValue> released;
  if (a.value.has_value()) {
    released = StatisticValue(*a.value);
  } else if (!a.release.empty()) {
    auto y = ReadHistogramFile(a.release, x->space().bound());
    if (!y.ok()) return Fail(y.status());
    auto v = StatisticOfRelease(*kind, *y);
    if (!v.ok()) return Fail(v.status());
    released = *v;
  } else {
    return Fail(absl::InvalidArgumentError("need --release or --value"));
  }
  auto truth = EvalStatistic(*kind, *x);
  if (!truth.ok()) return Fail(truth.status());
  double plain = x->space().bound();
  if (released.has_value()) {
    auto d = StatisticDistance(*truth, *released);
    if (!d.ok()) return Fail(d.status());
    plain = *d;
  }
  auto flex = FlexibleError(*kind, *x, released, a.budget);
  if (!flex.ok()) return Fail(flex.status());
  std::cout << "statistic " << kind->Name() << " truth "
            << FormatValue(*truth) << " release " << FormatValue(released)
            << "\n";
  std::cout << absl::StrFormat(
      "budget=%.6g drop_allowance=%d plain_err=%.10g flex_err=%.10g\n",
      a.budget, DropAllowance(a.budget, x->size()), plain, *flex);
  if (a.beta.has_value()) {
    const bool ok = *flex <= *a.beta + 1e-9;
    std::cout << absl::StrFormat("beta=%.10g %s\n", *a.beta,
                                 ok ? "OK" : "VIOLATION");
    return ok ? 0 : 1;
  }
  return 0;
}

struct WinfArgs {
  std::string p;
  std::string q;
  double gamma = 0;
};

int RunWinf(const WinfArgs& a) {
  auto x = ReadHistogramFile(a.p);
  if (!x.ok()) return Fail(x.status());
  auto y = ReadHistogramFile(a.q);
  if (!y.ok()) return Fail(y.status());
  if (x->empty() || y->empty()) {
    return Fail(absl::InvalidArgumentError("empty input"));
  }
  auto w = WinfLossy(DiscreteDistribution::FromHistogram(*x),
                     DiscreteDistribution::FromHistogram(*y), a.gamma);
  if (!w.ok()) return Fail(w.status());
  std::cout << absl::StrFormat("winf gamma=%.10g value=%.12g\n", a.gamma, *w);
  return 0;
}

}  // namespace
}  // namespace flexacc

int main(int argc, char** argv) {
  using namespace flexacc;  // NOLINT
  CLI::App app{"flexacc: flexibly accurate private histogram statistics"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "Benchmark experiments");
  bench->require_subcommand(1);
  BenchArgs bench_args;
  auto* bench_run = bench->add_subcommand("run", "Run a config, write CSV");
  bench_run->add_option("--config", bench_args.config)->required();
  bench_run->add_option("--out", bench_args.out, "CSV path, '-' for stdout");
  bench_run->add_option("--seed", bench_args.seed, "Overrides config seeds");
  bench_run->add_option("--threads", bench_args.threads)
      ->check(CLI::PositiveNumber);

  auto* mech = app.add_subcommand("mech", "Single mechanism release");
  mech->require_subcommand(1);
  MechArgs mech_args;
  auto* mech_run = mech->add_subcommand("run", "Run one mechanism");
  mech_run->add_option("--mech", mech_args.mech)->required();
  mech_run->add_option("--stat", mech_args.stat);
  mech_run->add_option("--input", mech_args.input)->required();
  mech_run->add_option("--eps", mech_args.epsilon);
  mech_run->add_option("--delta", mech_args.delta);
  mech_run->add_option("--seed", mech_args.seed);
  mech_run->add_option("--beta", mech_args.beta,
                       "buckethist bucketing error; 0 skips bucketing");
  mech_run->add_option("--alpha", mech_args.alpha, "buckethist with --beta");
  mech_run->add_option("--rounds", mech_args.sanpoints_rounds);

  auto* audit = app.add_subcommand("audit", "Privacy and accuracy audits");
  audit->require_subcommand(1);
  AuditDpArgs dp_args;
  auto* audit_dp = audit->add_subcommand("dp", "Exact delta vs certificate");
  audit_dp->add_option("--input", dp_args.input)->required();
  audit_dp->add_option("--tau", dp_args.tau)->required();
  audit_dp->add_option("--eps-grid", dp_args.eps_grid);
  AuditFlexArgs flex_args;
  auto* audit_flex = audit->add_subcommand("flex", "Flexible error");
  audit_flex->add_option("--stat", flex_args.stat);
  audit_flex->add_option("--budget", flex_args.budget);
  audit_flex->add_option("--input", flex_args.input)->required();
  audit_flex->add_option("--release", flex_args.release, "Released histogram");
  audit_flex->add_option("--value", flex_args.value, "Released scalar");
  audit_flex->add_option("--beta", flex_args.beta, "Bound to check");

  auto* transport = app.add_subcommand("transport", "Transport distances");
  transport->require_subcommand(1);
  WinfArgs winf_args;
  auto* winf = transport->add_subcommand("winf", "Lossy W-infinity");
  winf->add_option("--p", winf_args.p)->required();
  winf->add_option("--q", winf_args.q)->required();
  winf->add_option("--gamma", winf_args.gamma);

  CLI11_PARSE(app, argc, argv);
  if (bench_run->parsed()) return RunBench(bench_args);
  if (mech_run->parsed()) return RunMech(mech_args);
  if (audit_dp->parsed()) return RunAuditDp(dp_args);
  if (audit_flex->parsed()) return RunAuditFlex(flex_args);
  if (winf->parsed()) return RunWinf(winf_args);
  return 0;
}
