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

#include "flexacc/bench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "flexacc/audit.h"
#include "flexacc/baselines.h"
#include "flexacc/certificates.h"
#include "flexacc/mechanisms.h"

namespace flexacc {
namespace {

int64_t Scaled(double height, double scale) {
  return std::max<int64_t>(0, std::llround(height * scale));
}

absl::StatusOr<double> ParseNumber(absl::string_view s) {
  s = absl::StripAsciiWhitespace(s);
  double v;
  const size_t caret = s.find('^');
  if (caret != absl::string_view::npos) {
    double base, exponent;
    if (!absl::SimpleAtod(s.substr(0, caret), &base) ||
        !absl::SimpleAtod(s.substr(caret + 1), &exponent)) {
      return absl::InvalidArgumentError(absl::StrCat("bad number: ", s));
    }
    return std::pow(base, exponent);
  }
  if (!absl::SimpleAtod(s, &v)) {
    return absl::InvalidArgumentError(absl::StrCat("bad number: ", s));
  }
  return v;
}

absl::StatusOr<int64_t> ParseInt(absl::string_view s) {
  int64_t v;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(s), &v)) {
    return absl::InvalidArgumentError(absl::StrCat("bad integer: ", s));
  }
  return v;
}

absl::StatusOr<std::vector<std::pair<int64_t, int>>> ParseSteps(
    absl::string_view s) {
  std::vector<std::pair<int64_t, int>> steps;
  for (absl::string_view part : absl::StrSplit(s, ',', absl::SkipEmpty())) {
    part = absl::StripAsciiWhitespace(part);
    if (part.empty()) continue;
    std::vector<absl::string_view> hw = absl::StrSplit(part, 'x');
    if (hw.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("step must be <height>x<width>: ", part));
    }
    auto h = ParseInt(hw[0]);
    auto w = ParseInt(hw[1]);
    if (!h.ok()) return h.status();
    if (!w.ok()) return w.status();
    if (*h < 0 || *w < 1) {
      return absl::InvalidArgumentError(absl::StrCat("bad step: ", part));
    }
    steps.emplace_back(*h, static_cast<int>(*w));
  }
  if (steps.empty()) return absl::InvalidArgumentError("empty step list");
  return steps;
}

absl::Status SetKey(ExperimentConfig& cfg, absl::string_view key,
                    absl::string_view value) {
  GeneratorSpec& g = cfg.generator;
  auto number = [&](double* out) -> absl::Status {
    auto v = ParseNumber(value);
    if (!v.ok()) return v.status();
    *out = *v;
    return absl::OkStatus();
  };
  auto integer = [&](auto* out) -> absl::Status {
    auto v = ParseInt(value);
    if (!v.ok()) return v.status();
    *out = static_cast<std::remove_pointer_t<decltype(out)>>(*v);
    return absl::OkStatus();
  };
  if (key == "id") return integer(&cfg.id);
  if (key == "name") {
    cfg.name = std::string(value);
    return absl::OkStatus();
  }
  if (key == "generator") {
    const std::string v = absl::AsciiStrToLower(value);
    if (v == "step") {
      g.type = GeneratorSpec::Type::kStep;
    } else if (v == "cauchy") {
      g.type = GeneratorSpec::Type::kCauchy;
    } else if (v == "poisson") {
      g.type = GeneratorSpec::Type::kPoisson;
    } else if (v == "noisy_step") {
      g.type = GeneratorSpec::Type::kNoisyStep;
    } else {
      return absl::InvalidArgumentError(absl::StrCat("unknown generator: ", v));
    }
    return absl::OkStatus();
  }
  if (key == "steps") {
    auto steps = ParseSteps(value);
    if (!steps.ok()) return steps.status();
    g.steps = *steps;
    return absl::OkStatus();
  }
  if (key == "statistic") {
    auto k = ParseStatisticKind(value);
    if (!k.ok()) return k.status();
    cfg.statistic = *k;
    return absl::OkStatus();
  }
  if (key == "epsilons") {
    cfg.epsilons.clear();
    for (absl::string_view e : absl::StrSplit(value, ',', absl::SkipEmpty())) {
      auto v = ParseNumber(e);
      if (!v.ok()) return v.status();
      cfg.epsilons.push_back(*v);
    }
    return absl::OkStatus();
  }
  if (key == "mechanisms") {
    cfg.mechanisms.clear();
    for (absl::string_view m : absl::StrSplit(value, ',', absl::SkipEmpty())) {
      m = absl::StripAsciiWhitespace(m);
      if (auto idx = MechanismIndex(m); !idx.ok()) return idx.status();
      cfg.mechanisms.emplace_back(m);
    }
    return absl::OkStatus();
  }
  if (key == "delta") return number(&cfg.delta);
  if (key == "datasets") return integer(&cfg.datasets);
  if (key == "runs") return integer(&cfg.runs);
  if (key == "drop_budget") return number(&cfg.drop_budget);
  if (key == "seed") return integer(&cfg.seed);
  if (key == "scale") return number(&g.scale);
  if (key == "beta_fraction") return number(&cfg.beta_fraction);
  if (key == "sanpoints_rounds") return integer(&cfg.sanpoints_rounds);
  if (key == "bars") return integer(&g.bars);
  if (key == "cauchy_median") return number(&g.cauchy_median);
  if (key == "cauchy_scale") return number(&g.cauchy_scale);
  if (key == "items") return integer(&g.items);
  if (key == "zero_tail") return integer(&g.zero_tail);
  if (key == "poisson_mean") return number(&g.poisson_mean);
  if (key == "step_noise") return integer(&g.step_noise);
  return absl::InvalidArgumentError(absl::StrCat("unknown key: ", key));
}

absl::Status Validate(const ExperimentConfig& cfg) {
  if (cfg.epsilons.empty()) return absl::InvalidArgumentError("no epsilons");
  for (double e : cfg.epsilons) {
    if (!(e > 0)) return absl::InvalidArgumentError("epsilons must be > 0");
  }
  if (!(cfg.delta > 0 && cfg.delta < 1)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  if (cfg.datasets < 1 || cfg.runs < 1) {
    return absl::InvalidArgumentError("datasets and runs must be >= 1");
  }
  if (!(cfg.drop_budget >= 0 && cfg.drop_budget < 1)) {
    return absl::InvalidArgumentError("drop_budget must be in [0, 1)");
  }
  if (!(cfg.beta_fraction >= 0)) {
    return absl::InvalidArgumentError("beta_fraction must be >= 0");
  }
  if (cfg.mechanisms.empty()) return absl::InvalidArgumentError("no mechanisms");
  if (cfg.generator.DomainBars() < 1) {
    return absl::InvalidArgumentError("generator has no bars");
  }
  if (!(cfg.generator.scale > 0)) {
    return absl::InvalidArgumentError("scale must be > 0");
  }
  if (cfg.statistic.type == StatisticKind::Type::kMin ||
      cfg.statistic.type == StatisticKind::Type::kSupport) {
    return absl::InvalidArgumentError("bench statistics: max, maxk:<k>, mode");
  }
  return absl::OkStatus();
}

// Parameters of the bucketed truncated Laplace mechanism for one dataset.
struct OurParams {
  double q = 0;
  double tau = 0;
  double beta = 0;
  std::optional<MechParams> params;  // unset without bucketing
  bool cert_unavailable = false;
};

absl::StatusOr<OurParams> DeriveParams(const ExperimentConfig& cfg,
                                       const Histogram& x, double epsilon) {
  OurParams out;
  auto q = SolveQ(epsilon, cfg.delta);
  if (!q.ok()) return q.status();
  out.q = *q;
  out.tau = out.q / static_cast<double>(x.size());
  const double bound = x.space().bound();
  double t = bound;
  if (cfg.beta_fraction > 0) {
    out.beta = cfg.beta_fraction * bound;
    auto buckets = BucketSpec::Create(2 * out.beta, bound, 1);
    if (!buckets.ok()) return buckets.status();
    t = buckets->t();
  }
  constexpr double kMaxTau = 1 - 1e-9;
  if (out.tau * t >= 1 || !TrlapDpCert(epsilon, out.tau, x.size()).ok()) {
    out.cert_unavailable = true;
  }
  if (out.tau * t >= 1) out.tau = kMaxTau / t;
  if (cfg.beta_fraction > 0) {
    auto p = MechParams::Create(out.tau * t, out.beta, epsilon, bound, 1);
    if (!p.ok()) return p.status();
    out.params = *p;
  }
  return out;
}

std::optional<double> ScalarOf(const std::optional<StatisticValue>& v) {
  if (!v.has_value()) return std::nullopt;
  return std::get<double>(*v);
}

struct RunOutcome {
  double err = 0;
  double flex = 0;
};

}  // namespace

int GeneratorSpec::DomainBars() const {
  if (type == Type::kStep || type == Type::kNoisyStep) {
    int total = 0;
    for (const auto& [h, w] : steps) total += w;
    return total;
  }
  return bars;
}

absl::StatusOr<Histogram> GenerateDataset(const GeneratorSpec& spec,
                                          RngStream& rng) {
  const int bars = spec.DomainBars();
  if (bars < 1) return absl::InvalidArgumentError("generator has no bars");
  std::vector<int64_t> h(bars, 0);
  switch (spec.type) {
    case GeneratorSpec::Type::kStep:
    case GeneratorSpec::Type::kNoisyStep: {
      int pos = 0;
      for (const auto& [height, width] : spec.steps) {
        for (int i = 0; i < width; ++i, ++pos) {
          double v = static_cast<double>(height);
          if (spec.type == GeneratorSpec::Type::kNoisyStep) {
            v += static_cast<double>(rng.UniformInt(2 * spec.step_noise + 1) -
                                     spec.step_noise);
          }
          h[pos] = Scaled(v, spec.scale);
        }
      }
      break;
    }
    case GeneratorSpec::Type::kCauchy: {
      const int64_t items = Scaled(static_cast<double>(spec.items), spec.scale);
      for (int64_t drawn = 0; drawn < items;) {
        const double v =
            spec.cauchy_median +
            spec.cauchy_scale * std::tan(std::numbers::pi * (rng.Uniform01() - 0.5));
        if (!(v >= 0 && v < bars)) continue;
        ++h[static_cast<int>(std::floor(v))];
        ++drawn;
      }
      break;
    }
    case GeneratorSpec::Type::kPoisson: {
      std::poisson_distribution<int64_t> poisson(spec.poisson_mean);
      for (int i = 0; i < bars; ++i) {
        h[i] = Scaled(static_cast<double>(poisson(rng.engine())), spec.scale);
      }
      break;
    }
  }
  for (int i = std::max(0, bars - spec.zero_tail); i < bars; ++i) h[i] = 0;
  return Histogram::FromBars(h, bars);
}

absl::StatusOr<int> MechanismIndex(absl::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kMechanismNames)); ++i) {
    if (name == kMechanismNames[i]) return i;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown mechanism: ", name));
}

absl::StatusOr<std::vector<ExperimentConfig>> ParseConfig(
    absl::string_view text) {
  std::vector<ExperimentConfig> out;
  ExperimentConfig current;
  bool touched = false;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != absl::string_view::npos) line = line.substr(0, hash);
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (line == "[experiment]") {
      if (touched) out.push_back(current);
      current = ExperimentConfig();
      touched = true;
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected key = value"));
    }
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (auto s = SetKey(current, key, value); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", s.message()));
    }
    touched = true;
  }
  if (touched) out.push_back(current);
  for (const auto& cfg : out) {
    if (auto s = Validate(cfg); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("experiment ", cfg.id, ": ", s.message()));
    }
  }
  if (out.empty()) return absl::InvalidArgumentError("no experiments");
  return out;
}

absl::StatusOr<std::vector<ExperimentConfig>> ReadConfigFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

absl::StatusOr<std::vector<ResultRow>> RunExperiment(
    const ExperimentConfig& cfg, int threads) {
  if (auto s = Validate(cfg); !s.ok()) return s;
  std::vector<int> mech_index;
  for (const auto& m : cfg.mechanisms) {
    auto idx = MechanismIndex(m);
    if (!idx.ok()) return idx.status();
    mech_index.push_back(*idx);
  }
  const size_t nm = cfg.mechanisms.size();
  const size_t ne = cfg.epsilons.size();
  const size_t per_cell = static_cast<size_t>(cfg.datasets) * cfg.runs;
  const uint64_t exp_seed = SplitSeed(cfg.seed, {static_cast<uint64_t>(cfg.id)});
  const double bound = cfg.generator.DomainBars();

  std::vector<RunOutcome> outcomes(nm * ne * per_cell);
  std::vector<std::vector<char>> cert_flag(
      cfg.datasets, std::vector<char>(ne, 0));
  std::vector<double> q_values(ne, 0);
  std::vector<absl::Status> errors(cfg.datasets);

  auto run_dataset = [&](int d) -> absl::Status {
    RngStream drng(SplitSeed(exp_seed, {static_cast<uint64_t>(d), 1ULL << 32}));
    auto x = GenerateDataset(cfg.generator, drng);
    if (!x.ok()) return x.status();
    if (x->empty()) return absl::FailedPreconditionError("empty dataset");
    auto truth = EvalScalarStatistic(cfg.statistic, *x);
    if (!truth.ok()) return truth.status();
    std::optional<StabilityProfile> profile;
    for (int idx : mech_index) {
      if ((idx == 2 || idx == 3) && !profile.has_value()) {
        auto p = ComputeStability(cfg.statistic, *x);
        if (!p.ok()) return p.status();
        profile = *p;
      }
    }
    for (size_t e = 0; e < ne; ++e) {
      const double eps = cfg.epsilons[e];
      std::optional<OurParams> ours;
      for (size_t m = 0; m < nm; ++m) {
        if (mech_index[m] != 0) continue;
        auto p = DeriveParams(cfg, *x, eps);
        if (!p.ok()) return p.status();
        ours = *p;
        cert_flag[d][e] = p->cert_unavailable;
        q_values[e] = p->q;
      }
      for (size_t m = 0; m < nm; ++m) {
        for (int r = 0; r < cfg.runs; ++r) {
          RngStream rng(SplitSeed(
              exp_seed, {static_cast<uint64_t>(d), static_cast<uint64_t>(r),
                         static_cast<uint64_t>(mech_index[m]),
                         static_cast<uint64_t>(e)}));
          std::optional<double> release;
          absl::StatusOr<Histogram> hist = absl::UnknownError("unset");
          bool from_hist = false;
          switch (mech_index[m]) {
            case 0:
              hist = ours->params.has_value()
                         ? MechBucketHist(*x, *ours->params, rng)
                         : MechTrlap(*x, ours->tau, eps, rng);
              from_hist = true;
              break;
            case 1: {
              auto v = ExpMech(cfg.statistic, *x, eps, rng);
              if (!v.ok()) return v.status();
              release = static_cast<double>(*v);
              break;
            }
            case 2: {
              auto v = PtrMech(*profile, static_cast<int>(bound), eps,
                               cfg.delta, rng);
              if (!v.ok()) return v.status();
              release = *v;
              break;
            }
            case 3: {
              auto v = SsMech(*profile, eps, cfg.delta, rng);
              if (!v.ok()) return v.status();
              release = *v;
              break;
            }
            case 4:
              hist = BnsHist(*x, eps, cfg.delta, rng);
              from_hist = true;
              break;
            case 5:
              hist = SanPoints(*x, eps, cfg.delta,
                               std::min<int>(cfg.sanpoints_rounds, bound), rng);
              from_hist = true;
              break;
          }
          if (from_hist) {
            if (!hist.ok()) return hist.status();
            auto v = StatisticOfRelease(cfg.statistic, *hist);
            if (!v.ok()) return v.status();
            release = ScalarOf(*v);
          }
          RunOutcome& out = outcomes[(m * ne + e) * per_cell +
                                     static_cast<size_t>(d) * cfg.runs + r];
          out.err = release.has_value()
                        ? std::min(bound, std::abs(*release - *truth))
                        : bound;
          std::optional<StatisticValue> rel;
          if (release.has_value()) rel = StatisticValue(*release);
          auto flex = FlexibleError(cfg.statistic, *x, rel, cfg.drop_budget);
          if (!flex.ok()) return flex.status();
          out.flex = std::min(bound, *flex);
        }
      }
    }
    return absl::OkStatus();
  };

  const int workers = std::max(1, std::min(threads, cfg.datasets));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int d = next++; d < cfg.datasets; d = next++) {
        errors[d] = run_dataset(d);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& s : errors) {
    if (!s.ok()) return s;
  }

  std::vector<ResultRow> rows;
  for (size_t m = 0; m < nm; ++m) {
    for (size_t e = 0; e < ne; ++e) {
      ResultRow row;
      row.experiment = cfg.id;
      row.mechanism = cfg.mechanisms[m];
      row.epsilon = cfg.epsilons[e];
      row.runs = static_cast<int>(per_cell);
      double sum = 0, sum_flex = 0, sum_sq = 0;
      for (size_t i = 0; i < per_cell; ++i) {
        const RunOutcome& o = outcomes[(m * ne + e) * per_cell + i];
        const double pct = 100 * o.err / bound;
        sum += pct;
        sum_sq += pct * pct;
        sum_flex += 100 * o.flex / bound;
        row.max_flex_err = std::max(row.max_flex_err, o.flex);
      }
      const double n = static_cast<double>(per_cell);
      row.mean_err_pct = sum / n;
      row.mean_flex_err_pct = sum_flex / n;
      if (per_cell > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
        row.stderr_pct = std::sqrt(var / n);
      }
      const int idx = mech_index[m];
      if (idx == 0) {
        row.beta = cfg.beta_fraction * bound;
        bool unavailable = false;
        for (int d = 0; d < cfg.datasets; ++d) unavailable |= cert_flag[d][e];
        if (unavailable) row.flags.push_back("cert_unavailable");
        row.flags.push_back(absl::StrFormat("q=%.4g", q_values[e]));
        row.flags.push_back(row.beta > 0
                                ? absl::StrFormat("beta=%.4g", row.beta)
                                : std::string("no_bucketing"));
      }
      if (idx == 5) row.flags.push_back("approximate_reproduction");
      if (cfg.generator.type == GeneratorSpec::Type::kCauchy) {
        row.flags.push_back("cauchy_rejection");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string FormatCsv(const std::vector<ResultRow>& rows) {
  std::string out = absl::StrCat(kCsvHeader, "\n");
  for (const auto& r : rows) {
    absl::StrAppendFormat(&out, "%d,%s,%.6g,%.4f,%.4f,%.4f,%d,%s\n",
                          r.experiment, r.mechanism, r.epsilon, r.mean_err_pct,
                          r.mean_flex_err_pct, r.stderr_pct, r.runs,
                          absl::StrJoin(r.flags, ";"));
  }
  return out;
}

}  // namespace flexacc
