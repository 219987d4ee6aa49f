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

// Synthetic data generators and the benchmark runner.
//
// Seeding: the experiment seed is SplitSeed(master, {id}); a dataset is drawn
// from SplitSeed(exp, {dataset, 2^32}); a mechanism run from
// SplitSeed(exp, {dataset, run, mechanism index, epsilon index}), where the
// mechanism index is fixed per name (buckethist 0, exponential 1, ptr 2,
// smooth_sensitivity 3, bns 4, sanpoints 5).

#ifndef FLEXACC_BENCH_H_
#define FLEXACC_BENCH_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "flexacc/histogram.h"
#include "flexacc/rng.h"

namespace flexacc {

struct GeneratorSpec {
  enum class Type { kStep, kCauchy, kPoisson, kNoisyStep };

  Type type = Type::kStep;
  // (height, width) runs for step generators.
  std::vector<std::pair<int64_t, int>> steps;
  int bars = 100;
  double cauchy_median = 45;
  double cauchy_scale = 4;
  int64_t items = 10000;
  // Rightmost bars emptied after sampling.
  int zero_tail = 0;
  double poisson_mean = 250;
  // Noisy steps add a uniform integer in [-step_noise, step_noise] per bar.
  int step_noise = 3;
  // Heights are multiplied by scale and rounded.
  double scale = 1;

  // Number of bars of the generated domain.
  int DomainBars() const;
};

absl::StatusOr<Histogram> GenerateDataset(const GeneratorSpec& spec,
                                          RngStream& rng);

// "buckethist" is the bucketed truncated Laplace mechanism followed by the
// statistic; the rest are the baselines.
inline constexpr const char* kMechanismNames[] = {
    "buckethist", "exponential", "ptr", "smooth_sensitivity", "bns",
    "sanpoints"};

absl::StatusOr<int> MechanismIndex(absl::string_view name);

struct ExperimentConfig {
  int id = 1;
  std::string name;
  GeneratorSpec generator;
  StatisticKind statistic = StatisticKind::Max();
  std::vector<double> epsilons = {0.25, 0.5, 1, 2};
  double delta = 0x1.0p-20;
  int datasets = 10;
  int runs = 10;
  double drop_budget = 0.005;
  std::vector<std::string> mechanisms = {"buckethist", "exponential", "ptr",
                                         "smooth_sensitivity", "bns",
                                         "sanpoints"};
  uint64_t seed = 1;
  // beta = beta_fraction * B; 0 runs the truncated Laplace mechanism on the
  // bars directly.
  double beta_fraction = 0.05;
  int sanpoints_rounds = 10;
};

// "key = value" lines, '#' comments; "[experiment]" starts a new experiment.
absl::StatusOr<std::vector<ExperimentConfig>> ParseConfig(
    absl::string_view text);
absl::StatusOr<std::vector<ExperimentConfig>> ReadConfigFile(
    const std::string& path);

struct ResultRow {
  int experiment = 0;
  std::string mechanism;
  double epsilon = 0;
  double mean_err_pct = 0;
  double mean_flex_err_pct = 0;
  double stderr_pct = 0;
  int runs = 0;
  std::vector<std::string> flags;
  // Not part of the CSV.
  double max_flex_err = 0;
  double beta = 0;
};

// Runs every (mechanism, epsilon) cell; rows are ordered by the config's
// mechanism list, then epsilon. Results do not depend on threads.
absl::StatusOr<std::vector<ResultRow>> RunExperiment(
    const ExperimentConfig& cfg, int threads = 1);

inline constexpr const char* kCsvHeader =
    "experiment,mechanism,epsilon,mean_err_pct,mean_flex_err_pct,stderr_pct,"
    "runs,flags";

// Header line plus one line per row; flags are joined with ';'.
std::string FormatCsv(const std::vector<ResultRow>& rows);

}  // namespace flexacc

#endif  // FLEXACC_BENCH_H_
