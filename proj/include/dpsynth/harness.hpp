// Copyright 2026 the dpsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSYNTH_HARNESS_HPP
#define DPSYNTH_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpsynth/core.hpp"
#include "dpsynth/halfspaces.hpp"
#include "dpsynth/intervals.hpp"
#include "dpsynth/netmech.hpp"

namespace dpsynth {

struct BinomialInterval {
  double lower;
  double upper;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval for the
// failure probability after observing `failures` out of `trials`.
BinomialInterval clopper_pearson(std::uint64_t failures, std::uint64_t trials,
                                 double confidence = 0.95);

struct UsefulnessReport {
  std::vector<double> per_trial_errors;
  std::uint64_t failures = 0; // trials with error > alpha
  double delta_hat = 0.0;
  BinomialInterval ci{0.0, 1.0};
};

// Runs `trials` seeded trials of a mechanism; `trial_error` maps a trial
// index to that trial's max query error. delta-hat is the failure fraction.
UsefulnessReport
empirical_usefulness(const std::function<double(std::uint64_t)> &trial_error,
                     double alpha, std::uint64_t trials);

// Exhaustive exact differential-privacy audit of the net mechanism:
// enumerates every database of size n over the universe, every neighbor pair
// (single-record replacement) and every net output, and returns the max
// |ln p - ln p'|. Feasible only at desk scale; guarded by the enumeration cap.
double exact_dp_audit(const UniversePtr &universe, std::uint64_t n,
                      const QueryClass &cls, double eps, std::uint64_t net_m,
                      std::uint64_t cap = kDefaultNetEnumerationCap);

// Rejection-samples `count` random unit queries with margin >= gamma against
// the cloud. Throws ResourceLimitError when acceptance is too rare.
std::vector<std::vector<double>>
sample_margin_queries(const PointCloud &cloud, double gamma,
                      std::size_t count, Rng &rng,
                      std::uint64_t max_attempts = 1'000'000);

// ---- file formats -------------------------------------------------------

struct QueryClassSpec {
  enum class Kind { Explicit, Intervals, Halfspaces };
  Kind kind;
  // Explicit
  UniversePtr universe;
  std::optional<QueryClass> explicit_class;
  // Intervals / halfspaces
  int d = 0;
  double gamma = 0.0;
};

// Structured-text query-class spec ("kind explicit|intervals|halfspaces").
QueryClassSpec read_query_spec(const std::string &path);

// One record per line: a universe element id.
Database read_discrete_dataset(const std::string &path,
                               const UniversePtr &universe);
// One record per line: an integer point in {1..2^d}.
IntervalDatabase read_interval_dataset(const std::string &path, int d);
// One record per line: d comma-separated decimals.
PointCloud read_point_dataset(const std::string &path, std::size_t d);

// Write-temp-then-rename so partially written artifacts never appear.
void atomic_write(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

// ---- experiment driver --------------------------------------------------

struct ExperimentConfig {
  std::string mechanism; // "net" | "intervals" | "halfspaces"
  std::string dataset_path;
  std::string queries_path;
  double epsilon = 1.0;
  double alpha = 0.1;
  double delta = 0.1;
  double beta = 0.1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> override_T;
  std::optional<double> override_grid_step;
  std::optional<std::uint64_t> override_m;
  std::size_t halfspace_query_samples = 1000;
};

// Runs the configured usefulness experiment and returns the report document.
// Reports are deterministic functions of (config, seed); timing goes to
// stderr, never into the report.
std::string run_experiment(const ExperimentConfig &config);

} // namespace dpsynth

#endif // DPSYNTH_HARNESS_HPP
