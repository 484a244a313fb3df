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

#include "dpsynth/expmech.hpp"

#include <algorithm>
#include <cmath>

#include "dpsynth/errors.hpp"

namespace dpsynth {

std::vector<double> exp_mech_distribution(const QualityScores &scores,
                                          double eps) {
  if (scores.scores.empty()) {
    throw InvalidInputError("exponential mechanism range is empty");
  }
  if (!(eps > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  if (!(scores.sensitivity > 0.0)) {
    throw InvalidInputError("quality sensitivity must be positive");
  }
  std::vector<double> logw(scores.scores.size());
  const double factor = eps / (2.0 * scores.sensitivity);
  double max_logw = -HUGE_VAL;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double s = scores.scores[i];
    if (!std::isfinite(s)) {
      throw InvalidInputError("quality scores must be finite");
    }
    logw[i] = factor * s;
    max_logw = std::max(max_logw, logw[i]);
  }
  double sum = 0.0;
  std::vector<double> probs(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    probs[i] = std::exp(logw[i] - max_logw);
    sum += probs[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw NumericError("exponential mechanism normalization failed");
  }
  for (double &p : probs) {
    p /= sum;
  }
  return probs;
}

std::size_t sample_index(std::span<const double> probabilities, Rng &rng) {
  if (probabilities.empty()) {
    throw InvalidInputError("cannot sample from an empty distribution");
  }
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cum += probabilities[i];
    if (u < cum) {
      return i;
    }
  }
  // Rounding left cum slightly below 1; the tail belongs to the last item.
  return probabilities.size() - 1;
}

std::size_t exp_mech_sample(const QualityScores &scores, double eps, Rng &rng) {
  const auto probs = exp_mech_distribution(scores, eps);
  return sample_index(probs, rng);
}

} // namespace dpsynth
