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

#ifndef DPSYNTH_EXPMECH_HPP
#define DPSYNTH_EXPMECH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

/// Quality scores over a finite range, with the sensitivity of the score
/// function. Scores are computed by the caller; this module is agnostic to
/// what the range items are.
struct QualityScores {
  std::vector<double> scores;
  double sensitivity = 0.0;
};

// Output distribution of the exponential mechanism:
// p_i proportional to exp(eps * q_i / (2 GS_q)), computed with max-log-weight
// stabilization. The exponent can reach hundreds at net-mechanism scales, so
// naive exponentiation is not an option.
std::vector<double> exp_mech_distribution(const QualityScores &scores,
                                          double eps);

// Cumulative inverse sampling from an explicit probability vector.
// Ties and rounding resolve in cumulative-sum order, which keeps sampling
// deterministic for a fixed rng state.
std::size_t sample_index(std::span<const double> probabilities, Rng &rng);

// Draw a range index from the exponential mechanism distribution.
std::size_t exp_mech_sample(const QualityScores &scores, double eps, Rng &rng);

} // namespace dpsynth

#endif // DPSYNTH_EXPMECH_HPP
