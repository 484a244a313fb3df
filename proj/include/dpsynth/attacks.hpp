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

#ifndef DPSYNTH_ATTACKS_HPP
#define DPSYNTH_ATTACKS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

/// Exact rational value; kept unreduced since callers only compare.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool operator==(const Fraction &o) const {
    return static_cast<__int128>(num) * o.den ==
           static_cast<__int128>(o.num) * den;
  }
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

/// The reconstruction query family over a shattered set S of even size d:
/// one candidate database (bitmask over S) per half-size subset T, with
/// query Q_T counting membership in T. Candidates are enumerated in
/// lexicographic order of their element-index combinations.
class SubsetQueryFamily {
public:
  explicit SubsetQueryFamily(int d);

  int set_size() const { return d_; }
  std::size_t size() const { return candidates_.size(); }
  std::uint32_t candidate(std::size_t i) const { return candidates_[i]; }
  const std::vector<std::uint32_t> &candidates() const { return candidates_; }

  // Q_T(T') = |T intersect T'| / (d/2), exact.
  Fraction query(std::uint32_t t_mask, std::uint32_t db_mask) const;

private:
  int d_;
  std::vector<std::uint32_t> candidates_;
};

// Both sides of the symmetric-difference identity
// Q_T(T) - Q_T(T') = |T delta T'| / d, computed independently and exactly.
std::pair<Fraction, Fraction>
symdiff_identity_check(const SubsetQueryFamily &family, std::uint32_t t_mask,
                       std::uint32_t t_prime_mask);

struct ReconstructionResult {
  std::size_t recovered_index = 0;
  std::uint32_t recovered_mask = 0;
  std::vector<double> v_scores; // per candidate, family order
};

// Reconstruction from released answers: v_{T'} = Q_{T'}(T') - answer(Q_{T'}),
// minimized over candidates (ties to the lexicographically first candidate).
// `answers` must align with the family's enumeration order.
ReconstructionResult reconstruct(const SubsetQueryFamily &family,
                                 const std::vector<double> &answers);

// |T delta T'| / d.
double normalized_symdiff(std::uint32_t t_mask, std::uint32_t t_prime_mask,
                          int d);

// Mirrored (sawtooth) modulus: x mod m while x mod 2m < m, reflected
// otherwise. Unit Lipschitz in x.
std::uint64_t mirrored_mod(std::uint64_t x, std::uint64_t m);

// Q_m(D) = F_m(sum of the bit records).
std::uint64_t mod_query(const std::vector<int> &bits, std::uint64_t m);

struct SeparationResult {
  double frequency;     // empirical P[|Q_m(D1) - Q_m(D2)| >= 1/eps]
  std::uint64_t modulus; // m = ceil(2/eps)
  std::uint64_t trials;
};

// Distributional-privacy separation demo: pairs of independent uniform n-bit
// databases, frequency of a 1/eps gap in the mirrored-mod query.
SeparationResult separation_experiment(std::size_t n, double eps,
                                       std::uint64_t trials, Rng &rng);

} // namespace dpsynth

#endif // DPSYNTH_ATTACKS_HPP
