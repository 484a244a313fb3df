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

#include "dpsynth/attacks.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dpsynth/errors.hpp"

namespace dpsynth {

namespace {
constexpr std::size_t kFamilyGuard = 1'000'000;
} // namespace

SubsetQueryFamily::SubsetQueryFamily(int d) : d_(d) {
  if (d < 2 || d % 2 != 0) {
    throw InvalidInputError("shattered-set size must be even and >= 2");
  }
  if (d > 30) {
    throw ResourceLimitError("shattered-set size limited to 30");
  }
  // Candidate count C(d, d/2); check the guard before enumerating.
  unsigned __int128 count = 1;
  for (int i = 1; i <= d / 2; ++i) {
    count = count * static_cast<unsigned>(d - d / 2 + i) /
            static_cast<unsigned>(i);
  }
  if (count > kFamilyGuard) {
    throw ResourceLimitError("candidate family C(" + std::to_string(d) + "," +
                             std::to_string(d / 2) + ") exceeds the guard of " +
                             std::to_string(kFamilyGuard));
  }
  candidates_.reserve(static_cast<std::size_t>(count));
  // Lexicographic enumeration of d/2-subsets by element index.
  const int k = d / 2;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) {
    comb[i] = i;
  }
  for (;;) {
    std::uint32_t mask = 0;
    for (int e : comb) {
      mask |= 1u << e;
    }
    candidates_.push_back(mask);
    int i = k - 1;
    while (i >= 0 && comb[i] == d - k + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++comb[i];
    for (int j = i + 1; j < k; ++j) {
      comb[j] = comb[j - 1] + 1;
    }
  }
}

Fraction SubsetQueryFamily::query(std::uint32_t t_mask,
                                  std::uint32_t db_mask) const {
  return Fraction{std::popcount(t_mask & db_mask), d_ / 2};
}

std::pair<Fraction, Fraction>
symdiff_identity_check(const SubsetQueryFamily &family, std::uint32_t t_mask,
                       std::uint32_t t_prime_mask) {
  const int half = family.set_size() / 2;
  if (std::popcount(t_mask) != half || std::popcount(t_prime_mask) != half) {
    throw InvalidInputError("candidates must be half-size subsets");
  }
  const Fraction qt = family.query(t_mask, t_mask);
  const Fraction qtp = family.query(t_mask, t_prime_mask);
  const Fraction lhs{qt.num * qtp.den - qtp.num * qt.den, qt.den * qtp.den};
  const Fraction rhs{std::popcount(t_mask ^ t_prime_mask), family.set_size()};
  return {lhs, rhs};
}

ReconstructionResult reconstruct(const SubsetQueryFamily &family,
                                 const std::vector<double> &answers) {
  if (answers.size() != family.size()) {
    throw InvalidInputError("need one answer per family member, got " +
                            std::to_string(answers.size()) + " of " +
                            std::to_string(family.size()));
  }
  ReconstructionResult result;
  result.v_scores.resize(family.size());
  double best = HUGE_VAL;
  for (std::size_t i = 0; i < family.size(); ++i) {
    // Q_{T'}(T') is exactly 1: every element of T' satisfies its predicate.
    const double v = 1.0 - answers[i];
    result.v_scores[i] = v;
    if (v < best) { // strict: ties keep the first (lexicographic) candidate
      best = v;
      result.recovered_index = i;
      result.recovered_mask = family.candidate(i);
    }
  }
  return result;
}

double normalized_symdiff(std::uint32_t t_mask, std::uint32_t t_prime_mask,
                          int d) {
  return static_cast<double>(std::popcount(t_mask ^ t_prime_mask)) /
         static_cast<double>(d);
}

std::uint64_t mirrored_mod(std::uint64_t x, std::uint64_t m) {
  if (m == 0) {
    throw InvalidInputError("modulus must be positive");
  }
  if (x % (2 * m) < m) {
    return x % m;
  }
  // (-x-1) mod m, nonnegative representative.
  return (m - (x + 1) % m) % m;
}

std::uint64_t mod_query(const std::vector<int> &bits, std::uint64_t m) {
  std::uint64_t sum = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) {
      throw InvalidInputError("records must be bits");
    }
    sum += static_cast<std::uint64_t>(b);
  }
  return mirrored_mod(sum, m);
}

SeparationResult separation_experiment(std::size_t n, double eps,
                                       std::uint64_t trials, Rng &rng) {
  if (n == 0 || !(eps > 0.0) || trials == 0) {
    throw InvalidInputError("separation experiment arguments out of range");
  }
  // The construction needs an integer modulus; 2/eps rounds up, which only
  // strengthens the separation event.
  const std::uint64_t m =
      static_cast<std::uint64_t>(std::ceil(2.0 / eps));
  if (m < 2) {
    throw InvalidInputError("2/eps must round to a modulus >= 2");
  }
  const double gap = 1.0 / eps;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s1 += rng.coin() ? 1 : 0;
      s2 += rng.coin() ? 1 : 0;
    }
    const double q1 = static_cast<double>(mirrored_mod(s1, m));
    const double q2 = static_cast<double>(mirrored_mod(s2, m));
    if (std::abs(q1 - q2) >= gap) {
      ++hits;
    }
  }
  return SeparationResult{
      static_cast<double>(hits) / static_cast<double>(trials), m, trials};
}

} // namespace dpsynth
