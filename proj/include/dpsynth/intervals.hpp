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

#ifndef DPSYNTH_INTERVALS_HPP
#define DPSYNTH_INTERVALS_HPP

#include <cstdint>
#include <vector>

#include "dpsynth/noise.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

// Discretized domain {1, ..., 2^d}; bit depth guarded to d <= 30.
struct DiscreteDomain {
  int bits;
  explicit DiscreteDomain(int d);
  std::uint64_t size() const { return std::uint64_t{1} << bits; }
};

/// Points in {1..2^d}, kept sorted so interval masses come from two binary
/// searches. Duplicates are allowed; the representation is a multiset.
class IntervalDatabase {
public:
  IntervalDatabase(DiscreteDomain domain, std::vector<std::uint64_t> points);

  const DiscreteDomain &domain() const { return domain_; }
  std::uint64_t size() const { return points_.size(); }
  const std::vector<std::uint64_t> &points() const { return points_; }

  // Number of records in [a1, a2].
  std::uint64_t count_in(std::uint64_t a1, std::uint64_t a2) const;

private:
  DiscreteDomain domain_;
  std::vector<std::uint64_t> points_; // sorted
};

// Fraction of records in [a1, a2]; endpoints must satisfy
// 1 <= a1 <= a2 <= 2^d.
double interval_query(const IntervalDatabase &db, std::uint64_t a1,
                      std::uint64_t a2);

struct IntervalRelease {
  IntervalDatabase synthetic;
  std::vector<std::uint64_t> bounds; // strictly increasing, first 1, last 2^d
  std::uint64_t laplace_calls;
  bool overran_max_intervals; // partition budget exhausted before reaching 2^d
  BudgetLedger ledger;
  double alpha_prime;
  std::uint64_t max_intervals;
  std::uint64_t points_per_cell;
};

// Noisy binary-search partition release. Splits epsilon into
// eps' = eps / (d * MaxIntervals) per Laplace call with
// MaxIntervals = ceil(4 / (3 alpha')) and alpha' = alpha / 6, then outputs a
// synthetic database with a fixed point count per discovered cell, evenly
// spaced. Cells are half-open [Bounds[j-1], Bounds[j]) except the last,
// which closes at 2^d.
IntervalRelease release_intervals(const IntervalDatabase &db, double alpha,
                                  double eps, Rng &rng);

// Database size at which the release is (alpha, delta)-useful:
// ceil((8d / (eps alpha)) ln(8d / (delta alpha))).
std::uint64_t interval_utility_min_n(int d, double eps, double alpha,
                                     double delta);

// Exact max over all intervals of |Q(d1) - Q(d2)|, via prefix sums.
// Non-private diagnostic; guarded to 2^d <= 4096.
double max_interval_error(const IntervalDatabase &d1,
                          const IntervalDatabase &d2);

} // namespace dpsynth

#endif // DPSYNTH_INTERVALS_HPP
