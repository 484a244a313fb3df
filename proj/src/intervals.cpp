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

#include "dpsynth/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "dpsynth/errors.hpp"

namespace dpsynth {

DiscreteDomain::DiscreteDomain(int d) : bits(d) {
  if (d < 1 || d > 30) {
    throw InvalidInputError("domain bit depth must be in [1, 30], got " +
                            std::to_string(d));
  }
}

IntervalDatabase::IntervalDatabase(DiscreteDomain domain,
                                   std::vector<std::uint64_t> points)
    : domain_(domain), points_(std::move(points)) {
  const std::uint64_t top = domain_.size();
  for (std::uint64_t p : points_) {
    if (p < 1 || p > top) {
      throw InvalidInputError("point " + std::to_string(p) +
                              " outside domain {1.." + std::to_string(top) +
                              "}");
    }
  }
  std::sort(points_.begin(), points_.end());
}

std::uint64_t IntervalDatabase::count_in(std::uint64_t a1,
                                         std::uint64_t a2) const {
  auto lo = std::lower_bound(points_.begin(), points_.end(), a1);
  auto hi = std::upper_bound(points_.begin(), points_.end(), a2);
  return static_cast<std::uint64_t>(hi - lo);
}

double interval_query(const IntervalDatabase &db, std::uint64_t a1,
                      std::uint64_t a2) {
  if (a1 < 1 || a2 > db.domain().size() || a1 > a2) {
    throw InvalidInputError("invalid interval endpoints");
  }
  if (db.size() == 0) {
    throw InvalidInputError("cannot query an empty database");
  }
  return static_cast<double>(db.count_in(a1, a2)) /
         static_cast<double>(db.size());
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

} // namespace

IntervalRelease release_intervals(const IntervalDatabase &db, double alpha,
                                  double eps, Rng &rng) {
  if (db.size() == 0) {
    throw InvalidInputError("release requires a non-empty database");
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidInputError("alpha must lie in (0, 1)");
  }
  if (!(eps > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  const int d = db.domain().bits;
  const std::uint64_t top = db.domain().size();
  const double alpha_prime = alpha / 6.0;
  const std::uint64_t max_intervals =
      static_cast<std::uint64_t>(std::ceil(4.0 / (3.0 * alpha_prime)));
  const std::uint64_t split =
      static_cast<std::uint64_t>(d) * max_intervals;
  const double eps_prime = eps / static_cast<double>(split);
  const double noise_scale =
      1.0 / (eps_prime * static_cast<double>(db.size()));

  std::vector<std::uint64_t> bounds = {1};
  std::uint64_t calls = 0;
  bool overran = false;
  while (bounds.back() < top) {
    if (bounds.size() > max_intervals) {
      // Partition budget exhausted. Close the partition and keep going with
      // what was found; aborting now would waste already-spent budget.
      overran = true;
      bounds.push_back(top);
      break;
    }
    const std::uint64_t a = bounds.back();
    // Midpoint as a position, not the half-length the write-up suggests:
    // start at a + ceil((2^d - a)/2) so the search stays inside [a, 2^d].
    std::uint64_t b = a + ceil_div(top - a, 2);
    std::uint64_t increment = ceil_div(top - a, 4);
    while (increment >= 1) {
      // b can drift outside [a, 2^d] mid-search; query the clamped interval.
      const std::uint64_t qb = std::clamp<std::uint64_t>(b, a, top);
      const double v =
          interval_query(db, a, qb) + sample_laplace(noise_scale, rng);
      ++calls;
      if (v > alpha_prime) {
        b = b > increment ? b - increment : 1;
      } else {
        b += increment;
      }
      increment /= 2;
    }
    b = std::clamp<std::uint64_t>(b, a + 1, top);
    bounds.push_back(b);
  }

  BudgetLedger ledger;
  ledger.add_split("release-intervals", eps, calls, split);

  // Fixed per-cell point count from the alpha' * m rule with the smallest
  // admissible m = ceil(1/alpha') + 1.
  const std::uint64_t m_out =
      static_cast<std::uint64_t>(std::ceil(1.0 / alpha_prime)) + 1;
  const std::uint64_t per_cell = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(
             alpha_prime * static_cast<double>(m_out))));

  std::vector<std::uint64_t> synthetic_points;
  synthetic_points.reserve(per_cell * (bounds.size() - 1));
  for (std::size_t j = 1; j < bounds.size(); ++j) {
    // Half-open cell [bounds[j-1], bounds[j]); the last cell closes at 2^d.
    const std::uint64_t lo = bounds[j - 1];
    const std::uint64_t hi = j + 1 == bounds.size() ? bounds[j] : bounds[j] - 1;
    const std::uint64_t width = hi - lo + 1;
    for (std::uint64_t k = 0; k < per_cell; ++k) {
      synthetic_points.push_back(lo + (k * width) / per_cell);
    }
  }

  return IntervalRelease{
      IntervalDatabase(db.domain(), std::move(synthetic_points)),
      std::move(bounds),
      calls,
      overran,
      std::move(ledger),
      alpha_prime,
      max_intervals,
      per_cell};
}

std::uint64_t interval_utility_min_n(int d, double eps, double alpha,
                                     double delta) {
  if (d < 1 || !(eps > 0.0) || !(alpha > 0.0) || !(alpha < 1.0) ||
      !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidInputError("interval_utility_min_n arguments out of range");
  }
  const double n = (8.0 * d / (eps * alpha)) *
                   std::log(8.0 * d / (delta * alpha));
  return static_cast<std::uint64_t>(std::ceil(n));
}

double max_interval_error(const IntervalDatabase &d1,
                          const IntervalDatabase &d2) {
  if (d1.domain().bits != d2.domain().bits) {
    throw InvalidInputError("databases are over different domains");
  }
  const std::uint64_t top = d1.domain().size();
  if (top > 4096) {
    throw ResourceLimitError("exact interval-error scan limited to 2^12 "
                             "domain points");
  }
  if (d1.size() == 0 || d2.size() == 0) {
    throw InvalidInputError("cannot compare empty databases");
  }
  // Prefix sums of the mass difference; the max interval discrepancy is the
  // spread of the prefix-difference sequence.
  std::vector<double> prefix(top + 1, 0.0);
  {
    std::vector<double> h(top + 1, 0.0);
    for (std::uint64_t p : d1.points()) {
      h[p] += 1.0 / static_cast<double>(d1.size());
    }
    for (std::uint64_t p : d2.points()) {
      h[p] -= 1.0 / static_cast<double>(d2.size());
    }
    for (std::uint64_t i = 1; i <= top; ++i) {
      prefix[i] = prefix[i - 1] + h[i];
    }
  }
  const auto [lo, hi] = std::minmax_element(prefix.begin(), prefix.end());
  return *hi - *lo;
}

} // namespace dpsynth
