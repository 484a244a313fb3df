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

#ifndef DPSYNTH_NOISE_HPP
#define DPSYNTH_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dpsynth/core.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

// Density of Lap(b) at x: (1/(2b)) exp(-|x|/b).
double laplace_pdf(double x, double b);

// Inverse-CDF draw from Lap(b) using a single uniform in (-1/2, 1/2):
// Z = -b sign(U) ln(1 - 2|U|). One uniform per draw keeps streams
// comparable against cross-language oracles.
double sample_laplace(double b, Rng &rng);

/// Records privacy spend. Advisory: it never blocks a mechanism; budget
/// policy belongs to the harness. Entries that split a budget evenly
/// across calls are stored as (total, calls, split) so that a fully spent
/// split sums back to the total without rounding drift.
class BudgetLedger {
public:
  struct Entry {
    std::string label;
    double epsilon_total;   // budget the split was carved from
    std::uint64_t calls;    // calls actually made
    std::uint64_t split;    // calls the budget was divided by
  };

  // Single call at epsilon.
  void add(const std::string &label, double epsilon);
  // `calls` draws, each at epsilon_total / split.
  void add_split(const std::string &label, double epsilon_total,
                 std::uint64_t calls, std::uint64_t split);

  double total() const;
  const std::vector<Entry> &entries() const { return entries_; }

private:
  std::vector<Entry> entries_;
};

// Laplace mechanism for one counting query: true value + Lap(1/(eps*n)).
// Appends (label, eps) to the ledger.
double laplace_answer(const Predicate &query, const Database &db, double eps,
                      BudgetLedger &ledger, Rng &rng,
                      const std::string &label = "laplace-answer");

} // namespace dpsynth

#endif // DPSYNTH_NOISE_HPP
