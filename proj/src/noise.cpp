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

#include "dpsynth/noise.hpp"

#include <cmath>

#include "dpsynth/errors.hpp"

namespace dpsynth {

double laplace_pdf(double x, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidInputError("Laplace scale must be positive and finite");
  }
  return std::exp(-std::abs(x) / b) / (2.0 * b);
}

double sample_laplace(double b, Rng &rng) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidInputError("Laplace scale must be positive and finite");
  }
  const double u = rng.uniform01_open() - 0.5; // (-1/2, 1/2)
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -b * sign * std::log(1.0 - 2.0 * std::abs(u));
}

void BudgetLedger::add(const std::string &label, double epsilon) {
  add_split(label, epsilon, 1, 1);
}

void BudgetLedger::add_split(const std::string &label, double epsilon_total,
                             std::uint64_t calls, std::uint64_t split) {
  if (!(epsilon_total > 0.0) || split == 0) {
    throw InvalidInputError("ledger entries require a positive budget");
  }
  entries_.push_back(Entry{label, epsilon_total, calls, split});
}

double BudgetLedger::total() const {
  double t = 0.0;
  for (const auto &e : entries_) {
    // calls == split collapses to exactly epsilon_total.
    t += e.calls == e.split
             ? e.epsilon_total
             : e.epsilon_total * (static_cast<double>(e.calls) /
                                  static_cast<double>(e.split));
  }
  return t;
}

double laplace_answer(const Predicate &query, const Database &db, double eps,
                      BudgetLedger &ledger, Rng &rng,
                      const std::string &label) {
  if (!(eps > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  const double value = evaluate_query(query, db);
  const double scale = 1.0 / (eps * static_cast<double>(db.size()));
  const double noisy = value + sample_laplace(scale, rng);
  ledger.add(label, eps);
  return noisy;
}

} // namespace dpsynth
