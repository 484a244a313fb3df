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

#include "dpsynth/netmech.hpp"

#include <algorithm>
#include <cmath>

#include "dpsynth/errors.hpp"
#include "dpsynth/expmech.hpp"

namespace dpsynth {

std::uint64_t net_database_size(std::uint64_t class_size, double alpha) {
  if (class_size < 2) {
    throw InvalidInputError("net_database_size requires |C| >= 2");
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidInputError("alpha must lie in (0, 1)");
  }
  const double m = std::log(2.0 * static_cast<double>(class_size)) /
                   (2.0 * alpha * alpha);
  return static_cast<std::uint64_t>(std::ceil(m));
}

std::uint64_t multiset_count(std::uint64_t nx, std::uint64_t m,
                             std::uint64_t cap) {
  if (nx == 0) {
    throw InvalidInputError("universe must be non-empty");
  }
  // C(nx + m - 1, m), aborting as soon as the running value exceeds the cap.
  unsigned __int128 value = 1;
  for (std::uint64_t i = 1; i <= m; ++i) {
    value = value * (nx - 1 + i) / i; // exact: product of i consecutive ints
    if (value > static_cast<unsigned __int128>(cap) * 1024) {
      break;
    }
  }
  if (value > cap) {
    throw ResourceLimitError(
        "net enumeration of C(" + std::to_string(nx + m - 1) + "," +
        std::to_string(m) + ") candidates exceeds the cap of " +
        std::to_string(cap));
  }
  return static_cast<std::uint64_t>(value);
}

void enumerate_net(
    const Universe &universe, std::uint64_t m,
    const std::function<void(const std::vector<std::uint64_t> &)> &visit,
    std::uint64_t cap) {
  if (m == 0) {
    throw InvalidInputError("net candidates must have at least one record");
  }
  multiset_count(universe.size(), m, cap); // guard before any work
  const std::size_t nx = universe.size();

  // Nondecreasing index tuple; equivalent count histogram maintained along.
  std::vector<std::size_t> tuple(m, 0);
  std::vector<std::uint64_t> counts(nx, 0);
  counts[0] = m;
  for (;;) {
    visit(counts);
    // Advance to the next nondecreasing tuple.
    std::size_t i = m;
    while (i-- > 0) {
      if (tuple[i] + 1 < nx) {
        const std::size_t v = tuple[i] + 1;
        for (std::size_t j = i; j < m; ++j) {
          --counts[tuple[j]];
          tuple[j] = v;
          ++counts[v];
        }
        break;
      }
      if (i == 0) {
        return;
      }
    }
    if (tuple[0] == nx) {
      return; // unreachable; loop exits via the i == 0 return
    }
  }
}

namespace {

// q(D, cand) = -max_Q |Q(D) - Q(cand)| with cand given as a histogram.
double candidate_quality(const Database &db, const QueryClass &cls,
                         const std::vector<std::uint64_t> &cand_counts,
                         std::uint64_t m) {
  double worst = 0.0;
  const double n = static_cast<double>(db.size());
  const double md = static_cast<double>(m);
  for (const auto &p : cls.predicates()) {
    std::uint64_t cdb = 0;
    std::uint64_t cc = 0;
    for (std::size_t i = 0; i < cand_counts.size(); ++i) {
      if (p(i)) {
        cdb += db.count(i);
        cc += cand_counts[i];
      }
    }
    worst = std::max(worst, std::abs(static_cast<double>(cdb) / n -
                                     static_cast<double>(cc) / md));
  }
  return -worst;
}

} // namespace

NetMechanismResult net_mechanism(const Database &db, const QueryClass &cls,
                                 double eps, double alpha, Rng &rng,
                                 bool want_exact_distribution,
                                 std::optional<std::uint64_t> candidate_size,
                                 std::uint64_t cap) {
  if (db.size() == 0) {
    throw InvalidInputError("net mechanism requires a non-empty database");
  }
  if (!(eps > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  if (cls.predicate(0).domain_size() != db.universe().size()) {
    throw InvalidInputError("query class does not match database universe");
  }
  const std::uint64_t m =
      candidate_size ? *candidate_size : net_database_size(cls.size(), alpha);

  QualityScores scores;
  scores.sensitivity = counting_sensitivity(db.size());
  std::vector<std::vector<std::uint64_t>> candidates;
  enumerate_net(
      db.universe(), m,
      [&](const std::vector<std::uint64_t> &counts) {
        scores.scores.push_back(candidate_quality(db, cls, counts, m));
        candidates.push_back(counts);
      },
      cap);

  auto distribution = exp_mech_distribution(scores, eps);
  const std::size_t chosen = sample_index(distribution, rng);

  NetMechanismResult result{
      Database::from_counts(db.universe_ptr(), candidates[chosen]),
      -scores.scores[chosen],
      m,
      candidates.size(),
      chosen,
      std::nullopt};
  if (want_exact_distribution) {
    result.exact_distribution = std::move(distribution);
  }
  return result;
}

std::vector<double> net_exact_distribution(const Database &db,
                                           const QueryClass &cls, double eps,
                                           std::uint64_t candidate_size,
                                           std::uint64_t cap) {
  if (db.size() == 0) {
    throw InvalidInputError("net mechanism requires a non-empty database");
  }
  QualityScores scores;
  scores.sensitivity = counting_sensitivity(db.size());
  enumerate_net(
      db.universe(), candidate_size,
      [&](const std::vector<std::uint64_t> &counts) {
        scores.scores.push_back(
            candidate_quality(db, cls, counts, candidate_size));
      },
      cap);
  return exp_mech_distribution(scores, eps);
}

double required_alpha(double sensitivity, double eps, std::uint64_t net_size,
                      double delta) {
  if (!(sensitivity > 0.0) || !(eps > 0.0) || net_size == 0 ||
      !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidInputError("required_alpha arguments must be positive with "
                            "delta in (0, 1)");
  }
  return (2.0 * sensitivity / eps) *
         std::log(static_cast<double>(net_size) / delta);
}

NetSizeBounds net_size_bounds(std::uint64_t universe_size,
                              std::uint64_t class_size,
                              std::optional<int> vcdim, double alpha) {
  if (universe_size == 0 || class_size == 0 || !(alpha > 0.0)) {
    throw InvalidInputError("net_size_bounds arguments must be positive");
  }
  const double logx = std::log(static_cast<double>(universe_size));
  NetSizeBounds b{};
  b.log_finite_class =
      logx * std::log(static_cast<double>(class_size)) / (alpha * alpha);
  b.has_vc = vcdim.has_value();
  b.log_vc = b.has_vc ? logx * static_cast<double>(*vcdim) *
                            std::log(1.0 / alpha) / (alpha * alpha)
                      : 0.0;
  return b;
}

SubsampleWitness subsample_witness(const Database &db, const QueryClass &cls,
                                   double alpha, Rng &rng) {
  if (db.size() == 0) {
    throw InvalidInputError("cannot subsample an empty database");
  }
  const std::uint64_t m = net_database_size(cls.size(), alpha);
  const auto records = db.records();
  std::vector<std::size_t> sampled;
  sampled.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    sampled.push_back(records[rng.uniform_below(records.size())]);
  }
  Database witness(db.universe_ptr(), sampled);
  const double err = max_class_error(cls, db, witness);
  return SubsampleWitness{std::move(witness), err, m};
}

} // namespace dpsynth
