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

#ifndef DPSYNTH_NETMECH_HPP
#define DPSYNTH_NETMECH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dpsynth/core.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

inline constexpr std::uint64_t kDefaultNetEnumerationCap = 5'000'000;

// Candidate-database size for the subsampling argument:
// m = ceil(ln(2|C|) / (2 alpha^2)). Natural log throughout; this is the
// constant that makes the Chernoff union bound 2|C| e^{-2 m alpha^2} < 1
// hold, rather than the looser log|C|/alpha^2 headline.
std::uint64_t net_database_size(std::uint64_t class_size, double alpha);

// Number of size-m multisets over a universe of nx elements:
// C(nx + m - 1, m). Throws ResourceLimitError if the count exceeds `cap`.
std::uint64_t multiset_count(std::uint64_t nx, std::uint64_t m,
                             std::uint64_t cap = kDefaultNetEnumerationCap);

// Streams every size-m multiset over the universe exactly once, in
// lexicographic order of the nondecreasing index tuple. The visitor receives
// the candidate's count histogram.
void enumerate_net(const Universe &universe, std::uint64_t m,
                   const std::function<void(const std::vector<std::uint64_t> &)>
                       &visit,
                   std::uint64_t cap = kDefaultNetEnumerationCap);

struct NetMechanismResult {
  Database synthetic;
  double achieved_error; // non-private telemetry: never used to accept/reject
  std::uint64_t candidate_size;  // records per net candidate (m)
  std::uint64_t candidate_count; // enumerated net size
  std::size_t chosen_index;      // index into enumeration order
  // Exact output distribution over the net, enumeration order; present only
  // when requested. Used by the privacy/usefulness audits.
  std::optional<std::vector<double>> exact_distribution;
};

// The net mechanism: score every size-m multiset with
// q(D, D') = -max_{Q in C} |Q(D) - Q(D')| and sample through the exponential
// mechanism with GS_q = 1/n. When `candidate_size` is not given it defaults
// to net_database_size(|C|, alpha).
NetMechanismResult
net_mechanism(const Database &db, const QueryClass &cls, double eps,
              double alpha, Rng &rng, bool want_exact_distribution = false,
              std::optional<std::uint64_t> candidate_size = std::nullopt,
              std::uint64_t cap = kDefaultNetEnumerationCap);

// Exact output distribution of the net mechanism over the enumerated net,
// without sampling. Shared by the privacy and usefulness audits.
std::vector<double>
net_exact_distribution(const Database &db, const QueryClass &cls, double eps,
                       std::uint64_t candidate_size,
                       std::uint64_t cap = kDefaultNetEnumerationCap);

// Usefulness threshold from the (2 alpha, delta) guarantee:
// alpha = (2 Delta / eps) ln(net_size / delta).
double required_alpha(double sensitivity, double eps, std::uint64_t net_size,
                      double delta);

struct NetSizeBounds {
  double log_finite_class; // ln |X| * ln|C| / alpha^2
  double log_vc;           // ln |X| * vcdim * ln(1/alpha) / alpha^2 (constant 1)
  bool has_vc;
};

// Log-space upper bounds on the alpha-net size; returned as logs because the
// raw values overflow immediately. The VC bound fixes the hidden constant at
// 1 and is labeled as such wherever it is reported.
NetSizeBounds net_size_bounds(std::uint64_t universe_size,
                              std::uint64_t class_size,
                              std::optional<int> vcdim, double alpha);

struct SubsampleWitness {
  Database witness;
  double error; // max class error against the source database
  std::uint64_t m;
};

// Draws m = net_database_size(|C|, alpha) iid records from the database and
// reports the achieved class error. Existence of a low-error witness is what
// makes the size-m multiset family an alpha-net.
SubsampleWitness subsample_witness(const Database &db, const QueryClass &cls,
                                   double alpha, Rng &rng);

} // namespace dpsynth

#endif // DPSYNTH_NETMECH_HPP
