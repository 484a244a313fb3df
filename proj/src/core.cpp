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

#include "dpsynth/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "dpsynth/errors.hpp"

namespace dpsynth {

namespace {
constexpr std::size_t kVcUniverseGuard = 24;
constexpr std::size_t kVcClassGuard = 1u << 16;
} // namespace

Universe::Universe(std::vector<std::string> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw InvalidInputError("universe must be non-empty");
  }
  std::unordered_set<std::string> seen;
  for (const auto &e : elements_) {
    if (!seen.insert(e).second) {
      throw InvalidInputError("duplicate universe element: " + e);
    }
  }
}

std::size_t Universe::index_of(const std::string &id) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] == id) {
      return i;
    }
  }
  throw InvalidInputError("unknown universe element: " + id);
}

Database::Database(UniversePtr universe,
                   const std::vector<std::size_t> &records)
    : universe_(std::move(universe)) {
  if (!universe_) {
    throw InvalidInputError("database requires a universe");
  }
  counts_.assign(universe_->size(), 0);
  for (std::size_t r : records) {
    if (r >= counts_.size()) {
      throw InvalidInputError("record index out of range");
    }
    ++counts_[r];
  }
  n_ = records.size();
}

Database Database::from_counts(UniversePtr universe,
                               std::vector<std::uint64_t> counts) {
  if (!universe || counts.size() != universe->size()) {
    throw InvalidInputError("count histogram does not match universe");
  }
  std::uint64_t n = 0;
  for (std::uint64_t c : counts) {
    n += c;
  }
  return Database(std::move(universe), std::move(counts), n);
}

std::vector<std::size_t> Database::records() const {
  std::vector<std::size_t> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    for (std::uint64_t k = 0; k < counts_[i]; ++k) {
      out.push_back(i);
    }
  }
  return out;
}

Predicate::Predicate(std::vector<bool> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) {
    throw InvalidInputError("predicate must cover a non-empty universe");
  }
}

Predicate Predicate::from_string(const std::string &bits) {
  std::vector<bool> v;
  v.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidInputError("predicate string must be 0/1, got: " + bits);
    }
    v.push_back(c == '1');
  }
  return Predicate(std::move(v));
}

std::string Predicate::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

QueryClass::QueryClass(std::vector<Predicate> predicates)
    : predicates_(std::move(predicates)) {
  if (predicates_.empty()) {
    throw InvalidInputError("query class must be non-empty");
  }
  const std::size_t domain = predicates_.front().domain_size();
  std::unordered_set<std::string> seen;
  for (const auto &p : predicates_) {
    if (p.domain_size() != domain) {
      throw InvalidInputError("predicates cover mismatched universes");
    }
    if (!seen.insert(p.to_string()).second) {
      throw InvalidInputError("duplicate predicate in query class: " +
                              p.to_string());
    }
  }
}

std::uint64_t count_query(const Predicate &predicate, const Database &db) {
  if (predicate.domain_size() != db.universe().size()) {
    throw InvalidInputError("predicate does not match database universe");
  }
  std::uint64_t satisfied = 0;
  for (std::size_t i = 0; i < db.counts().size(); ++i) {
    if (predicate(i)) {
      satisfied += db.count(i);
    }
  }
  return satisfied;
}

double evaluate_query(const Predicate &predicate, const Database &db) {
  if (db.size() == 0) {
    throw InvalidInputError("cannot evaluate a counting query on an empty "
                            "database");
  }
  return static_cast<double>(count_query(predicate, db)) /
         static_cast<double>(db.size());
}

double max_class_error(const QueryClass &cls, const Database &d1,
                       const Database &d2) {
  if (!d1.same_universe(d2)) {
    throw InvalidInputError("databases are over different universes");
  }
  double worst = 0.0;
  for (const auto &p : cls.predicates()) {
    const double diff = std::abs(evaluate_query(p, d1) - evaluate_query(p, d2));
    worst = std::max(worst, diff);
  }
  return worst;
}

double counting_sensitivity(std::uint64_t n) {
  if (n == 0) {
    throw InvalidInputError("sensitivity undefined for an empty database");
  }
  return 1.0 / static_cast<double>(n);
}

namespace {

// Predicate masks restricted to universes of at most 24 elements.
std::vector<std::uint32_t> predicate_masks(const QueryClass &cls) {
  std::vector<std::uint32_t> masks;
  masks.reserve(cls.size());
  for (const auto &p : cls.predicates()) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < p.domain_size(); ++i) {
      if (p(i)) {
        m |= 1u << i;
      }
    }
    masks.push_back(m);
  }
  return masks;
}

bool mask_shattered(const std::vector<std::uint32_t> &masks,
                    std::uint32_t set_mask) {
  const int k = std::popcount(set_mask);
  // Pack each predicate's labeling of the set into k bits and count the
  // distinct labelings.
  std::vector<bool> seen(std::size_t{1} << k, false);
  std::size_t distinct = 0;
  for (std::uint32_t pm : masks) {
    std::uint32_t restricted = pm & set_mask;
    std::uint32_t packed = 0;
    int bit = 0;
    for (std::uint32_t rest = set_mask; rest != 0; rest &= rest - 1, ++bit) {
      const std::uint32_t lowest = rest & (~rest + 1);
      if (restricted & lowest) {
        packed |= 1u << bit;
      }
    }
    if (!seen[packed]) {
      seen[packed] = true;
      if (++distinct == (std::size_t{1} << k)) {
        return true;
      }
    }
  }
  return false;
}

void check_vc_guards(const QueryClass &cls, const Universe &universe) {
  if (universe.size() > kVcUniverseGuard) {
    throw ResourceLimitError(
        "VC-dimension search supports universes of at most 24 elements, got " +
        std::to_string(universe.size()));
  }
  if (cls.size() > kVcClassGuard) {
    throw ResourceLimitError(
        "VC-dimension search supports classes of at most 65536 predicates");
  }
  if (cls.predicate(0).domain_size() != universe.size()) {
    throw InvalidInputError("query class does not match universe");
  }
}

} // namespace

int vc_dimension(const QueryClass &cls, const Universe &universe) {
  check_vc_guards(cls, universe);
  const auto masks = predicate_masks(cls);

  // Level-wise search: any shattered set of size k+1 extends a shattered set
  // of size k, so grow only from the current frontier.
  std::vector<std::uint32_t> frontier = {0};
  int dim = 0;
  const std::size_t nx = universe.size();
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t s : frontier) {
      const int hi = s == 0 ? -1 : 31 - std::countl_zero(s);
      for (std::size_t e = static_cast<std::size_t>(hi) + 1; e < nx; ++e) {
        const std::uint32_t cand = s | (1u << e);
        if (mask_shattered(masks, cand)) {
          next.push_back(cand);
        }
      }
    }
    if (next.empty()) {
      break;
    }
    ++dim;
    frontier = std::move(next);
  }
  return dim;
}

bool is_shattered(const QueryClass &cls, const std::vector<std::size_t> &set) {
  std::uint32_t mask = 0;
  for (std::size_t e : set) {
    if (e >= 32) {
      throw ResourceLimitError("shattering check limited to 24 elements");
    }
    mask |= 1u << e;
  }
  return mask_shattered(predicate_masks(cls), mask);
}

namespace {

// Lexicographic enumeration of size-d subsets of {0..nx-1}.
bool next_combination(std::vector<std::size_t> &comb, std::size_t nx) {
  const std::size_t d = comb.size();
  std::size_t i = d;
  while (i-- > 0) {
    if (comb[i] + 1 <= nx - (d - i)) {
      ++comb[i];
      for (std::size_t j = i + 1; j < d; ++j) {
        comb[j] = comb[j - 1] + 1;
      }
      return true;
    }
  }
  return false;
}

} // namespace

std::vector<std::size_t> find_shattered_set(const QueryClass &cls,
                                            const Universe &universe, int d) {
  check_vc_guards(cls, universe);
  if (d < 0 || static_cast<std::size_t>(d) > universe.size()) {
    throw InvalidInputError("requested shattered-set size out of range");
  }
  if (d == 0) {
    return {};
  }
  const auto masks = predicate_masks(cls);
  std::vector<std::size_t> comb(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < comb.size(); ++i) {
    comb[i] = i;
  }
  do {
    std::uint32_t mask = 0;
    for (std::size_t e : comb) {
      mask |= 1u << e;
    }
    if (mask_shattered(masks, mask)) {
      return comb;
    }
  } while (next_combination(comb, universe.size()));
  throw NotFoundError("no shattered set of size " + std::to_string(d));
}

} // namespace dpsynth
