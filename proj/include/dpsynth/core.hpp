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

#ifndef DPSYNTH_CORE_HPP
#define DPSYNTH_CORE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dpsynth {

/// Finite data domain: an ordered list of distinct element identifiers.
class Universe {
public:
  explicit Universe(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  const std::string &element(std::size_t i) const { return elements_[i]; }
  const std::vector<std::string> &elements() const { return elements_; }

  // Index of an element id; throws InvalidInputError if unknown.
  std::size_t index_of(const std::string &id) const;

private:
  std::vector<std::string> elements_;
};

using UniversePtr = std::shared_ptr<const Universe>;

/// Multiset of universe elements, stored as a per-element count histogram.
/// Record order never matters for counting queries, so the canonical
/// histogram form deduplicates equivalent databases during net enumeration.
class Database {
public:
  Database(UniversePtr universe, const std::vector<std::size_t> &records);
  static Database from_counts(UniversePtr universe,
                              std::vector<std::uint64_t> counts);

  const Universe &universe() const { return *universe_; }
  const UniversePtr &universe_ptr() const { return universe_; }
  std::uint64_t size() const { return n_; }
  const std::vector<std::uint64_t> &counts() const { return counts_; }
  std::uint64_t count(std::size_t element) const { return counts_[element]; }

  // Records in canonical (sorted) order.
  std::vector<std::size_t> records() const;

  bool same_universe(const Database &other) const {
    return universe_ == other.universe_ ||
           universe_->elements() == other.universe_->elements();
  }

private:
  Database(UniversePtr universe, std::vector<std::uint64_t> counts,
           std::uint64_t n)
      : universe_(std::move(universe)), counts_(std::move(counts)), n_(n) {}

  UniversePtr universe_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_;
};

/// Total boolean predicate over a universe, stored extensionally as a
/// bit-vector of length |X|.
class Predicate {
public:
  explicit Predicate(std::vector<bool> bits);
  // Parse from a 0/1 string, e.g. "0110".
  static Predicate from_string(const std::string &bits);

  std::size_t domain_size() const { return bits_.size(); }
  bool operator()(std::size_t element) const { return bits_[element]; }
  const std::vector<bool> &bits() const { return bits_; }
  std::string to_string() const;

  bool operator==(const Predicate &other) const = default;

private:
  std::vector<bool> bits_;
};

/// Explicit finite class of counting-query predicates.
class QueryClass {
public:
  explicit QueryClass(std::vector<Predicate> predicates);

  std::size_t size() const { return predicates_.size(); }
  const Predicate &predicate(std::size_t i) const { return predicates_[i]; }
  const std::vector<Predicate> &predicates() const { return predicates_; }

private:
  std::vector<Predicate> predicates_;
};

// Exact satisfied-record count; building block for the rational audits.
std::uint64_t count_query(const Predicate &predicate, const Database &db);

// Fraction of records satisfying the predicate. Throws on an empty database.
double evaluate_query(const Predicate &predicate, const Database &db);

// max over Q in C of |Q(d1) - Q(d2)|.
double max_class_error(const QueryClass &cls, const Database &d1,
                       const Database &d2);

// Global sensitivity of a counting query on databases of size n: 1/n.
double counting_sensitivity(std::uint64_t n);

// Brute-force VC-dimension of an explicit class over a small universe.
// Guards: |X| <= 24, |C| <= 65536 (the search is exponential; fail loudly).
int vc_dimension(const QueryClass &cls, const Universe &universe);

// Lexicographically first set of `d` element indices shattered by the class.
// Throws NotFoundError when no size-d set is shattered.
std::vector<std::size_t> find_shattered_set(const QueryClass &cls,
                                            const Universe &universe, int d);

// Whether the class realizes all 2^|S| labelings of S.
bool is_shattered(const QueryClass &cls, const std::vector<std::size_t> &set);

} // namespace dpsynth

#endif // DPSYNTH_CORE_HPP
