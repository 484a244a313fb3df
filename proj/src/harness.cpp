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

#include "dpsynth/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpsynth/errors.hpp"

namespace dpsynth {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// log C(n, k)
double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// P[X <= k] for X ~ Binomial(n, p), via summed log terms.
double binom_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (p <= 0.0) {
    return 1.0;
  }
  if (p >= 1.0) {
    return k >= n ? 1.0 : 0.0;
  }
  double cdf = 0.0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    const double lt = log_choose(n, i) + static_cast<double>(i) * std::log(p) +
                      static_cast<double>(n - i) * std::log1p(-p);
    cdf += std::exp(lt);
  }
  return std::min(cdf, 1.0);
}

// Bisection for the p solving f(p) = target, f monotone decreasing in p.
double bisect_decreasing(const std::function<double(double)> &f,
                         double target) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

BinomialInterval clopper_pearson(std::uint64_t failures, std::uint64_t trials,
                                 double confidence) {
  if (trials == 0 || failures > trials || !(confidence > 0.0) ||
      !(confidence < 1.0)) {
    throw InvalidInputError("invalid binomial interval arguments");
  }
  const double tail = (1.0 - confidence) / 2.0;
  BinomialInterval ci{0.0, 1.0};
  if (failures > 0) {
    // Lower: the p with P[X >= k] = tail, i.e. P[X <= k-1] = 1 - tail.
    ci.lower = bisect_decreasing(
        [&](double p) { return binom_cdf(failures - 1, trials, p); },
        1.0 - tail);
  }
  if (failures < trials) {
    // Upper: the p with P[X <= k] = tail.
    ci.upper = bisect_decreasing(
        [&](double p) { return binom_cdf(failures, trials, p); }, tail);
  }
  return ci;
}

UsefulnessReport
empirical_usefulness(const std::function<double(std::uint64_t)> &trial_error,
                     double alpha, std::uint64_t trials) {
  if (trials == 0) {
    throw InvalidInputError("need at least one trial");
  }
  UsefulnessReport report;
  report.per_trial_errors.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double err = trial_error(t);
    report.per_trial_errors.push_back(err);
    if (err > alpha) {
      ++report.failures;
    }
  }
  report.delta_hat = static_cast<double>(report.failures) /
                     static_cast<double>(trials);
  report.ci = clopper_pearson(report.failures, trials);
  return report;
}

double exact_dp_audit(const UniversePtr &universe, std::uint64_t n,
                      const QueryClass &cls, double eps, std::uint64_t net_m,
                      std::uint64_t cap) {
  if (!universe || n == 0) {
    throw InvalidInputError("audit requires a universe and n >= 1");
  }
  // All databases of size n over X, with their exact output distributions.
  std::vector<std::vector<std::uint64_t>> dbs;
  enumerate_net(
      *universe, n,
      [&](const std::vector<std::uint64_t> &counts) { dbs.push_back(counts); },
      cap);
  std::vector<std::vector<double>> dists;
  dists.reserve(dbs.size());
  for (const auto &counts : dbs) {
    const Database db = Database::from_counts(universe, counts);
    dists.push_back(net_exact_distribution(db, cls, eps, net_m, cap));
  }

  double worst = 0.0;
  for (std::size_t a = 0; a < dbs.size(); ++a) {
    for (std::size_t b = a + 1; b < dbs.size(); ++b) {
      // Neighbors: one record replaced, i.e. histogram L1 distance 2.
      std::uint64_t l1 = 0;
      for (std::size_t i = 0; i < dbs[a].size(); ++i) {
        l1 += dbs[a][i] > dbs[b][i] ? dbs[a][i] - dbs[b][i]
                                    : dbs[b][i] - dbs[a][i];
      }
      if (l1 != 2) {
        continue;
      }
      for (std::size_t r = 0; r < dists[a].size(); ++r) {
        worst = std::max(
            worst, std::abs(std::log(dists[a][r]) - std::log(dists[b][r])));
      }
    }
  }
  return worst;
}

std::vector<std::vector<double>>
sample_margin_queries(const PointCloud &cloud, double gamma, std::size_t count,
                      Rng &rng, std::uint64_t max_attempts) {
  std::vector<std::vector<double>> queries;
  queries.reserve(count);
  std::uint64_t attempts = 0;
  while (queries.size() < count) {
    if (++attempts > max_attempts) {
      throw ResourceLimitError(
          "margin-query rejection sampling exhausted " +
          std::to_string(max_attempts) + " attempts; the cloud admits too few "
          "margin-" + fmt17(gamma) + " queries");
    }
    std::vector<double> y(cloud.dim());
    double norm2 = 0.0;
    for (double &c : y) {
      c = rng.normal();
      norm2 += c * c;
    }
    if (norm2 <= 0.0) {
      continue;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double &c : y) {
      c *= inv;
    }
    if (margin(cloud, y) >= gamma) {
      queries.push_back(std::move(y));
    }
  }
  return queries;
}

// ---- file formats -------------------------------------------------------

namespace {

std::vector<std::string> read_all_lines(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

[[noreturn]] void bad_line(const std::string &path, std::size_t lineno,
                           const std::string &why) {
  throw InvalidInputError(path + ":" + std::to_string(lineno) + ": " + why);
}

} // namespace

QueryClassSpec read_query_spec(const std::string &path) {
  const auto lines = read_all_lines(path);
  QueryClassSpec spec{};
  bool have_kind = false;
  std::vector<std::string> universe_ids;
  std::vector<Predicate> predicates;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::string key;
    if (!(ls >> key) || key.starts_with("#")) {
      continue;
    }
    const std::size_t lineno = i + 1;
    if (key == "kind") {
      std::string kind;
      ls >> kind;
      if (kind == "explicit") {
        spec.kind = QueryClassSpec::Kind::Explicit;
      } else if (kind == "intervals") {
        spec.kind = QueryClassSpec::Kind::Intervals;
      } else if (kind == "halfspaces") {
        spec.kind = QueryClassSpec::Kind::Halfspaces;
      } else {
        bad_line(path, lineno, "unknown kind '" + kind + "'");
      }
      have_kind = true;
    } else if (key == "universe") {
      std::string id;
      while (ls >> id) {
        universe_ids.push_back(id);
      }
    } else if (key == "predicate") {
      std::string bits;
      if (!(ls >> bits)) {
        bad_line(path, lineno, "predicate needs a 0/1 string");
      }
      try {
        predicates.push_back(Predicate::from_string(bits));
      } catch (const InvalidInputError &e) {
        bad_line(path, lineno, e.what());
      }
    } else if (key == "d") {
      if (!(ls >> spec.d)) {
        bad_line(path, lineno, "d needs an integer");
      }
    } else if (key == "gamma") {
      if (!(ls >> spec.gamma)) {
        bad_line(path, lineno, "gamma needs a number");
      }
    } else {
      bad_line(path, lineno, "unknown key '" + key + "'");
    }
  }
  if (!have_kind) {
    throw InvalidInputError(path + ": missing 'kind' line");
  }
  if (spec.kind == QueryClassSpec::Kind::Explicit) {
    if (universe_ids.empty()) {
      throw InvalidInputError(path + ": explicit class needs a universe line");
    }
    spec.universe = std::make_shared<Universe>(std::move(universe_ids));
    for (const auto &p : predicates) {
      if (p.domain_size() != spec.universe->size()) {
        throw InvalidInputError(path +
                                ": predicate length does not match universe");
      }
    }
    spec.explicit_class.emplace(std::move(predicates));
  }
  return spec;
}

Database read_discrete_dataset(const std::string &path,
                               const UniversePtr &universe) {
  const auto lines = read_all_lines(path);
  std::vector<std::size_t> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::string id;
    if (!(ls >> id)) {
      continue; // blank line
    }
    try {
      records.push_back(universe->index_of(id));
    } catch (const InvalidInputError &e) {
      bad_line(path, i + 1, e.what());
    }
  }
  if (records.empty()) {
    throw InvalidInputError(path + ": dataset is empty");
  }
  return Database(universe, records);
}

IntervalDatabase read_interval_dataset(const std::string &path, int d) {
  const auto lines = read_all_lines(path);
  std::vector<std::uint64_t> points;
  const DiscreteDomain domain(d);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::string tok;
    if (!(ls >> tok)) {
      continue;
    }
    std::uint64_t value = 0;
    try {
      value = std::stoull(tok);
    } catch (...) {
      bad_line(path, i + 1, "expected an integer point, got '" + tok + "'");
    }
    if (value < 1 || value > domain.size()) {
      bad_line(path, i + 1, "point outside {1..2^d}");
    }
    points.push_back(value);
  }
  if (points.empty()) {
    throw InvalidInputError(path + ": dataset is empty");
  }
  return IntervalDatabase(domain, std::move(points));
}

PointCloud read_point_dataset(const std::string &path, std::size_t d) {
  const auto lines = read_all_lines(path);
  std::vector<std::vector<double>> points;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    std::vector<double> point;
    std::istringstream ls(lines[i]);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        point.push_back(std::stod(cell));
      } catch (...) {
        bad_line(path, i + 1, "expected a decimal, got '" + cell + "'");
      }
    }
    if (point.size() != d) {
      bad_line(path, i + 1,
               "expected " + std::to_string(d) + " coordinates, got " +
                   std::to_string(point.size()));
    }
    points.push_back(std::move(point));
  }
  if (points.empty()) {
    throw InvalidInputError(path + ": dataset is empty");
  }
  return PointCloud(d, std::move(points));
}

void atomic_write(const std::string &path, const std::string &content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidInputError("cannot write file: " + tmp);
    }
    out << content;
    if (!out.flush()) {
      throw InvalidInputError("write failed: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open file: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---- experiment driver --------------------------------------------------

namespace {

void append_report_common(std::ostringstream &out,
                          const ExperimentConfig &config,
                          const UsefulnessReport &report) {
  out << "trials " << config.trials << '\n';
  for (std::size_t t = 0; t < report.per_trial_errors.size(); ++t) {
    out << "trial_error " << t << ' ' << fmt17(report.per_trial_errors[t])
        << '\n';
  }
  out << "failures " << report.failures << '\n';
  out << "delta_hat " << fmt17(report.delta_hat) << '\n';
  out << "ci95_low " << fmt17(report.ci.lower) << '\n';
  out << "ci95_high " << fmt17(report.ci.upper) << '\n';
}

} // namespace

std::string run_experiment(const ExperimentConfig &config) {
  const QueryClassSpec spec = read_query_spec(config.queries_path);
  std::ostringstream out;
  out << "dpsynth-report 1\n";
  out << "command eval-usefulness\n";
  out << "mechanism " << config.mechanism << '\n';
  out << "seed " << config.seed << '\n';
  out << "param epsilon " << fmt17(config.epsilon) << '\n';
  out << "param alpha " << fmt17(config.alpha) << '\n';
  out << "param delta " << fmt17(config.delta) << '\n';

  if (config.mechanism == "net") {
    if (spec.kind != QueryClassSpec::Kind::Explicit) {
      throw InvalidInputError("net mechanism requires an explicit class");
    }
    const Database db = read_discrete_dataset(config.dataset_path,
                                              spec.universe);
    const QueryClass &cls = *spec.explicit_class;
    double budget_total = 0.0;
    const auto report = empirical_usefulness(
        [&](std::uint64_t t) {
          Rng rng(config.seed, t);
          const auto result = net_mechanism(db, cls, config.epsilon,
                                            config.alpha, rng);
          budget_total = config.epsilon; // one exponential-mechanism release
          return max_class_error(cls, db, result.synthetic);
        },
        config.alpha, config.trials);
    out << "param class_size " << cls.size() << '\n';
    out << "param net_candidate_size "
        << net_database_size(cls.size(), config.alpha) << '\n';
    append_report_common(out, config, report);
    out << "budget_total " << fmt17(budget_total) << '\n';
  } else if (config.mechanism == "intervals") {
    if (spec.kind != QueryClassSpec::Kind::Intervals) {
      throw InvalidInputError("interval mechanism requires kind intervals");
    }
    const IntervalDatabase db =
        read_interval_dataset(config.dataset_path, spec.d);
    double budget_total = 0.0;
    const auto report = empirical_usefulness(
        [&](std::uint64_t t) {
          Rng rng(config.seed, t);
          const auto release = release_intervals(db, config.alpha,
                                                 config.epsilon, rng);
          budget_total = release.ledger.total();
          return max_interval_error(db, release.synthetic);
        },
        config.alpha, config.trials);
    out << "param d " << spec.d << '\n';
    append_report_common(out, config, report);
    out << "budget_total " << fmt17(budget_total) << '\n';
  } else if (config.mechanism == "halfspaces") {
    if (spec.kind != QueryClassSpec::Kind::Halfspaces) {
      throw InvalidInputError("halfspace mechanism requires kind halfspaces");
    }
    const PointCloud cloud = read_point_dataset(
        config.dataset_path, static_cast<std::size_t>(spec.d));
    double budget_total = 0.0;
    bool override_mode = false;
    const auto report = empirical_usefulness(
        [&](std::uint64_t t) {
          Rng rng(config.seed, t);
          const auto structure = release_halfspaces(
              cloud, spec.gamma, config.alpha, config.epsilon, config.beta,
              rng, config.override_T, config.override_grid_step,
              config.override_m);
          budget_total = structure.ledger.total();
          override_mode = structure.params.override_mode();
          Rng qrng = rng.derive(0x51u);
          const auto queries = sample_margin_queries(
              cloud, spec.gamma, config.halfspace_query_samples, qrng);
          double worst = 0.0;
          for (const auto &y : queries) {
            worst = std::max(worst,
                             std::abs(halfspace_query(cloud, y) -
                                      evaluate_halfspace(structure, y)));
          }
          return worst;
        },
        config.alpha, config.trials);
    out << "param d " << spec.d << '\n';
    out << "param gamma " << fmt17(spec.gamma) << '\n';
    out << "param beta " << fmt17(config.beta) << '\n';
    out << "override_mode " << (override_mode ? 1 : 0) << '\n';
    if (override_mode) {
      out << "note override-mode: guarantees are empirical, not "
             "theorem-backed\n";
    }
    append_report_common(out, config, report);
    out << "budget_total " << fmt17(budget_total) << '\n';
  } else {
    throw InvalidInputError("unknown mechanism '" + config.mechanism + "'");
  }
  return out.str();
}

} // namespace dpsynth
