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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dpsynth/attacks.hpp"
#include "dpsynth/core.hpp"
#include "dpsynth/errors.hpp"
#include "dpsynth/halfspaces.hpp"
#include "dpsynth/harness.hpp"
#include "dpsynth/intervals.hpp"
#include "dpsynth/netmech.hpp"
#include "dpsynth/noise.hpp"

namespace {

using namespace dpsynth;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Shared flag bundle; each subcommand attaches the flags it needs.
struct Options {
  std::uint64_t seed = 0;
  std::string input;
  std::string queries;
  std::string output;
  double epsilon = 1.0;
  double alpha = 0.1;
  double delta = 0.1;
  double gamma = 0.0;
  double beta = 0.1;
  std::uint64_t trials = 100;
  std::optional<std::uint64_t> override_T;
  std::optional<double> override_grid_step;
  std::optional<std::uint64_t> override_m;
  // subcommand-specific
  std::string mechanism;
  std::uint64_t db_size = 0;
  std::uint64_t net_m = 0;
  int d = 0;
  std::size_t n = 0;
  std::optional<std::size_t> target;
};

// Report or release text goes to --output (atomically) or stdout; timing and
// telemetry go to stderr so outputs stay byte-deterministic.
void emit(const Options &opt, const std::string &content) {
  if (opt.output.empty()) {
    std::cout << content;
  } else {
    atomic_write(opt.output, content);
  }
}

void append_ledger(std::ostringstream &out, const BudgetLedger &ledger) {
  for (const auto &e : ledger.entries()) {
    out << "ledger " << e.label << ' ' << fmt17(e.epsilon_total) << ' '
        << e.calls << ' ' << e.split << '\n';
  }
  out << "budget_total " << fmt17(ledger.total()) << '\n';
}

int cmd_release_net(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Explicit) {
    throw InvalidInputError("release-net needs an explicit query class");
  }
  const Database db = read_discrete_dataset(opt.input, spec.universe);
  Rng rng(opt.seed);
  const auto result =
      net_mechanism(db, *spec.explicit_class, opt.epsilon, opt.alpha, rng);
  std::ostringstream out;
  out << "dpsynth-release net 1\n";
  out << "seed " << opt.seed << '\n';
  out << "param epsilon " << fmt17(opt.epsilon) << '\n';
  out << "param alpha " << fmt17(opt.alpha) << '\n';
  out << "param class_size " << spec.explicit_class->size() << '\n';
  out << "param candidate_size " << result.candidate_size << '\n';
  out << "param candidate_count " << result.candidate_count << '\n';
  for (std::size_t i = 0; i < spec.universe->size(); ++i) {
    out << "count " << spec.universe->element(i) << ' '
        << result.synthetic.count(i) << '\n';
  }
  emit(opt, out.str());
  std::cerr << "achieved max class error (non-private telemetry): "
            << result.achieved_error << '\n';
  return 0;
}

int cmd_release_intervals(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Intervals) {
    throw InvalidInputError("release-intervals needs kind intervals");
  }
  const IntervalDatabase db = read_interval_dataset(opt.input, spec.d);
  Rng rng(opt.seed);
  const auto release = release_intervals(db, opt.alpha, opt.epsilon, rng);
  std::ostringstream out;
  out << "dpsynth-release intervals 1\n";
  out << "seed " << opt.seed << '\n';
  out << "param epsilon " << fmt17(opt.epsilon) << '\n';
  out << "param alpha " << fmt17(opt.alpha) << '\n';
  out << "param d " << spec.d << '\n';
  out << "param alpha_prime " << fmt17(release.alpha_prime) << '\n';
  out << "param max_intervals " << release.max_intervals << '\n';
  out << "param points_per_cell " << release.points_per_cell << '\n';
  out << "laplace_calls " << release.laplace_calls << '\n';
  out << "overran_max_intervals " << (release.overran_max_intervals ? 1 : 0)
      << '\n';
  out << "bounds";
  for (std::uint64_t b : release.bounds) {
    out << ' ' << b;
  }
  out << '\n';
  for (std::uint64_t p : release.synthetic.points()) {
    out << "point " << p << '\n';
  }
  append_ledger(out, release.ledger);
  emit(opt, out.str());
  return 0;
}

int cmd_release_halfspaces(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Halfspaces) {
    throw InvalidInputError("release-halfspaces needs kind halfspaces");
  }
  const PointCloud cloud =
      read_point_dataset(opt.input, static_cast<std::size_t>(spec.d));
  Rng rng(opt.seed);
  const auto structure = release_halfspaces(
      cloud, spec.gamma, opt.alpha, opt.epsilon, opt.beta, rng,
      opt.override_T, opt.override_grid_step, opt.override_m);
  std::ostringstream out;
  write_structure(out, structure);
  append_ledger(out, structure.ledger);
  emit(opt, out.str());
  if (structure.params.override_mode()) {
    std::cerr << "override mode: guarantees are empirical, not "
                 "theorem-backed\n";
  }
  return 0;
}

int cmd_laplace_answer(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Explicit) {
    throw InvalidInputError("laplace-answer needs an explicit query class");
  }
  const Database db = read_discrete_dataset(opt.input, spec.universe);
  Rng rng(opt.seed);
  BudgetLedger ledger;
  std::ostringstream out;
  out << "dpsynth-release laplace 1\n";
  out << "seed " << opt.seed << '\n';
  out << "param epsilon " << fmt17(opt.epsilon) << '\n';
  out << "param queries " << spec.explicit_class->size() << '\n';
  for (std::size_t i = 0; i < spec.explicit_class->size(); ++i) {
    const double a = laplace_answer(spec.explicit_class->predicate(i), db,
                                    opt.epsilon, ledger, rng);
    out << "answer " << i << ' ' << fmt17(a) << '\n';
  }
  append_ledger(out, ledger);
  emit(opt, out.str());
  return 0;
}

int cmd_eval_usefulness(const Options &opt) {
  ExperimentConfig config;
  config.mechanism = opt.mechanism;
  config.dataset_path = opt.input;
  config.queries_path = opt.queries;
  config.epsilon = opt.epsilon;
  config.alpha = opt.alpha;
  config.delta = opt.delta;
  config.beta = opt.beta;
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.override_T = opt.override_T;
  config.override_grid_step = opt.override_grid_step;
  config.override_m = opt.override_m;
  const auto start = std::chrono::steady_clock::now();
  const std::string report = run_experiment(config);
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  emit(opt, report);
  std::cerr << "eval-usefulness wall time: " << elapsed << " s\n";
  return 0;
}

int cmd_audit_dp(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Explicit) {
    throw InvalidInputError("audit-dp needs an explicit query class");
  }
  if (opt.db_size == 0 || opt.net_m == 0) {
    throw InvalidInputError("audit-dp needs --db-size and --net-m >= 1");
  }
  const double worst = exact_dp_audit(spec.universe, opt.db_size,
                                      *spec.explicit_class, opt.epsilon,
                                      opt.net_m);
  std::ostringstream out;
  out << "dpsynth-report 1\n";
  out << "command audit-dp\n";
  out << "param epsilon " << fmt17(opt.epsilon) << '\n';
  out << "param n " << opt.db_size << '\n';
  out << "param net_m " << opt.net_m << '\n';
  out << "max_log_ratio " << fmt17(worst) << '\n';
  out << "within_epsilon " << (worst <= opt.epsilon + 1e-9 ? 1 : 0) << '\n';
  emit(opt, out.str());
  return worst <= opt.epsilon + 1e-9 ? 0 : 4;
}

int cmd_attack_reconstruct(const Options &opt) {
  const SubsetQueryFamily family(opt.d);
  std::vector<double> answers;
  if (!opt.input.empty()) {
    std::istringstream in(read_file(opt.input));
    std::string tok;
    while (in >> tok) {
      try {
        answers.push_back(std::stod(tok));
      } catch (...) {
        throw InvalidInputError("answers file: expected a decimal, got '" +
                                tok + "'");
      }
    }
  } else if (opt.target) {
    if (*opt.target >= family.size()) {
      throw InvalidInputError("target index out of range (family has " +
                              std::to_string(family.size()) + " candidates)");
    }
    const std::uint32_t t = family.candidate(*opt.target);
    answers.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
      answers.push_back(family.query(family.candidate(i), t).value());
    }
  } else {
    throw InvalidInputError(
        "attack-reconstruct needs --input answers or --target index");
  }
  if (answers.size() != family.size()) {
    throw InvalidInputError("expected " + std::to_string(family.size()) +
                            " answers, got " + std::to_string(answers.size()));
  }
  const auto result = reconstruct(family, answers);
  std::ostringstream out;
  out << "dpsynth-report 1\n";
  out << "command attack-reconstruct\n";
  out << "param d " << opt.d << '\n';
  out << "param candidates " << family.size() << '\n';
  out << "recovered_index " << result.recovered_index << '\n';
  out << "recovered_mask ";
  for (int bit = opt.d - 1; bit >= 0; --bit) {
    out << ((result.recovered_mask >> bit) & 1u);
  }
  out << '\n';
  if (opt.target) {
    out << "target_index " << *opt.target << '\n';
    out << "normalized_symdiff "
        << fmt17(normalized_symdiff(family.candidate(*opt.target),
                                    result.recovered_mask, opt.d))
        << '\n';
  }
  emit(opt, out.str());
  return 0;
}

int cmd_vc_dim(const Options &opt) {
  const QueryClassSpec spec = read_query_spec(opt.queries);
  if (spec.kind != QueryClassSpec::Kind::Explicit) {
    throw InvalidInputError("vc-dim needs an explicit query class");
  }
  const int dim = vc_dimension(*spec.explicit_class, *spec.universe);
  std::ostringstream out;
  out << "dpsynth-report 1\n";
  out << "command vc-dim\n";
  out << "param class_size " << spec.explicit_class->size() << '\n';
  out << "param universe_size " << spec.universe->size() << '\n';
  out << "vc_dimension " << dim << '\n';
  if (dim > 0) {
    const auto set =
        find_shattered_set(*spec.explicit_class, *spec.universe, dim);
    out << "shattered_set";
    for (std::size_t i : set) {
      out << ' ' << spec.universe->element(i);
    }
    out << '\n';
  }
  emit(opt, out.str());
  return 0;
}

int cmd_separation_demo(const Options &opt) {
  Rng rng(opt.seed);
  const auto result = separation_experiment(opt.n, opt.epsilon, opt.trials,
                                            rng);
  std::ostringstream out;
  out << "dpsynth-report 1\n";
  out << "command separation-demo\n";
  out << "seed " << opt.seed << '\n';
  out << "param n " << opt.n << '\n';
  out << "param epsilon " << fmt17(opt.epsilon) << '\n';
  out << "param modulus " << result.modulus << '\n';
  out << "param gap " << fmt17(1.0 / opt.epsilon) << '\n';
  out << "trials " << result.trials << '\n';
  out << "frequency " << fmt17(result.frequency) << '\n';
  emit(opt, out.str());
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"dpsynth: private synthetic data releases and audits"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t ov_T = 0;
  double ov_step = 0.0;
  std::uint64_t ov_m = 0;
  std::size_t target = 0;

  auto add_common = [&](CLI::App *sub, bool randomized) {
    sub->add_option("--seed", opt.seed, "random seed")
        ->required(randomized);
    sub->add_option("--output", opt.output, "output path (default stdout)");
    return sub;
  };
  auto add_overrides = [&](CLI::App *sub) {
    sub->add_option("--override-T", ov_T, "projection dimension override");
    sub->add_option("--override-grid-step", ov_step, "net grid step override");
    sub->add_option("--override-m", ov_m, "projection count override");
  };
  auto collect_overrides = [&](const CLI::App *sub) {
    if (sub->count("--override-T") > 0) {
      opt.override_T = ov_T;
    }
    if (sub->count("--override-grid-step") > 0) {
      opt.override_grid_step = ov_step;
    }
    if (sub->count("--override-m") > 0) {
      opt.override_m = ov_m;
    }
  };

  auto *rn = add_common(app.add_subcommand("release-net",
                                           "net-mechanism synthetic release"),
                        true);
  rn->add_option("--input", opt.input)->required();
  rn->add_option("--queries", opt.queries)->required();
  rn->add_option("--epsilon", opt.epsilon)->required();
  rn->add_option("--alpha", opt.alpha)->required();

  auto *ri = add_common(
      app.add_subcommand("release-intervals", "interval partition release"),
      true);
  ri->add_option("--input", opt.input)->required();
  ri->add_option("--queries", opt.queries)->required();
  ri->add_option("--epsilon", opt.epsilon)->required();
  ri->add_option("--alpha", opt.alpha)->required();

  auto *rh = add_common(app.add_subcommand("release-halfspaces",
                                           "projected halfspace release"),
                        true);
  rh->add_option("--input", opt.input)->required();
  rh->add_option("--queries", opt.queries)->required();
  rh->add_option("--epsilon", opt.epsilon)->required();
  rh->add_option("--alpha", opt.alpha)->required();
  rh->add_option("--beta", opt.beta);
  add_overrides(rh);

  auto *la = add_common(app.add_subcommand("laplace-answer",
                                           "noisy counting-query answers"),
                        true);
  la->add_option("--input", opt.input)->required();
  la->add_option("--queries", opt.queries)->required();
  la->add_option("--epsilon", opt.epsilon)->required();

  auto *eu = add_common(app.add_subcommand("eval-usefulness",
                                           "seeded usefulness experiment"),
                        true);
  eu->add_option("--mechanism", opt.mechanism, "net | intervals | halfspaces")
      ->required();
  eu->add_option("--input", opt.input)->required();
  eu->add_option("--queries", opt.queries)->required();
  eu->add_option("--epsilon", opt.epsilon)->required();
  eu->add_option("--alpha", opt.alpha)->required();
  eu->add_option("--delta", opt.delta);
  eu->add_option("--beta", opt.beta);
  eu->add_option("--trials", opt.trials);
  add_overrides(eu);

  auto *ad = add_common(app.add_subcommand("audit-dp",
                                           "exhaustive exact privacy audit"),
                        false);
  ad->add_option("--queries", opt.queries)->required();
  ad->add_option("--epsilon", opt.epsilon)->required();
  ad->add_option("--db-size", opt.db_size, "database size n")->required();
  ad->add_option("--net-m", opt.net_m, "net candidate size")->required();

  auto *ar = add_common(app.add_subcommand("attack-reconstruct",
                                           "reconstruction from answers"),
                        false);
  ar->add_option("-d,--d", opt.d, "shattered-set size (even)")->required();
  ar->add_option("--input", opt.input, "answers file, family order");
  ar->add_option("--target", target, "generate exact answers for this index");

  auto *vd = add_common(app.add_subcommand("vc-dim",
                                           "brute-force VC dimension"),
                        false);
  vd->add_option("--queries", opt.queries)->required();

  auto *sd = add_common(app.add_subcommand("separation-demo",
                                           "mirrored-mod separation demo"),
                        true);
  sd->add_option("-n,--n", opt.n, "records per database")->required();
  sd->add_option("--epsilon", opt.epsilon)->required();
  sd->add_option("--trials", opt.trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  collect_overrides(rh);
  collect_overrides(eu);
  if (ar->count("--target") > 0) {
    opt.target = target;
  }

  try {
    if (rn->parsed()) {
      return cmd_release_net(opt);
    }
    if (ri->parsed()) {
      return cmd_release_intervals(opt);
    }
    if (rh->parsed()) {
      return cmd_release_halfspaces(opt);
    }
    if (la->parsed()) {
      return cmd_laplace_answer(opt);
    }
    if (eu->parsed()) {
      return cmd_eval_usefulness(opt);
    }
    if (ad->parsed()) {
      return cmd_audit_dp(opt);
    }
    if (ar->parsed()) {
      return cmd_attack_reconstruct(opt);
    }
    if (vd->parsed()) {
      return cmd_vc_dim(opt);
    }
    if (sd->parsed()) {
      return cmd_separation_demo(opt);
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const dpsynth::InvalidInputError &e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const dpsynth::ResourceLimitError &e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const dpsynth::NumericError &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 4;
  }
}
