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

#include "dpsynth/halfspaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "dpsynth/errors.hpp"

namespace dpsynth {

namespace {

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double norm(const std::vector<double> &v) { return std::sqrt(dot(v, v)); }

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

PointCloud::PointCloud(std::size_t dim,
                       std::vector<std::vector<double>> points)
    : dim_(dim), points_(std::move(points)) {
  if (dim_ == 0 || points_.empty()) {
    throw InvalidInputError("point cloud must be non-empty with dim >= 1");
  }
  for (auto &p : points_) {
    if (p.size() != dim_) {
      throw InvalidInputError("point dimension mismatch");
    }
    const double nrm = norm(p);
    if (!(nrm > 0.0)) {
      throw InvalidInputError("zero points are not allowed");
    }
    if (nrm > 1.0 + 1e-6) {
      throw InvalidInputError("points must have norm at most 1");
    }
    if (nrm < 1.0 - 1e-6) {
      // Sub-unit inputs are accepted but normalized; silent acceptance
      // would skew margins. Rounding-level deviations (decimal-truncated
      // coordinates) are snapped without flagging.
      rescaled_ = true;
    }
    if (nrm != 1.0) {
      for (double &c : p) {
        c /= nrm;
      }
    }
  }
}

double halfspace_query(const PointCloud &cloud, const std::vector<double> &y) {
  if (y.size() != cloud.dim()) {
    throw InvalidInputError("query dimension mismatch");
  }
  if (!(norm(y) > 0.0)) {
    throw InvalidInputError("query vector must be non-zero");
  }
  std::size_t positive = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (dot(cloud.point(i), y) > 0.0) {
      ++positive;
    }
  }
  return static_cast<double>(positive) / static_cast<double>(cloud.size());
}

double margin(const PointCloud &cloud, const std::vector<double> &y) {
  if (y.size() != cloud.dim()) {
    throw InvalidInputError("query dimension mismatch");
  }
  double m = HUGE_VAL;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    m = std::min(m, std::abs(dot(cloud.point(i), y)));
  }
  return m;
}

std::vector<std::int8_t> random_projection_signs(std::size_t T, std::size_t d,
                                                 Rng &rng) {
  if (T == 0 || d == 0) {
    throw InvalidInputError("projection dimensions must be positive");
  }
  std::vector<std::int8_t> signs(T * d);
  for (auto &s : signs) {
    s = rng.coin() ? 1 : -1;
  }
  return signs;
}

std::vector<double> project(const std::vector<std::int8_t> &signs,
                            std::size_t T, std::size_t d,
                            const std::vector<double> &x) {
  if (signs.size() != T * d || x.size() != d) {
    throw InvalidInputError("projection dimension mismatch");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(T));
  std::vector<double> out(T, 0.0);
  for (std::size_t r = 0; r < T; ++r) {
    double s = 0.0;
    const std::int8_t *row = signs.data() + r * d;
    for (std::size_t c = 0; c < d; ++c) {
      s += row[c] * x[c];
    }
    out[r] = s * scale;
  }
  return out;
}

std::vector<std::vector<double>> sphere_net(std::size_t T, double gamma,
                                            std::optional<double> step_override,
                                            bool prune_shell,
                                            std::uint64_t cap) {
  if (T == 0 || !(gamma > 0.0)) {
    throw InvalidInputError("sphere net requires T >= 1 and gamma > 0");
  }
  const double step = step_override
                          ? *step_override
                          : gamma / std::sqrt(static_cast<double>(T));
  if (!(step > 0.0)) {
    throw InvalidInputError("grid step must be positive");
  }
  const std::uint64_t k = static_cast<std::uint64_t>(std::floor(1.0 / step));
  const double per_axis = static_cast<double>(2 * k + 1);
  const double predicted = std::pow(per_axis, static_cast<double>(T)) - 1.0;
  if (predicted > static_cast<double>(cap)) {
    const double paper_count =
        std::pow(std::sqrt(static_cast<double>(T)) / gamma,
                 static_cast<double>(T));
    throw ResourceLimitError(
        "sphere net would enumerate " + fmt17(predicted) +
        " grid points (paper bound (sqrt(T)/gamma)^T = " + fmt17(paper_count) +
        "), above the cap of " + std::to_string(cap) +
        "; override the grid step to proceed");
  }

  std::vector<std::vector<double>> net;
  net.reserve(static_cast<std::size_t>(predicted));
  // Odometer over coordinates in {-k..k} * step, lexicographic.
  std::vector<std::int64_t> idx(T, -static_cast<std::int64_t>(k));
  const double lo2 = (1.0 - gamma) * (1.0 - gamma);
  const double hi2 = (1.0 + gamma) * (1.0 + gamma);
  for (;;) {
    bool zero = true;
    double norm2 = 0.0;
    for (std::int64_t v : idx) {
      zero = zero && v == 0;
      const double c = static_cast<double>(v) * step;
      norm2 += c * c;
    }
    if (!zero && (!prune_shell || (norm2 >= lo2 && norm2 <= hi2))) {
      std::vector<double> point(T);
      for (std::size_t i = 0; i < T; ++i) {
        point[i] = static_cast<double>(idx[i]) * step;
      }
      net.push_back(std::move(point));
    }
    std::size_t pos = T;
    while (pos-- > 0) {
      if (idx[pos] < static_cast<std::int64_t>(k)) {
        ++idx[pos];
        std::fill(idx.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                  idx.end(), -static_cast<std::int64_t>(k));
        break;
      }
      if (pos == 0) {
        if (net.empty()) {
          throw InvalidInputError("sphere net pruned to nothing");
        }
        return net;
      }
    }
  }
}

HalfspaceParams resolve_halfspace_params(
    std::size_t d, double gamma, double alpha, double beta,
    std::optional<std::uint64_t> override_T,
    std::optional<double> override_grid_step,
    std::optional<std::uint64_t> override_m) {
  if (d == 0 || !(gamma > 0.0) || !(alpha > 0.0) || !(beta > 0.0) ||
      !(beta < 1.0)) {
    throw InvalidInputError("halfspace parameters out of range");
  }
  HalfspaceParams p;
  p.d = d;
  p.gamma = gamma;
  p.alpha = alpha;
  p.beta = beta;
  p.varsigma = gamma / 4.0;
  p.tau = alpha / 8.0;
  p.paper_T = static_cast<std::uint64_t>(
      std::ceil(20.0 / (p.varsigma * p.varsigma) * std::log(1.0 / p.tau)));
  p.paper_m = static_cast<std::uint64_t>(std::ceil(
      16.0 / (alpha * alpha) * static_cast<double>(d) *
      (std::log(4.0 * std::sqrt(static_cast<double>(d)) / gamma) +
       std::log(1.0 / beta))));
  p.paper_grid_step =
      (gamma / 4.0) / std::sqrt(static_cast<double>(p.paper_T));
  p.paper_net_log_count =
      static_cast<double>(p.paper_T) *
      std::log(std::sqrt(static_cast<double>(p.paper_T)) / (gamma / 4.0));

  p.T = override_T ? static_cast<std::size_t>(*override_T)
                   : static_cast<std::size_t>(p.paper_T);
  p.m = override_m ? *override_m : p.paper_m;
  p.grid_step = override_grid_step
                    ? *override_grid_step
                    : (gamma / 4.0) / std::sqrt(static_cast<double>(p.T));
  p.override_T = override_T.has_value();
  p.override_grid_step = override_grid_step.has_value();
  p.override_m = override_m.has_value();
  if (p.T == 0 || p.m == 0 || !(p.grid_step > 0.0)) {
    throw InvalidInputError("halfspace overrides out of range");
  }
  return p;
}

ProjectedHalfspaceStructure release_halfspaces(
    const PointCloud &cloud, double gamma, double alpha, double eps,
    double beta, Rng &rng, std::optional<std::uint64_t> override_T,
    std::optional<double> override_grid_step,
    std::optional<std::uint64_t> override_m, bool prune_shell,
    std::uint64_t net_cap) {
  if (!(eps > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  ProjectedHalfspaceStructure s;
  s.params = resolve_halfspace_params(cloud.dim(), gamma, alpha, beta,
                                      override_T, override_grid_step,
                                      override_m);
  s.seed = rng.seed();
  s.stream = rng.stream();
  s.epsilon = eps;
  // The net uses gamma/4 as its covering radius per the construction; the
  // grid step may be overridden.
  s.net = sphere_net(s.params.T, gamma / 4.0, s.params.grid_step, prune_shell,
                     net_cap);

  const std::size_t m = static_cast<std::size_t>(s.params.m);
  const std::size_t net_size = s.net.size();
  const std::size_t n = cloud.size();
  const double noise_scale =
      static_cast<double>(m) * static_cast<double>(net_size) /
      (eps * static_cast<double>(n));

  s.matrices.resize(m);
  s.values.assign(m * net_size, 0.0);

  // Per-projection work is independent; each i gets its own derived stream
  // so the result is identical whatever the thread schedule.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, m);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (m + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(m, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        Rng local = rng.derive(i + 1);
        s.matrices[i] =
            random_projection_signs(s.params.T, cloud.dim(), local);
        // Project the whole cloud once per i.
        std::vector<std::vector<double>> projected(n);
        for (std::size_t pidx = 0; pidx < n; ++pidx) {
          projected[pidx] = project(s.matrices[i], s.params.T, cloud.dim(),
                                    cloud.point(pidx));
        }
        for (std::size_t j = 0; j < net_size; ++j) {
          std::size_t positive = 0;
          const auto &u = s.net[j];
          for (std::size_t pidx = 0; pidx < n; ++pidx) {
            if (dot(u, projected[pidx]) > 0.0) {
              ++positive;
            }
          }
          const double fraction =
              static_cast<double>(positive) / static_cast<double>(n);
          s.values[i * net_size + j] =
              fraction + sample_laplace(noise_scale, local);
        }
      }
    });
  }
  for (auto &t : pool) {
    t.join();
  }

  s.ledger.add_split("release-halfspaces", eps,
                     static_cast<std::uint64_t>(m) * net_size,
                     static_cast<std::uint64_t>(m) * net_size);
  return s;
}

double evaluate_halfspace(const ProjectedHalfspaceStructure &structure,
                          const std::vector<double> &y) {
  if (y.size() != structure.params.d) {
    throw InvalidInputError("query dimension mismatch");
  }
  const std::size_t net_size = structure.net_size();
  double sum = 0.0;
  for (std::size_t i = 0; i < structure.matrices.size(); ++i) {
    const auto projected =
        project(structure.matrices[i], structure.params.T, structure.params.d,
                y);
    std::size_t best = 0;
    double best_dist = HUGE_VAL;
    for (std::size_t j = 0; j < net_size; ++j) {
      double dist = 0.0;
      const auto &u = structure.net[j];
      for (std::size_t c = 0; c < u.size(); ++c) {
        const double diff = projected[c] - u[c];
        dist += diff * diff;
      }
      if (dist < best_dist) { // strict: ties keep the lowest index
        best_dist = dist;
        best = j;
      }
    }
    sum += structure.value(i, best);
  }
  return sum / static_cast<double>(structure.matrices.size());
}

double jl_inner_product_check(const std::vector<double> &x,
                              const std::vector<double> &y, std::size_t T,
                              double varsigma, std::uint64_t trials,
                              Rng &rng) {
  if (x.size() != y.size() || x.empty()) {
    throw InvalidInputError("vectors must share a positive dimension");
  }
  const double target = dot(x, y);
  const double threshold =
      (varsigma / 2.0) * (dot(x, x) + dot(y, y));
  std::uint64_t violations = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto signs = random_projection_signs(T, x.size(), rng);
    const auto ax = project(signs, T, x.size(), x);
    const auto ay = project(signs, T, x.size(), y);
    if (std::abs(dot(ax, ay) - target) >= threshold) {
      ++violations;
    }
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

namespace {

constexpr const char *kStructureHeader = "dpsynth-halfspace-structure 1";

void expect_key(std::istream &in, const std::string &key, std::string &value) {
  std::string k;
  if (!(in >> k) || k != key) {
    throw InvalidInputError("structure file: expected key '" + key + "'");
  }
  if (!(in >> value)) {
    throw InvalidInputError("structure file: missing value for '" + key + "'");
  }
}

double read_double(std::istream &in, const std::string &key) {
  std::string v;
  expect_key(in, key, v);
  return std::stod(v);
}

std::uint64_t read_u64(std::istream &in, const std::string &key) {
  std::string v;
  expect_key(in, key, v);
  return std::stoull(v);
}

} // namespace

void write_structure(std::ostream &out,
                     const ProjectedHalfspaceStructure &s) {
  const auto &p = s.params;
  out << kStructureHeader << '\n';
  out << "seed " << s.seed << '\n';
  out << "stream " << s.stream << '\n';
  out << "epsilon " << fmt17(s.epsilon) << '\n';
  out << "d " << p.d << '\n';
  out << "gamma " << fmt17(p.gamma) << '\n';
  out << "alpha " << fmt17(p.alpha) << '\n';
  out << "beta " << fmt17(p.beta) << '\n';
  out << "varsigma " << fmt17(p.varsigma) << '\n';
  out << "tau " << fmt17(p.tau) << '\n';
  out << "paper_T " << p.paper_T << '\n';
  out << "paper_m " << p.paper_m << '\n';
  out << "paper_grid_step " << fmt17(p.paper_grid_step) << '\n';
  out << "paper_net_log_count " << fmt17(p.paper_net_log_count) << '\n';
  out << "T " << p.T << '\n';
  out << "m " << p.m << '\n';
  out << "grid_step " << fmt17(p.grid_step) << '\n';
  out << "override_T " << (p.override_T ? 1 : 0) << '\n';
  out << "override_grid_step " << (p.override_grid_step ? 1 : 0) << '\n';
  out << "override_m " << (p.override_m ? 1 : 0) << '\n';
  out << "override_mode " << (p.override_mode() ? 1 : 0) << '\n';
  if (p.override_mode()) {
    out << "note override-mode: guarantees are empirical, not theorem-backed"
        << '\n';
  }
  out << "net_size " << s.net.size() << '\n';
  for (std::size_t i = 0; i < s.matrices.size(); ++i) {
    out << "matrix " << i << ' ';
    for (std::int8_t sign : s.matrices[i]) {
      out << (sign > 0 ? '+' : '-');
    }
    out << '\n';
  }
  for (std::size_t j = 0; j < s.net.size(); ++j) {
    out << "net " << j;
    for (double c : s.net[j]) {
      out << ' ' << fmt17(c);
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < s.matrices.size(); ++i) {
    out << "values " << i;
    for (std::size_t j = 0; j < s.net.size(); ++j) {
      out << ' ' << fmt17(s.value(i, j));
    }
    out << '\n';
  }
}

ProjectedHalfspaceStructure read_structure(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kStructureHeader) {
    throw InvalidInputError("not a halfspace structure file");
  }
  ProjectedHalfspaceStructure s;
  s.seed = read_u64(in, "seed");
  s.stream = read_u64(in, "stream");
  s.epsilon = read_double(in, "epsilon");
  HalfspaceParams &p = s.params;
  p.d = static_cast<std::size_t>(read_u64(in, "d"));
  p.gamma = read_double(in, "gamma");
  p.alpha = read_double(in, "alpha");
  p.beta = read_double(in, "beta");
  p.varsigma = read_double(in, "varsigma");
  p.tau = read_double(in, "tau");
  p.paper_T = read_u64(in, "paper_T");
  p.paper_m = read_u64(in, "paper_m");
  p.paper_grid_step = read_double(in, "paper_grid_step");
  p.paper_net_log_count = read_double(in, "paper_net_log_count");
  p.T = static_cast<std::size_t>(read_u64(in, "T"));
  p.m = read_u64(in, "m");
  p.grid_step = read_double(in, "grid_step");
  p.override_T = read_u64(in, "override_T") != 0;
  p.override_grid_step = read_u64(in, "override_grid_step") != 0;
  p.override_m = read_u64(in, "override_m") != 0;
  read_u64(in, "override_mode");
  if (p.override_mode()) {
    std::string rest;
    std::getline(in, rest); // finish the override_mode line
    std::getline(in, rest); // the note line
  }
  const std::uint64_t net_size = read_u64(in, "net_size");

  s.matrices.resize(p.m);
  for (std::uint64_t i = 0; i < p.m; ++i) {
    const std::uint64_t idx = read_u64(in, "matrix");
    (void)idx;
    std::string signs;
    if (!(in >> signs) || signs.size() != p.T * p.d) {
      throw InvalidInputError("structure file: bad matrix row");
    }
    auto &mat = s.matrices[i];
    mat.resize(signs.size());
    for (std::size_t k = 0; k < signs.size(); ++k) {
      if (signs[k] != '+' && signs[k] != '-') {
        throw InvalidInputError("structure file: bad sign character");
      }
      mat[k] = signs[k] == '+' ? 1 : -1;
    }
  }
  s.net.resize(net_size);
  for (std::uint64_t j = 0; j < net_size; ++j) {
    const std::uint64_t idx = read_u64(in, "net");
    (void)idx;
    auto &point = s.net[j];
    point.resize(p.T);
    for (std::size_t c = 0; c < p.T; ++c) {
      if (!(in >> point[c])) {
        throw InvalidInputError("structure file: bad net coordinate");
      }
    }
  }
  s.values.resize(p.m * net_size);
  for (std::uint64_t i = 0; i < p.m; ++i) {
    const std::uint64_t idx = read_u64(in, "values");
    (void)idx;
    for (std::uint64_t j = 0; j < net_size; ++j) {
      if (!(in >> s.values[i * net_size + j])) {
        throw InvalidInputError("structure file: bad value");
      }
    }
  }
  return s;
}

} // namespace dpsynth
