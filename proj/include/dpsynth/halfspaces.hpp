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

#ifndef DPSYNTH_HALFSPACES_HPP
#define DPSYNTH_HALFSPACES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpsynth/noise.hpp"
#include "dpsynth/rng.hpp"

namespace dpsynth {

inline constexpr std::uint64_t kDefaultSphereNetCap = 10'000'000;

/// n unit-length points in R^d. Inputs with norm below 1 are rescaled to
/// unit norm (flagged); zero vectors are rejected.
class PointCloud {
public:
  PointCloud(std::size_t dim, std::vector<std::vector<double>> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double> &point(std::size_t i) const { return points_[i]; }
  bool rescaled_inputs() const { return rescaled_; }

private:
  std::size_t dim_;
  std::vector<std::vector<double>> points_;
  bool rescaled_ = false;
};

// Fraction of points with strictly positive inner product with y.
double halfspace_query(const PointCloud &cloud, const std::vector<double> &y);

// min over points of |<x, y>|.
double margin(const PointCloud &cloud, const std::vector<double> &y);

// T x d matrix with entries independently +-1/sqrt(T), returned as sign
// bytes (+1/-1); multiply by 1/sqrt(T) when applying.
std::vector<std::int8_t> random_projection_signs(std::size_t T, std::size_t d,
                                                 Rng &rng);

// Apply a sign projection: returns A*x in R^T.
std::vector<double> project(const std::vector<std::int8_t> &signs,
                            std::size_t T, std::size_t d,
                            const std::vector<double> &x);

// gamma-net for unit vectors in R^T: every grid point with coordinates in
// multiples of `step` (default gamma/sqrt(T)) inside [-1,1]^T, zero vector
// removed. `prune_shell` keeps only points with norm in [1-gamma, 1+gamma].
std::vector<std::vector<double>>
sphere_net(std::size_t T, double gamma,
           std::optional<double> step_override = std::nullopt,
           bool prune_shell = false,
           std::uint64_t cap = kDefaultSphereNetCap);

struct HalfspaceParams {
  std::size_t d = 0;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double varsigma = 0.0;      // gamma / 4
  double tau = 0.0;           // alpha / 8
  std::uint64_t paper_T = 0;  // ceil(20 varsigma^-2 ln(1/tau))
  std::uint64_t paper_m = 0;  // ceil((16/alpha^2) d (ln(4 sqrt(d)/gamma) + ln(1/beta)))
  double paper_grid_step = 0.0; // (gamma/4)/sqrt(paper_T)
  double paper_net_log_count = 0.0; // T ln(sqrt(T)/(gamma/4)), paper's count
  // Effective values after overrides.
  std::size_t T = 0;
  std::uint64_t m = 0;
  double grid_step = 0.0;
  bool override_T = false;
  bool override_grid_step = false;
  bool override_m = false;
  bool override_mode() const {
    return override_T || override_grid_step || override_m;
  }
};

// Derive the paper parameter block from (d, gamma, alpha, beta) and apply
// any overrides. Overridden runs carry empirical rather than theorem-backed
// guarantees and every output flags this.
HalfspaceParams
resolve_halfspace_params(std::size_t d, double gamma, double alpha,
                         double beta,
                         std::optional<std::uint64_t> override_T = std::nullopt,
                         std::optional<double> override_grid_step = std::nullopt,
                         std::optional<std::uint64_t> override_m = std::nullopt);

/// Random projections + sphere net + noisy per-net-point answers.
struct ProjectedHalfspaceStructure {
  HalfspaceParams params;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double epsilon = 0.0;
  // m matrices of T*d signs each, row-major.
  std::vector<std::vector<std::int8_t>> matrices;
  std::vector<std::vector<double>> net;
  // values[i * |net| + j] = noisy fraction for projection i, net point j.
  std::vector<double> values;
  BudgetLedger ledger;

  std::size_t net_size() const { return net.size(); }
  double value(std::size_t i, std::size_t j) const {
    return values[i * net.size() + j];
  }
};

// ReleaseHalfspaces: m independent sign projections of the cloud; for each
// projection and net point, the projected halfspace fraction plus
// Lap(m|U|/(eps n)) noise. Spends exactly eps in total.
ProjectedHalfspaceStructure
release_halfspaces(const PointCloud &cloud, double gamma, double alpha,
                   double eps, double beta, Rng &rng,
                   std::optional<std::uint64_t> override_T = std::nullopt,
                   std::optional<double> override_grid_step = std::nullopt,
                   std::optional<std::uint64_t> override_m = std::nullopt,
                   bool prune_shell = false,
                   std::uint64_t net_cap = kDefaultSphereNetCap);

// Evaluate a halfspace query on the structure: project y by each A_i, snap
// to the nearest net point (ties to the lowest index), average the stored
// values.
double evaluate_halfspace(const ProjectedHalfspaceStructure &structure,
                          const std::vector<double> &y);

// Empirical check of the inner-product projection corollary: the fraction of
// trials with |<Ax, Ay> - <x, y>| >= (varsigma/2)(|x|^2 + |y|^2).
double jl_inner_product_check(const std::vector<double> &x,
                              const std::vector<double> &y, std::size_t T,
                              double varsigma, std::uint64_t trials, Rng &rng);

// Self-describing text serialization; sign matrices round-trip bit-exact and
// reals are written with 17 significant digits.
void write_structure(std::ostream &out,
                     const ProjectedHalfspaceStructure &structure);
ProjectedHalfspaceStructure read_structure(std::istream &in);

} // namespace dpsynth

#endif // DPSYNTH_HALFSPACES_HPP
