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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dpsynth/errors.hpp"
#include "dpsynth/expmech.hpp"

using namespace dpsynth;

TEST_CASE("equal scores give the uniform distribution") {
  QualityScores q{{1.5, 1.5}, 1.0};
  const auto p = exp_mech_distribution(q, 3.0);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("two-point closed form: weights e^0 and e^{-1}") {
  // scores (0, -1), eps = 2, sensitivity 1 -> exponents 0 and -1.
  QualityScores q{{0.0, -1.0}, 1.0};
  const auto p = exp_mech_distribution(q, 2.0);
  const double e = std::exp(1.0);
  CHECK(p[0] == doctest::Approx(e / (1.0 + e)).epsilon(1e-14)); // 0.73106
  CHECK(p[1] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-14)); // 0.26894
}

TEST_CASE("distribution is shift-invariant and sums to one") {
  QualityScores q{{0.3, -2.0, 1.1, 0.0, -0.4}, 0.5};
  const auto p = exp_mech_distribution(q, 1.7);
  QualityScores shifted = q;
  for (double &s : shifted.scores) {
    s += 123.456;
  }
  const auto p2 = exp_mech_distribution(shifted, 1.7);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i] == doctest::Approx(p2[i]).epsilon(1e-12));
    sum += p[i];
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("stabilization handles exponents in the hundreds") {
  QualityScores q{{0.0, -800.0, -1600.0}, 1.0};
  const auto p = exp_mech_distribution(q, 2.0);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[1] >= 0.0);
  CHECK(std::isfinite(p[1]));
  CHECK(std::isfinite(p[2]));
}

TEST_CASE("monotonicity: higher score means higher probability") {
  QualityScores q{{0.2, 0.9, -0.3, 0.9}, 1.0};
  const auto p = exp_mech_distribution(q, 1.0);
  CHECK(p[1] > p[0]);
  CHECK(p[0] > p[2]);
  CHECK(p[1] == doctest::Approx(p[3]).epsilon(1e-15));
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(exp_mech_distribution({{}, 1.0}, 1.0), InvalidInputError);
  CHECK_THROWS_AS(exp_mech_distribution({{1.0}, 0.0}, 1.0), InvalidInputError);
  CHECK_THROWS_AS(exp_mech_distribution({{1.0}, 1.0}, 0.0), InvalidInputError);
}

TEST_CASE("pointwise privacy bound on score vectors moved by the sensitivity") {
  // Any two score vectors differing by at most the sensitivity per entry
  // (as induced by neighboring inputs) have distributions within e^eps.
  Rng rng(17);
  const double gs = 0.25;
  const double eps = 1.3;
  for (int t = 0; t < 20; ++t) {
    QualityScores a{{}, gs}, b{{}, gs};
    for (int i = 0; i < 6; ++i) {
      const double s = 2.0 * rng.uniform01() - 1.0;
      a.scores.push_back(s);
      b.scores.push_back(s + gs * (2.0 * rng.uniform01() - 1.0));
    }
    const auto pa = exp_mech_distribution(a, eps);
    const auto pb = exp_mech_distribution(b, eps);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(std::abs(std::log(pa[i]) - std::log(pb[i])) <= eps + 1e-9);
    }
  }
}

TEST_CASE("single-item range always samples index zero") {
  QualityScores q{{0.42}, 1.0};
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    CHECK(exp_mech_sample(q, 1.0, rng) == 0);
  }
}

TEST_CASE("empirical frequencies match the exact distribution") {
  QualityScores q{{0.0, -0.5, -1.0, -0.2}, 1.0};
  const double eps = 2.0;
  const auto p = exp_mech_distribution(q, eps);
  Rng rng(99);
  const int n = 100'000;
  std::vector<int> counts(p.size(), 0);
  for (int i = 0; i < n; ++i) {
    ++counts[exp_mech_sample(q, eps, rng)];
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sigma = std::sqrt(p[i] * (1 - p[i]) / n);
    CHECK(std::abs(static_cast<double>(counts[i]) / n - p[i]) <= 3.0 * sigma);
  }
}

TEST_CASE("vanishing epsilon approaches the uniform distribution") {
  QualityScores q{{0.7, -0.9, 0.1}, 1.0};
  const auto p = exp_mech_distribution(q, 1e-12);
  for (double pi : p) {
    CHECK(pi == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
  Rng rng(3);
  const int n = 30'000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i) {
    ++counts[exp_mech_sample(q, 1e-12, rng)];
  }
  const double sigma = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n);
  for (int c : counts) {
    CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 3.0) <= 3.0 * sigma);
  }
}

TEST_CASE("cumulative inverse sampling is deterministic for a fixed state") {
  QualityScores q{{0.0, -0.1, -0.2}, 1.0};
  Rng a(4, 0), b(4, 0);
  for (int i = 0; i < 50; ++i) {
    CHECK(exp_mech_sample(q, 1.0, a) == exp_mech_sample(q, 1.0, b));
  }
}

TEST_CASE("sample_index maps the full unit interval onto valid indices") {
  std::vector<double> p{0.25, 0.25, 0.5};
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t idx = sample_index(p, rng);
    CHECK(idx < p.size());
  }
}
