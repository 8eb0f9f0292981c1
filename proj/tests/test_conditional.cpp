// Copyright 2026 The gcond Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcond/conditional.hpp"
#include "gcond/errors.hpp"
#include "gcond/functionals.hpp"
#include "gcond/rng.hpp"

using namespace gcond;

TEST_CASE("exterior weight examples") {
  const Window disk(0.0, 1.5);
  CHECK(exterior_weight(Configuration{}, cplx(0.4, 0.2), disk) == 1.0);
  CHECK(exterior_weight(Configuration{{cplx(2.0)}}, cplx(1.0), disk) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(exterior_weight(Configuration{{cplx(2.0), cplx(-1.0, 3.0), cplx(0.0, -1.7)}}, cplx(0.0), disk) == 1.0);

  CHECK_THROWS_AS(exterior_weight(Configuration{{cplx(4.0)}}, cplx(2.0), Window(cplx(2.0), 1.0)), OriginNotInWindow);
  CHECK_THROWS_AS(exterior_weight(Configuration{{cplx(1.0)}}, cplx(0.1), disk), ExteriorPointInsideWindow);
  CHECK_THROWS_AS(Window(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Window(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("conditional density examples") {
  const Window disk(cplx(0.1, 0.0), 1.0);
  const RadialWeight pw = RadialWeight::perturbed();
  const std::vector<cplx> single{cplx(0.3, -0.4)};
  CHECK(conditional_log_density(single, Configuration{}, disk, pw) == doctest::Approx(-2 * pw.phi(0.5)).epsilon(1e-15));

  const Configuration ext{{cplx(1.5, 0.2), cplx(-2.0, -1.0)}};
  std::vector<cplx> three{cplx(0.2, 0.1), cplx(-0.5, 0.3), cplx(0.4, -0.6)};
  const double base = conditional_log_density(three, ext, disk, pw);
  std::swap(three[0], three[1]);
  CHECK(conditional_log_density(three, ext, disk, pw) == doctest::Approx(base).epsilon(1e-14));
  const std::vector<cplx> twin{cplx(0.2), cplx(0.2)};
  CHECK(conditional_log_density(twin, ext, disk, pw) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("density depends on the exterior only through exterior weights") {
  const Window disk(0.0, 1.2);
  const RadialWeight g = RadialWeight::ginibre();
  const Configuration e1{{cplx(1.5, 0.5), cplx(-2.0, 0.3), cplx(0.1, 3.0)}};
  const Configuration e2{{cplx(-1.3, -1.3), cplx(2.5)}};
  CounterRng rng(17, "trials");
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> a;
    for (int i = 0; i < 3; ++i) a.push_back(std::polar(1.1 * std::sqrt(rng.uniform()), 6.283185307179586 * rng.uniform()));
    double weights = 0.0;
    for (cplx z : a) weights += log_exterior_weight(e1, z, disk) - log_exterior_weight(e2, z, disk);
    const double diff = conditional_log_density(a, e1, disk, g) - conditional_log_density(a, e2, disk, g);
    CHECK(std::abs(diff - weights) < 1e-12);
  }
}

TEST_CASE("ratio form equals the single-point Gamma") {
  const Window disk(0.0, 1.0);
  CounterRng rng(23, "trials");
  for (int t = 0; t < 50; ++t) {
    Configuration ext;
    for (int i = 0; i < 6; ++i) ext.points.push_back(std::polar(1.0 + 3 * rng.uniform(), 6.283185307179586 * rng.uniform()));
    const cplx p(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    const cplx q(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    const double ratio = exterior_weight(ext, p, disk) / exterior_weight(ext, q, disk);
    const double gamma = partial_gamma(ext, TuplePair({p}, {q}), std::numeric_limits<double>::infinity());
    CHECK(std::abs(ratio / gamma - 1) < 1e-12);
  }
}

TEST_CASE("factorization identity") {
  const RadialWeight g = RadialWeight::ginibre();
  CHECK(conditional_factorization_check(3, Window(0.0, 0.8), g, 1, 10, 0) == 0.0);
  CHECK(conditional_factorization_check(3, Window(0.0, 0.8), g, 2, 100, 1) < 1e-9);
  CHECK(conditional_factorization_check(5, Window(cplx(0.2, -0.1), 1.0), RadialWeight::perturbed(), 3, 100, 2) < 1e-9);
  // A larger window moves exterior points inside; the identity is unchanged.
  CHECK(conditional_factorization_check(5, Window(0.0, 1.6), g, 4, 100, 3) < 1e-9);
  CHECK(conditional_factorization_check(4, Window(0.0, 1.0), g, 5, 100) < 1e-9);
}

TEST_CASE("chi-square helper") {
  const std::vector<double> expected{10, 20, 30, 40};
  const HistogramResult same = chi_square_test(expected, expected);
  CHECK(same.chi_square == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0));
  CHECK(same.dof == 3);
  // Bins with small expectation merge forward.
  const std::vector<double> obs{1, 2, 30, 40};
  const std::vector<double> exp{1, 2, 33, 37};
  const HistogramResult merged = chi_square_test(obs, exp);
  CHECK(merged.dof == 1);
  CHECK(merged.chi_square == doctest::Approx(9.0 / 36 + 9.0 / 37).epsilon(1e-14));
  CHECK_THROWS_AS(chi_square_test(obs, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("interior histogram with no exterior") {
  const HistogramResult r = conditional_histogram_test(1, Window(0.0, 0.8), RadialWeight::ginibre(), 100000, 10, 41);
  MESSAGE("n=1 p = " << r.p_value << " conditioned " << r.n_conditioned);
  CHECK(r.p_value > 0.005);
}

TEST_CASE("interior histogram given the exterior") {
  const RadialWeight g = RadialWeight::ginibre();
  const Window disk(0.0, 0.8);
  const HistogramResult exact = conditional_histogram_test(3, disk, g, 200000, 10, 7);
  MESSAGE("n=3 p = " << exact.p_value << " conditioned " << exact.n_conditioned << " of "
                     << exact.n_one_interior);
  CHECK(exact.p_value > 0.005);
  const HistogramResult wrong = conditional_histogram_test(3, disk, g, 200000, 10, 7, InteriorModel::ignore_exterior);
  MESSAGE("negative control p = " << wrong.p_value);
  CHECK(wrong.p_value < 0.005);
  CHECK(wrong.n_conditioned == exact.n_conditioned);
}

TEST_CASE("too few conditioned draws") {
  CHECK_THROWS_AS(conditional_histogram_test(3, Window(0.0, 0.8), RadialWeight::ginibre(), 2000, 10, 1),
                  InsufficientSamples);
}
