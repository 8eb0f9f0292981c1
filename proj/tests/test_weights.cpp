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
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "gcond/errors.hpp"
#include "gcond/weights.hpp"

using namespace gcond;
using std::numbers::pi;

namespace {

double ginibre_moment(int k) { return pi * std::tgamma(k + 1.0) / std::pow(2.0, k + 1); }

// Independent oracle: double-exponential quadrature on [0, inf).
double exp_sinh_moment(const RadialWeight& w, int k) {
  boost::math::quadrature::exp_sinh<double> rule;
  return 2.0 * pi * rule.integrate(
                        [&](double r) {
                          const double v = std::exp((2.0 * k + 1.0) * std::log(r) - 2.0 * w.phi(r));
                          return std::isfinite(v) ? v : 0.0;
                        },
                        0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("weight density at sample points") {
  CHECK(weight_density(RadialWeight::ginibre(), 0.0) == 1.0);
  CHECK(weight_density(RadialWeight::ginibre(), 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(weight_density(RadialWeight::perturbed(), cplx(0.0, 1.0)) ==
        doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-15));
  CHECK(weight_density(RadialWeight::ginibre(), cplx(0.6, 0.8)) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("Ginibre radial moments against the Gamma integral") {
  const RadialWeight g = RadialWeight::ginibre();
  CHECK(radial_moment(g, 0) == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(radial_moment(g, 1) == doctest::Approx(pi / 4).epsilon(1e-13));
  double worst = 0.0;
  for (int k = 0; k <= 30; ++k) {
    worst = std::max(worst, std::abs(radial_moment(g, k) / ginibre_moment(k) - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("moment coefficients") {
  const RadialWeight g = RadialWeight::ginibre();
  const auto one = moment_coefficients(g, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(2 / pi).epsilon(1e-12));
  const auto three = moment_coefficients(g, 3);
  CHECK(three[0] == doctest::Approx(2 / pi).epsilon(1e-12));
  CHECK(three[1] == doctest::Approx(4 / pi).epsilon(1e-12));
  CHECK(three[2] == doctest::Approx(4 / pi).epsilon(1e-12));

  const auto coeffs = moment_coefficients(g, 31);
  double worst = 0.0;
  for (int k = 0; k <= 30; ++k) {
    const double exact = std::pow(2.0, k + 1) / (pi * std::tgamma(k + 1.0));
    worst = std::max(worst, std::abs(coeffs[k] - exact) / exact);
  }
  CHECK(worst < 1e-8);

  const auto logs = log_moment_coefficients(g, 31);
  for (int k = 0; k <= 30; ++k) CHECK(std::exp(logs[k]) == doctest::Approx(coeffs[k]).epsilon(1e-12));

  CHECK_THROWS_AS(moment_coefficients(g, 0), std::invalid_argument);
}

TEST_CASE("perturbed weight coefficients match an independent quadrature") {
  const RadialWeight w = RadialWeight::perturbed();
  const auto coeffs = moment_coefficients(w, 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(coeffs[k] * exp_sinh_moment(w, k) - 1.0) < 1e-9);
  }
  // k = 0 in closed form: 2 pi int r e^{-2 r^2} / (1 + r^2) dr = pi e^2 E1(2).
  CHECK(radial_moment(w, 0) == doctest::Approx(pi * std::exp(2.0) * boost::math::expint(1, 2.0)).epsilon(1e-10));
}

TEST_CASE("moment ratios stay positive and finite") {
  for (const auto& w : {RadialWeight::ginibre(), RadialWeight::perturbed()}) {
    for (int k = 0; k < 30; ++k) {
      const double ratio = radial_moment(w, k + 1) / radial_moment(w, k);
      CHECK(ratio > 0.0);
      CHECK(std::isfinite(ratio));
    }
  }
}

TEST_CASE("Laplacian bounds of the built-in weights") {
  const LaplacianReport g = check_laplacian_bounds(RadialWeight::ginibre());
  CHECK(g.within_bounds);
  CHECK(g.eventually_nondecreasing);
  CHECK(g.min_laplacian == doctest::Approx(4.0));
  CHECK(g.max_laplacian == doctest::Approx(4.0));

  const RadialWeight p = RadialWeight::perturbed();
  const LaplacianReport pr = check_laplacian_bounds(p);
  CHECK(pr.within_bounds);
  CHECK(p.m() == 4.0);
  CHECK(p.M() == 6.0);
  for (double r : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(p.laplacian(r) == doctest::Approx(4.0 + 2.0 / std::pow(1.0 + r * r, 2)).epsilon(1e-10));
  }
}

TEST_CASE("finite-difference derivatives track the analytic ones") {
  const RadialWeight p = RadialWeight::perturbed();
  const RadialWeight fd("perturbed-fd", [](double r) { return r * r + 0.5 * std::log1p(r * r); }, nullptr,
                        nullptr, 4.0, 6.0);
  CHECK_FALSE(fd.has_analytic_derivatives());
  for (double r : {0.3, 1.0, 2.5, 7.0}) {
    CHECK(fd.phi_d1(r) == doctest::Approx(p.phi_d1(r)).epsilon(1e-8));
    CHECK(fd.phi_d2(r) == doctest::Approx(p.phi_d2(r)).epsilon(1e-5));
  }
  CHECK(check_laplacian_bounds(fd, 1e-4).within_bounds);
}

TEST_CASE("tabulated weight reproduces the Ginibre coefficients") {
  std::vector<double> radii;
  std::vector<double> phi;
  for (int i = 0; i <= 400; ++i) {
    radii.push_back(i * 0.02);
    phi.push_back(radii.back() * radii.back());
  }
  const RadialWeight t = RadialWeight::tabulated(radii, phi);
  const auto coeffs = moment_coefficients(t, 8);
  for (int k = 0; k < 8; ++k) {
    const double exact = std::pow(2.0, k + 1) / (pi * std::tgamma(k + 1.0));
    CHECK(coeffs[k] == doctest::Approx(exact).epsilon(1e-6));
  }
  // Past the table the continuation keeps the slope and the lower Laplacian.
  CHECK(t.phi(9.0) == doctest::Approx(81.0).epsilon(1e-3));
}

TEST_CASE("weight table files") {
  const auto path = std::filesystem::temp_directory_path() / "gcond_weight_table.txt";
  {
    std::ofstream out(path);
    out << "# radius phi\n";
    for (int i = 0; i <= 200; ++i) out << i * 0.05 << ' ' << (i * 0.05) * (i * 0.05) << "\n";
  }
  const RadialWeight t = RadialWeight::from_table_file(path);
  CHECK(t.phi(1.0) == doctest::Approx(1.0).epsilon(1e-8));
  {
    std::ofstream out(path);
    out << "0 0\n0.5 0.25\n0.4 0.16\n1 1\n2 4\n";
  }
  CHECK_THROWS_AS(RadialWeight::from_table_file(path), std::invalid_argument);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(RadialWeight::from_table_file(path), std::invalid_argument);
}

TEST_CASE("quadrature failures are signalled") {
  QuadratureSpec strict;
  strict.rel_tol = 1e-30;
  strict.max_refinements = 1;
  CHECK_THROWS_AS(radial_moment(RadialWeight::ginibre(), 3, strict), NonConvergent);
  QuadratureSpec coarse;
  coarse.node_count = 8;
  CHECK_THROWS_AS(radial_moment(RadialWeight::ginibre(), 3, coarse), std::invalid_argument);
  CHECK_THROWS_AS(radial_moment(RadialWeight::ginibre(), -1), std::invalid_argument);
}
