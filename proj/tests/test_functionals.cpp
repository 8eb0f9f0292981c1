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
#include <numbers>

#include "gcond/configuration.hpp"
#include "gcond/ensembles.hpp"
#include "gcond/errors.hpp"
#include "gcond/functionals.hpp"
#include "gcond/grid.hpp"
#include "gcond/kernels.hpp"
#include "gcond/rng.hpp"

using namespace gcond;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

double factorial_sum(double x, int n) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return sum;
}

TuplePair default_pair() { return TuplePair({cplx(0.3, 0.2)}, {cplx(-0.1, -0.2)}); }

RegularizationTerms terms(const RadialWeight& w, int n, double r, double R, const TuplePair& pair) {
  const KernelModel k = KernelModel::build(w, n);
  return regularization_terms(n, R, r, k, pair, regularization_grid(w, n, r, R));
}

}  // namespace

TEST_CASE("kappa examples") {
  CHECK(kappa(cplx(0.0), cplx(1.3, -0.4)) == 0.0);
  CHECK(kappa(cplx(1.0), cplx(2.0)) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(kappa(I, I) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(kappa(cplx(1.0), cplx(0.0)), DivisionByZero);
  const std::vector<cplx> p{cplx(1.0), I};
  CHECK(kappa(p, I) == doctest::Approx(kappa(cplx(1.0), I) + 3.0).epsilon(1e-15));
}

TEST_CASE("h examples") {
  const TuplePair same({cplx(0.5, 0.5)}, {cplx(0.5, 0.5)});
  CHECK(h_func(same, cplx(2.0, -1.0)) == 0.0);
  const TuplePair pair({cplx(1.0)}, {cplx(0.0)});
  CHECK(h_func(pair, cplx(2.0)) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(std::abs(h_func(pair, cplx(1e4))) < 3e-4);
  CHECK(h_func(pair, cplx(1.0)) == -1.0);
  CHECK_THROWS_AS(h_func(pair, cplx(1e-13)), PoleProximity);
  CHECK_THROWS_AS(TuplePair({cplx(0.0), cplx(0.0)}, {cplx(1.0), cplx(2.0)}), std::invalid_argument);
}

TEST_CASE("r_pq examples") {
  const TuplePair same({cplx(0.6, 0.8)}, {cplx(0.6, 0.8)});
  CHECK(r_pq(same) == doctest::Approx(2.0).epsilon(1e-14));

  // For p=1, q=0 the worst direction is z = -rho, where h = 2/rho + 1/rho^2.
  const TuplePair pair({cplx(1.0)}, {cplx(0.0)});
  const double r = r_pq(pair);
  CHECK(r == doctest::Approx(2.0 + std::sqrt(6.0)).epsilon(1e-8));
  CHECK(r > 1.0);
  // Sweep oracle on a much denser set of radii and angles.
  for (int j = 0; j < 200; ++j) {
    const double rho = r * (1.0 + j / 20.0) * (1 + 1e-9);
    for (int k = 0; k < 360; ++k) CHECK(std::abs(h_func(pair, std::polar(rho, 2 * pi * k / 360.0))) <= 0.5);
  }

  const TuplePair base({cplx(0.5, 0.2), cplx(-0.3, 0.4)}, {cplx(0.1, -0.6), cplx(-0.2, 0.0)});
  const TuplePair doubled({2.0 * base.p[0], 2.0 * base.p[1]}, {2.0 * base.q[0], 2.0 * base.q[1]});
  const double ratio = r_pq(doubled) / r_pq(base);
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 3.0);
}

TEST_CASE("partial_gamma examples and cocycle") {
  const TuplePair pair({cplx(1.0)}, {cplx(0.0)});
  CHECK(partial_gamma(Configuration{}, pair, 3.0) == 1.0);
  const Configuration one{{cplx(2.0)}};
  CHECK(partial_gamma(one, pair, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(partial_gamma(one, pair, 1.0) == 1.0);
  CHECK_THROWS_AS(partial_gamma(Configuration{{cplx(0.0)}}, pair, 3.0), PoleProximity);

  CounterRng rng(4, "trials");
  Configuration x;
  for (int i = 0; i < 40; ++i) x.points.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3));
  const std::vector<cplx> p{cplx(0.1, 0.2), cplx(0.5, -0.1)};
  const std::vector<cplx> q{cplx(-0.3, 0.0), cplx(0.0, 0.7)};
  const std::vector<cplx> s{cplx(1.0, 1.0), cplx(-0.8, -0.4)};
  const double lhs = partial_gamma(x, TuplePair(p, q), 2.5) * partial_gamma(x, TuplePair(q, s), 2.5);
  CHECK(std::abs(lhs / partial_gamma(x, TuplePair(p, s), 2.5) - 1) < 1e-10);

  // Ten thousand factors of 1/4 stay representable in log space.
  Configuration many;
  for (int i = 0; i < 10000; ++i) many.points.push_back(std::polar(2.0, 2 * pi * i / 10000.0) + cplx(0.0));
  const TuplePair half({cplx(0.0)}, {cplx(0.0, 1e-3)});
  CHECK(std::isfinite(log_partial_gamma(many, half, 3.0)));
  const Configuration quarter{std::vector<cplx>(10000, cplx(2.0))};
  CHECK(log_partial_gamma(quarter, pair, 3.0) == doctest::Approx(10000 * std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("compensator and partial_psi for radial weights") {
  const TuplePair pair = default_pair();
  const RadialWeight g = RadialWeight::ginibre();
  const KernelModel k = KernelModel::build(g, 8);
  const double r = r_pq(pair);
  const Grid grid = build_panel_grid(g, 9.0, {r, 8.0}, 0.5, 20, 64);
  CHECK(std::abs(compensator(pair, k, r, 8.0, grid)) < 1e-8);
  const TuplePair same({cplx(0.2)}, {cplx(0.2)});
  CHECK(compensator(same, k, 2.0, 8.0, grid) == 0.0);

  for (double rho : {1.0, 3.7, 12.0}) {
    for (int n_ang : {8, 64, 101}) {
      double sum = 0.0;
      for (int j = 0; j < n_ang; ++j) sum += kappa(cplx(0.7, -0.4), std::polar(rho, 2 * pi * (j + 0.5) / n_ang));
      CHECK(std::abs(sum) < 1e-12);
    }
  }

  CounterRng rng(9, "trials");
  Configuration x;
  for (int i = 0; i < 20; ++i) x.points.emplace_back(rng.uniform(-4, 4), rng.uniform(-4, 4));
  CHECK(std::abs(partial_psi(x, pair, k, 8.0, grid) / partial_gamma(x, pair, 8.0) - 1) < 1e-8);
  CHECK(partial_psi(Configuration{}, same, k, 8.0, grid) == 1.0);

  // A finite sample: the product is constant once R covers every point.
  const EnsembleSpec spec{g, 6, pair.q};
  const GridSampler sampler(spec, sampling_grid(spec));
  const Configuration sample = sampler.sample(5, 0);
  double outer = 0.0;
  for (cplx z : sample.points) outer = std::max(outer, std::abs(z));
  double previous = 0.0;
  for (double R : {outer + 0.5, outer + 1.5, outer + 3.0}) {
    const Grid big = build_panel_grid(g, R + 1, {r, R}, 0.5, 20, 64);
    const double value = partial_psi(sample, pair, k, R, big);
    if (previous != 0.0) CHECK(std::abs(value / previous - 1) < 1e-3);
    previous = value;
  }
}

TEST_CASE("closed-form expectation") {
  const RadialWeight g = RadialWeight::ginibre();
  const KernelModel k = KernelModel::build(g, 10);
  const TuplePair same({cplx(0.3), cplx(-0.5, 0.2)}, {cplx(0.3), cplx(-0.5, 0.2)});
  CHECK(expected_gamma_closed(k, same) == doctest::Approx(1.0).epsilon(1e-14));
  for (cplx p : {cplx(1.0), cplx(0.4, -0.9), cplx(1.5, 0.5)}) {
    const TuplePair pair({p}, {cplx(0.0)});
    CHECK(expected_gamma_closed(k, pair) ==
          doctest::Approx(factorial_sum(2 * std::norm(p), 10)).epsilon(1e-12));
  }
  const KernelModel k80 = KernelModel::build(g, 80);
  CHECK(expected_gamma_closed(k80, TuplePair({cplx(1.0)}, {cplx(0.0)})) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  const KernelModel k1 = KernelModel::build(g, 1);
  CHECK_THROWS_AS(expected_gamma_closed(k1, TuplePair({cplx(0.1), cplx(0.2)}, {cplx(0.3), cplx(0.4)})),
                  SingularGram);
}

TEST_CASE("vandermonde examples") {
  const std::vector<cplx> one{cplx(3.0)};
  CHECK(vandermonde_sq(one) == 1.0);
  CHECK(vandermonde_sq(std::vector<cplx>{}) == 1.0);
  const std::vector<cplx> two{cplx(0.0), cplx(1.0)};
  CHECK(vandermonde_sq(two) == doctest::Approx(1.0));
  const std::vector<cplx> three{cplx(0.0), cplx(1.0), cplx(1.0, 1.0)};
  CHECK(vandermonde_sq(three) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(log_vandermonde_sq(three) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("rho ratio for radial weights") {
  const KernelModel g = KernelModel::build(RadialWeight::ginibre(), 12);
  CHECK(rho_ratio(g, cplx(0.4), cplx(0.4)) == 1.0);
  CHECK(std::abs(rho_ratio(g, cplx(1.0), cplx(0.0)) - 1) < 2e-2);
  const KernelModel p = KernelModel::build(RadialWeight::perturbed(), 12);
  CHECK(std::abs(rho_ratio(p, cplx(0.5), cplx(0.0)) - 1) < 2e-2);
}

TEST_CASE("kappa residual decays cubically") {
  const TuplePair same({cplx(0.4, 0.1)}, {cplx(0.4, 0.1)});
  CHECK(kappa_residual(same, cplx(5.0, 1.0)) == 0.0);

  const TuplePair pair({cplx(1.0)}, {cplx(0.0)});
  const cplx dir = std::polar(1.0, 0.3);
  double previous = 0.0;
  for (double rho : {10.0, 20.0, 40.0, 80.0}) {
    const double value = std::abs(kappa_residual(pair, rho * dir));
    if (previous != 0.0) {
      CHECK(previous / value >= 6.0);
      CHECK(previous / value <= 10.0);
    }
    previous = value;
  }

  const TuplePair general({cplx(0.3, 0.5), cplx(-0.2, 0.1)}, {cplx(0.0, -0.4), cplx(0.6, 0.0)});
  const cplx rot = std::polar(1.0, 1.234);
  const TuplePair rotated({rot * general.p[0], rot * general.p[1]}, {rot * general.q[0], rot * general.q[1]});
  for (double rho : {3.0, 7.0, 15.0}) {
    const cplx z = std::polar(rho, 0.77);
    CHECK(std::abs(kappa_residual(general, z) - kappa_residual(rotated, rot * z)) < 1e-12);
  }
}

TEST_CASE("h Lipschitz envelope in 1/z") {
  const TuplePair pair = default_pair();
  const double r = r_pq(pair);
  CounterRng rng(12, "trials");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cplx z = std::polar(r * (1 + 20 * rng.uniform()), 2 * pi * rng.uniform());
    const cplx w = std::polar(r * (1 + 20 * rng.uniform()), 2 * pi * rng.uniform());
    const double ratio = std::abs(h_func(pair, z) - h_func(pair, w)) / std::abs(1.0 / z - 1.0 / w);
    worst = std::max(worst, ratio);
  }
  MESSAGE("h Lipschitz constant estimate " << worst);
  CHECK(std::isfinite(worst));
  CHECK(worst < 10.0);
}

TEST_CASE("regularization terms") {
  const RadialWeight g = RadialWeight::ginibre();
  const TuplePair same({cplx(0.2, 0.1)}, {cplx(0.2, 0.1)});
  const RegularizationTerms zero = terms(g, 4, 2.0, 4.0, same);
  CHECK(zero.e1 == 0.0);
  CHECK(zero.e2 == 0.0);
  CHECK(zero.e3 == 0.0);
  CHECK(zero.e4 == 0.0);

  const TuplePair pair = default_pair();
  const double r = r_pq(pair) + 0.5;
  for (const auto& w : {RadialWeight::ginibre(), RadialWeight::perturbed()}) {
    const RegularizationTerms t = terms(w, 6, r, 4.0, pair);
    CHECK(std::abs(t.sum() - t.trace_value) < 1e-8);
    CHECK(t.e4 >= 0.0);
    CHECK(std::abs(t.e3) <= pair.ell() * sup_h_quadratic(pair, r));
  }

  CounterRng rng(31, "trials");
  for (int trial = 0; trial < 3; ++trial) {
    const TuplePair random({cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))},
                           {cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))});
    const double rr = r_pq(random) + 0.5;
    const RegularizationTerms t = terms(g, 6, rr, rr + 2.0, random);
    CHECK(std::abs(t.sum() - t.trace_value) < 1e-8);
    CHECK(t.e4 >= 0.0);
  }
}

TEST_CASE("E2 stabilizes as R grows") {
  const RadialWeight g = RadialWeight::ginibre();
  const TuplePair pair = default_pair();
  const double r = r_pq(pair) + 0.5;
  for (int n : {4, 8}) {
    const double at8 = terms(g, n, r, 8.0, pair).e2;
    const double at16 = terms(g, n, r, 16.0, pair).e2;
    CHECK(std::abs(at16 - at8) < 1e-6);
  }
}

TEST_CASE("E4 decreases in r") {
  const RadialWeight g = RadialWeight::ginibre();
  const TuplePair pair = default_pair();
  double previous = 0.0;
  for (double r : {4.0, 8.0, 16.0}) {
    const double e4 = terms(g, 8, r, 2 * r, pair).e4;
    MESSAGE("E4 at r=" << r << ": " << e4);
    CHECK(e4 >= 0.0);
    if (previous != 0.0) CHECK(previous >= 1.5 * e4);
    previous = e4;
  }
}
