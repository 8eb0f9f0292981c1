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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gcond/functionals.hpp"
#include "gcond/gauss_legendre.hpp"

namespace gcond {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Composite Gauss-Legendre rule for 2 pi int f(x) e^{-2 phi(x)} x dx, kept as
// log weights so that moments of any order stay representable.
struct LogRule {
  std::vector<double> log_x;
  std::vector<double> base;  // log(2 pi w_j x_j) - 2 phi(x_j)

  LogRule(const RadialWeight& w, double lo, double hi) {
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.25)));
    for (int p = 0; p < panels; ++p) {
      const double a = lo + (hi - lo) * p / panels;
      const double b = lo + (hi - lo) * (p + 1) / panels;
      const QuadratureRule rule = gauss_legendre(24, a, b);
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        log_x.push_back(std::log(x));
        base.push_back(std::log(2.0 * std::numbers::pi * rule.weights[j] * x) - 2.0 * w.phi(x));
      }
    }
  }

  // log of 2 pi int x^a e^{-2 phi} x dx.
  double log_moment(double a) const {
    double top = kNegInf;
    for (std::size_t j = 0; j < base.size(); ++j) top = std::max(top, base[j] + a * log_x[j]);
    if (top == kNegInf) return kNegInf;
    double sum = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) sum += std::exp(base[j] + a * log_x[j] - top);
    return top + std::log(sum);
  }

  // log of 2 pi int (e^{delta} x^2 - 1)^2 x^a e^{-2 phi} x dx.
  double log_square_moment(double a, double delta) const {
    std::vector<double> terms(base.size());
    double top = kNegInf;
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double factor = std::expm1(delta + 2.0 * log_x[j]);
      terms[j] = factor == 0.0 ? kNegInf : base[j] + a * log_x[j] + 2.0 * std::log(std::abs(factor));
      top = std::max(top, terms[j]);
    }
    if (top == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - top);
    return top + std::log(sum);
  }
};

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double top = std::max(x, y);
  return top + std::log1p(std::exp(-std::abs(x - y)));
}

}  // namespace

ClaimIntegrals i1_i2_radial(std::span<const double> coeffs, const RadialWeight& w, int n,
                            double r) {
  if (!(r > 0.0) || n < 1) throw std::invalid_argument("i1_i2_radial: need r > 0, n >= 1");

  // The full-kernel terms of I2 decay only like 1/k^2 once the k-th monomial
  // lives beyond r, which happens near k = M r^2 / 2.
  const int order = std::max(2 * n, static_cast<int>(std::ceil(w.M() * r * r)) + 200);

  // Outer rule must capture x^{2 order + 4} e^{-2 phi}.
  double hi = r;
  {
    const double power = 2.0 * order + 4.0;
    double best = kNegInf;
    double best_at = r;
    for (double x = r;; x += 0.25) {
      const double g = power * std::log(x) - 2.0 * w.phi(x);
      if (g > best) {
        best = g;
        best_at = x;
      }
      if (x > best_at && g < best - 60.0 && x > r + 10.0) {
        hi = x;
        break;
      }
    }
  }
  const LogRule inner(w, 0.0, r);
  const LogRule outer(w, r, hi);

  // log a_k^2.
  std::vector<double> log_a(order + 2);
  for (int k = 0; k < order + 2; ++k) {
    log_a[k] = k < static_cast<int>(coeffs.size())
                   ? std::log(coeffs[k])
                   : -log_add(inner.log_moment(2.0 * k), outer.log_moment(2.0 * k));
  }
  std::vector<double> log_u(order + 1);
  for (int k = 0; k <= order; ++k) log_u[k] = outer.log_moment(2.0 * k);

  ClaimIntegrals out;
  out.truncation = order;

  double log_i1n = kNegInf;
  double log_i1 = kNegInf;
  for (int k = 0; k <= order; ++k) {
    const double term = 2.0 * log_a[k] + inner.log_moment(2.0 * k) + outer.log_moment(2.0 * k - 2.0);
    if (k < n) log_i1n = log_add(log_i1n, term);
    log_i1 = log_add(log_i1, term);
  }
  out.i1n = std::exp(log_i1n);
  out.i1 = std::exp(log_i1);

  const double lead = std::exp(2.0 * log_a[0] + outer.log_moment(-2.0) + log_u[0]);
  out.boundary_term = std::exp(2.0 * log_a[n - 1] + log_u[n - 1] + outer.log_moment(2.0 * n - 4.0));
  double finite_sum = 0.0;
  double full_sum = 0.0;
  double last = 0.0;
  for (int k = 0; k < order; ++k) {
    const double log_v =
        2.0 * log_a[k] + outer.log_square_moment(2.0 * k - 2.0, log_a[k + 1] - log_a[k]);
    const double term = std::exp(log_u[k] + log_v);
    if (k <= n - 2) finite_sum += term;
    full_sum += term;
    last = term;
  }
  out.i2n = lead + out.boundary_term + finite_sum;
  out.i2_partial = lead + full_sum;
  const double kk = order - 1.0;
  out.i2_tail_estimate = last * kk * kk / (kk + 0.5);
  out.i2 = out.i2_partial + out.i2_tail_estimate;
  return out;
}

}  // namespace gcond
