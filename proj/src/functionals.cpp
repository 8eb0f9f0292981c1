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

#include "gcond/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcond/errors.hpp"

namespace gcond {

bool Configuration::valid() const {
  return std::all_of(points.begin(), points.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

namespace {

void require_distinct(const std::vector<cplx>& t, const char* what) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (std::abs(t[i] - t[j]) <= 1e-12) {
        throw std::invalid_argument(std::string("TuplePair: repeated point in ") + what);
      }
    }
  }
}

double trace_product(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return x.cwiseProduct(y.transpose()).sum().real();
}

}  // namespace

TuplePair::TuplePair(std::vector<cplx> p_points, std::vector<cplx> q_points)
    : p(std::move(p_points)), q(std::move(q_points)) {
  if (p.empty() || p.size() != q.size()) {
    throw std::invalid_argument("TuplePair: tuples must be nonempty and of equal length");
  }
  require_distinct(p, "p");
  require_distinct(q, "q");
}

double kappa(cplx p, cplx z) {
  if (z == cplx(0.0)) throw DivisionByZero("kappa at z = 0");
  const cplx t = p / z;
  return 2.0 * t.real() + (t * t).real();
}

double kappa(std::span<const cplx> p, cplx z) {
  double sum = 0.0;
  for (cplx pi : p) sum += kappa(pi, z);
  return sum;
}

double log_ratio_sq(const TuplePair& pair, cplx z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pair.ell(); ++i) {
    const double dq = std::abs(z - pair.q[i]);
    if (dq <= 1e-12) throw PoleProximity("point within 1e-12 of a pole q_i");
    sum += 2.0 * (std::log(std::abs(z - pair.p[i])) - std::log(dq));
  }
  return sum;
}

double h_func(const TuplePair& pair, cplx z) {
  double prod = 1.0;
  for (std::size_t i = 0; i < pair.ell(); ++i) {
    const double dq = std::abs(z - pair.q[i]);
    if (dq <= 1e-12) throw PoleProximity("point within 1e-12 of a pole q_i");
    prod *= std::norm((z - pair.p[i]) / (z - pair.q[i]));
  }
  return prod - 1.0;
}

Multiplier h_multiplier(const TuplePair& pair) {
  return Multiplier{[pair](cplx z) { return h_func(pair, z); }, pair.q, 0.0,
                    std::numeric_limits<double>::infinity()};
}

namespace {

bool sweep_ok(const TuplePair& pair, double rho) {
  for (double scale : {1.0, 1.5, 2.0, 4.0}) {
    for (int k = 0; k < 64; ++k) {
      const cplx z = std::polar(rho * scale, 2.0 * std::numbers::pi * k / 64.0);
      double prod = 1.0;
      for (std::size_t i = 0; i < pair.ell(); ++i) {
        const double ratio = std::norm((z - pair.p[i]) / (z - pair.q[i]));
        if (!(std::abs(ratio - 1.0) <= 0.5)) return false;
        prod *= ratio;
      }
      if (!(std::abs(prod - 1.0) <= 0.5)) return false;
    }
  }
  return true;
}

}  // namespace

double r_pq(const TuplePair& pair) {
  double reach = 0.0;
  for (std::size_t i = 0; i < pair.ell(); ++i) {
    reach = std::max({reach, std::abs(pair.p[i]), std::abs(pair.q[i])});
  }
  const double floor = reach + 1.0;
  if (sweep_ok(pair, floor)) return floor;
  double lo = floor;
  double hi = 2.0 * floor;
  while (!sweep_ok(pair, hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (sweep_ok(pair, mid) ? hi : lo) = mid;
  }
  return hi;
}

double sup_h_quadratic(const TuplePair& pair, double r) {
  double best = 0.0;
  for (int j = 0; j <= 112; ++j) {
    const double rho = r * (1.0 + j / 16.0);
    for (int k = 0; k < 256; ++k) {
      const double h = h_func(pair, std::polar(rho, 2.0 * std::numbers::pi * k / 256.0));
      best = std::max(best, std::abs(h - 0.5 * h * h));
    }
  }
  return best;
}

double log_partial_gamma(const Configuration& config, const TuplePair& pair, double R) {
  double sum = 0.0;
  for (cplx x : config.points) {
    if (std::abs(x) <= R) sum += log_ratio_sq(pair, x);
  }
  return sum;
}

double partial_gamma(const Configuration& config, const TuplePair& pair, double R) {
  return std::exp(log_partial_gamma(config, pair, R));
}

double log_vandermonde_sq(std::span<const cplx> t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) sum += 2.0 * std::log(std::abs(t[j] - t[i]));
  }
  return sum;
}

double vandermonde_sq(std::span<const cplx> t) {
  double prod = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) prod *= std::norm(t[j] - t[i]);
  }
  return prod;
}

Grid fredholm_grid(const RadialWeight& w, int n, std::vector<double> breakpoints) {
  const double r_max = std::sqrt(2.0 * n / w.m()) + 5.0;
  const int n_angular = 8 * ((2 * n + 31) / 8);
  return build_panel_grid(w, r_max, std::move(breakpoints), 0.5, 20, n_angular);
}

double expected_gamma_fredholm(const KernelModel& kernel, const TuplePair& pair,
                               const Grid& grid, double R) {
  const PalmedKernel palm = palm_reduce(kernel, pair.q);
  const DiscreteOperator t = nystrom(palm, grid, h_multiplier(pair).restricted(0.0, R));
  return fredholm_det(t).real();
}

double rho_ratio(const KernelModel& kernel, cplx p, cplx q) {
  if (p == q) return 1.0;
  const TuplePair pair({p}, {q});
  const Grid grid = fredholm_grid(kernel.weight(), kernel.n());
  const double expectation = expected_gamma_fredholm(kernel, pair, grid, grid.r_max);
  return expectation * kernel.diagonal(q) / kernel.diagonal(p);
}

double kappa_residual(const TuplePair& pair, cplx z) {
  return log_ratio_sq(pair, z) + kappa(pair.p, z) - kappa(pair.q, z);
}

Grid regularization_grid(const RadialWeight& w, int n, double r, double R) {
  const int n_angular = std::max(64, 8 * ((2 * n + 31) / 8));
  return build_panel_grid(w, R + 1.0, {r, R}, 0.5, 20, n_angular);
}

RegularizationTerms regularization_terms(int n, double R, double r, const KernelModel& kernel,
                                         const TuplePair& pair, const Grid& grid) {
  if (kernel.n() != n) throw std::invalid_argument("regularization_terms: kernel order != n");
  if (n < static_cast<int>(pair.ell())) throw std::invalid_argument("regularization_terms: n < l");
  if (!(r > r_pq(pair)) || !(R > r)) {
    throw std::invalid_argument("regularization_terms: need r_pq < r < R");
  }
  if (grid.r_max < R) throw std::invalid_argument("regularization_terms: grid ends before R");

  const PalmedKernel palm = palm_reduce(kernel, pair.q);
  const Eigen::MatrixXcd f = weighted_features(kernel, grid);
  const Eigen::MatrixXcd fc = f * palm.coefficient_matrix();
  const std::vector<double> h = sample_multiplier(h_multiplier(pair).restricted(0.0, R), grid);

  const std::size_t size = grid.size();
  std::vector<double> h_inner(size, 0.0);
  std::vector<double> a(size, 0.0);
  std::vector<double> a_sq(size, 0.0);
  std::vector<double> in_annulus(size, 0.0);
  std::vector<double> off_annulus(size, 0.0);
  RegularizationTerms out;
  out.r = r;
  out.R = R;
  out.n = n;
  for (std::size_t j = 0; j < size; ++j) {
    const cplx z = grid.nodes[j];
    const double rho = std::abs(z);
    if (rho < r) {
      h_inner[j] = h[j];
      off_annulus[j] = 1.0;
      continue;
    }
    if (rho > R) {
      off_annulus[j] = 1.0;
      continue;
    }
    a[j] = h[j];
    a_sq[j] = h[j] * h[j];
    in_annulus[j] = 1.0;
    const auto row = static_cast<Eigen::Index>(j);
    const double base_diag = f.row(row).squaredNorm();
    const double palm_diag = fc.row(row).squaredNorm();
    const double quad = h[j] - 0.5 * h[j] * h[j];
    out.e2 += (quad + kappa(pair.p, z) - kappa(pair.q, z)) * base_diag;
    out.e3 += quad * (palm_diag - base_diag);
  }

  const Eigen::MatrixXcd g_h = moment_matrix(fc, h);
  const Eigen::MatrixXcd g_inner = moment_matrix(fc, h_inner);
  const Eigen::MatrixXcd g_a = moment_matrix(fc, a);
  const Eigen::MatrixXcd g_a_sq = moment_matrix(fc, a_sq);
  const Eigen::MatrixXcd g_in = moment_matrix(fc, in_annulus);
  const Eigen::MatrixXcd g_off = moment_matrix(fc, off_annulus);

  out.e1 = g_inner.trace().real() - 0.5 * trace_product(g_inner, g_h) -
           0.5 * trace_product(g_a, g_inner);
  // Pairs with one node off the annulus, then pairs inside it; the second
  // bracket is half the sum of |a_j - a_k|^2 |K(z_j, z_k)|^2 over the annulus.
  out.e4 = 0.5 * trace_product(g_a_sq, g_off) +
           0.5 * (trace_product(g_a_sq, g_in) - trace_product(g_a, g_a));

  out.trace_value = g_h.trace().real() - 0.5 * trace_product(g_h, g_h);
  const DiscreteOperator t = nystrom_factored(fc, h);
  out.log_det = log_fredholm_det(t).real();
  out.log_det3 = log_det3(t).real();
  return out;
}

}  // namespace gcond
