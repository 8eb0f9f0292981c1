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

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gcond/configuration.hpp"
#include "gcond/errors.hpp"
#include "gcond/grid.hpp"
#include "gcond/kernels.hpp"
#include "gcond/quadrature.hpp"

namespace gcond {

/// Two tuples of the same length l >= 1, each with pairwise distinct points.
struct TuplePair {
  std::vector<cplx> p;
  std::vector<cplx> q;

  TuplePair(std::vector<cplx> p_points, std::vector<cplx> q_points);
  std::size_t ell() const { return p.size(); }
  TuplePair swapped() const { return TuplePair(q, p); }
};

/// kappa(p, z) = p/z + conj(p/z) + (p/z)^2 / 2 + conj((p/z)^2) / 2.
double kappa(cplx p, cplx z);
/// Sum over the tuple.
double kappa(std::span<const cplx> p, cplx z);

/// log prod_i |(z - p_i) / (z - q_i)|^2. Throws PoleProximity within 1e-12
/// of some q_i.
double log_ratio_sq(const TuplePair& pair, cplx z);
/// prod_i |(z - p_i) / (z - q_i)|^2 - 1.
double h_func(const TuplePair& pair, cplx z);
/// h_func as a quadrature multiplier with the q_i as poles.
Multiplier h_multiplier(const TuplePair& pair);

/// Smallest radius found by doubling then bisection at which both
///   | |(z - p_i)/(z - q_i)|^2 - 1 | <= 1/2 for every i, and
///   | prod_i |(z - p_i)/(z - q_i)|^2 - 1 | <= 1/2
/// hold on the sweep |z| = rho * {1, 1.5, 2, 4}, 64 angles. Never below
/// max_i max(|p_i|, |q_i|) + 1.
double r_pq(const TuplePair& pair);

/// sup of |h - h^2/2| over |z| >= r, estimated on circles r * (1 + j/16),
/// j = 0..112, with 256 angles.
double sup_h_quadratic(const TuplePair& pair, double r);

/// log of prod over points with |x| <= R of prod_i |(x - p_i)/(x - q_i)|^2.
double log_partial_gamma(const Configuration& config, const TuplePair& pair, double R);
double partial_gamma(const Configuration& config, const TuplePair& pair, double R);

/// Grid sum over r <= |z| <= R of (kappa(p, z) - kappa(q, z)) K(z, z) w.
template <FiniteRankKernel K>
double compensator(const TuplePair& pair, const K& kernel, double r, double R,
                   const Grid& grid) {
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const cplx z = grid.nodes[j];
    const double rho = std::abs(z);
    if (rho < r || rho > R) continue;
    const double dk = kappa(pair.p, z) - kappa(pair.q, z);
    if (dk != 0.0) sum += grid.weights[j] * dk * kernel.diagonal(z);
  }
  return sum;
}

/// exp(compensator over [r_pq, R]) * partial_gamma(R).
template <FiniteRankKernel K>
double partial_psi(const Configuration& config, const TuplePair& pair, const K& kernel,
                   double R, const Grid& grid) {
  const double lower = r_pq(pair);
  const double comp = R > lower ? compensator(pair, kernel, lower, R, grid) : 0.0;
  return std::exp(comp + log_partial_gamma(config, pair, R));
}

/// prod_{i<j} |t_j - t_i|^2; 1 for fewer than two points.
double vandermonde_sq(std::span<const cplx> t);
double log_vandermonde_sq(std::span<const cplx> t);

/// det(K(p_i, p_j)) / det(K(q_i, q_j)) * |Delta(q)|^2 / |Delta(p)|^2.
/// Throws SingularGram when either determinant is <= 1e-300 in modulus.
template <FiniteRankKernel K>
double expected_gamma_closed(const K& kernel, const TuplePair& pair);

/// The grid used for Fredholm evaluations of E[Gamma] under a Palm kernel of
/// order n: panels of length 1/2 with 20 nodes up to sqrt(n/2) + 5.
Grid fredholm_grid(const RadialWeight& w, int n, std::vector<double> breakpoints = {});

/// E[Psi_{p,q}] under the Palm kernel K^q, as det(I + T) on a grid.
double expected_gamma_fredholm(const KernelModel& kernel, const TuplePair& pair,
                               const Grid& grid, double R);

/// rho(q)/rho(p) = E[Psi_{p,q}] K(q, q) / K(p, p), with the expectation taken by
/// the Fredholm route on fredholm_grid.
double rho_ratio(const KernelModel& kernel, cplx p, cplx q);

/// log prod |(z - p_i)/(z - q_i)|^2 + kappa(p, z) - kappa(q, z).
double kappa_residual(const TuplePair& pair, cplx z);

struct RegularizationTerms {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
  double r = 0.0;
  double R = 0.0;
  int n = 0;
  /// tr T - tr(T^2)/2 for T = T_{n,R}.
  double trace_value = 0.0;
  double log_det = 0.0;
  double log_det3 = 0.0;

  double sum() const { return e1 + e2 + e3 + e4; }
};

/// Panel grid for the E-terms: breakpoints at r and R, r_max = R + 1.
Grid regularization_grid(const RadialWeight& w, int n, double r, double R);

/// The four terms splitting tr T - tr(T^2)/2, T = sgn(h)sqrt|h| K^q sqrt|h| with
/// h cut to |z| <= R:
///   e1 = tr(chi_0^r T) - tr(chi_0^r T^2)/2 - tr(h_r^R K^q h_0^r K^q)/2
///   e2 = int_{r<=|z|<=R} (h - h^2/2 + kappa(p) - kappa(q)) K(z, z)
///   e3 = int_{r<=|z|<=R} (h - h^2/2) (K^q - K)(z, z)
///   e4 = ||[h_r^R, K^q]||_HS^2 / 4
RegularizationTerms regularization_terms(int n, double R, double r, const KernelModel& kernel,
                                         const TuplePair& pair, const Grid& grid);

struct ClaimIntegrals {
  double i1n = 0.0;
  double i2n = 0.0;
  double i1 = 0.0;
  /// Partial sum of the full-kernel series for I2 through order truncation;
  /// a lower bound for I2 since every term is nonnegative.
  double i2_partial = 0.0;
  /// i2_partial plus an asymptotic tail estimate assuming terms ~ c/k^2.
  double i2 = 0.0;
  double i2_tail_estimate = 0.0;
  /// The a_{n-1} boundary term of I2(n, r), bounded by 1/r^2.
  double boundary_term = 0.0;
  int truncation = 0;
};

/// I1(n, r), I2(n, r) and their full-kernel counterparts by polar separation.
/// Every double integral factorizes into products of one-dimensional
/// incomplete moments over [0, r] and [r, inf), evaluated in log space. The
/// supplied coefficients serve for k < coeffs.size(); higher ones come from the
/// same radial rule.
ClaimIntegrals i1_i2_radial(std::span<const double> coeffs, const RadialWeight& w, int n,
                            double r);

template <FiniteRankKernel K>
double expected_gamma_closed(const K& kernel, const TuplePair& pair) {
  const auto l = static_cast<Eigen::Index>(pair.ell());
  Eigen::MatrixXcd gp(l, l);
  Eigen::MatrixXcd gq(l, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = 0; j < l; ++j) {
      gp(i, j) = kernel.eval(pair.p[i], pair.p[j]);
      gq(i, j) = kernel.eval(pair.q[i], pair.q[j]);
    }
  }
  const double dp = gp.determinant().real();
  const double dq = gq.determinant().real();
  if (std::abs(dp) <= 1e-300 || std::abs(dq) <= 1e-300) {
    throw SingularGram("kernel Gram determinant vanishes");
  }
  return dp / dq * std::exp(log_vandermonde_sq(pair.q) - log_vandermonde_sq(pair.p));
}

}  // namespace gcond
