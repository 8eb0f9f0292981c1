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

#include <Eigen/Dense>
#include <complex>
#include <concepts>
#include <memory>
#include <span>
#include <vector>

#include "gcond/grid.hpp"
#include "gcond/weights.hpp"

namespace gcond {

/// Truncated reproducing kernel Pi_n(z, w) = sum_{k<n} a_k^2 (z conj(w))^k of
/// the weighted Fock space. Immutable; evaluation is thread-safe.
class KernelModel {
 public:
  KernelModel(RadialWeight weight, std::vector<double> coeffs,
              QuadratureSpec quad = {});

  /// Computes a_k^2 for k < n from the radial moments of the weight.
  static KernelModel build(const RadialWeight& weight, int n,
                           const QuadratureSpec& quad = {});

  int n() const { return static_cast<int>(coeffs_.size()); }
  int feature_dim() const { return n(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const RadialWeight& weight() const { return *weight_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  /// Horner evaluation. Throws Overflow when the value is not finite.
  cplx eval(cplx z, cplx w) const;
  double diagonal(cplx z) const { return eval(z, z).real(); }

  /// Orthonormal monomials phi_a(z) = a_a z^a, so that
  /// eval(z, w) = features(z)^T conj(features(w)).
  Eigen::VectorXcd features(cplx z) const;
  /// Coefficient matrix C with eval(z, w) = f(z)^T C conj(f(w)); the identity.
  Eigen::MatrixXcd coefficient_matrix() const;

  /// a_n^2 rho^{2n} / sum_{k<n} a_k^2 rho^{2k}: the size of the first omitted
  /// term of the full kernel relative to the retained sum on |z|=|w|=rho.
  double tail_ratio(double rho) const;

 private:
  std::shared_ptr<const RadialWeight> weight_;
  std::vector<double> coeffs_;
  std::vector<double> sqrt_coeffs_;
  QuadratureSpec quad_;
};

/// Kernel reduced at an ordered tuple of conditioning points,
/// K^{q_1..q_l} = (...(K^{q_1})^{q_2}...)^{q_l} with
/// K^q(x, y) = K(x, y) - K(x, q) K(q, y) / K(q, q).
///
/// The intermediate kernels are memoized through their values at the
/// conditioning points, so an evaluation costs l + 1 base evaluations plus
/// O(l^2) arithmetic.
class PalmedKernel {
 public:
  explicit PalmedKernel(KernelModel base);

  const KernelModel& base() const { return base_; }
  const std::vector<cplx>& points() const { return points_; }
  int ell() const { return static_cast<int>(points_.size()); }
  int feature_dim() const { return base_.n(); }
  const RadialWeight& weight() const { return base_.weight(); }

  cplx eval(cplx z, cplx w) const;
  double diagonal(cplx z) const { return eval(z, z).real(); }

  Eigen::VectorXcd features(cplx z) const { return base_.features(z); }
  /// C = I minus the accumulated rank-one corrections.
  const Eigen::MatrixXcd& coefficient_matrix() const { return coeffs_; }

  /// Appends one conditioning point. Throws DegenerateCondition when the
  /// reduced diagonal at q is <= 1e-14 of the base diagonal there.
  PalmedKernel reduced(cplx q) const;

 private:
  // alpha_s(z) = K_s(z, q_s), K_s being the kernel after s reductions.
  void chain(cplx z, std::vector<cplx>& alpha) const;

  KernelModel base_;
  std::vector<cplx> points_;
  std::vector<double> pivots_;              // K_s(q_s, q_s)
  std::vector<std::vector<cplx>> cross_;    // cross_[t][s] = K_s(q_s, q_t), s < t
  Eigen::MatrixXcd coeffs_;
};

PalmedKernel palm_reduce(const KernelModel& k, cplx q);
PalmedKernel palm_reduce(const PalmedKernel& k, cplx q);
/// Reduces at every point of the tuple in order.
PalmedKernel palm_reduce(const KernelModel& k, std::span<const cplx> points);

/// Kernels with a finite feature expansion eval(z, w) = f(z)^T C conj(f(w)).
template <class K>
concept FiniteRankKernel = requires(const K& k, cplx z) {
  { k.eval(z, z) } -> std::convertible_to<cplx>;
  { k.diagonal(z) } -> std::convertible_to<double>;
  { k.features(z) } -> std::convertible_to<Eigen::VectorXcd>;
  { k.coefficient_matrix() } -> std::convertible_to<Eigen::MatrixXcd>;
  { k.feature_dim() } -> std::convertible_to<int>;
  { k.weight() } -> std::convertible_to<const RadialWeight&>;
};

/// max over grid nodes of K(z, z) e^{-2 phi(z)}.
template <FiniteRankKernel K>
double christ_sup(const K& kernel, const Grid& grid) {
  if (grid.size() == 0) throw std::invalid_argument("christ_sup: empty grid");
  double best = 0.0;
  for (cplx z : grid.nodes) {
    best = std::max(best, kernel.diagonal(z) * weight_density(kernel.weight(), z));
  }
  return best;
}

/// Weighted feature matrix F with F(j, a) = sqrt(w_j) phi_a(z_j), so that the
/// Nystrom matrix of the kernel is F C F^*.
template <FiniteRankKernel K>
Eigen::MatrixXcd weighted_features(const K& kernel, const Grid& grid) {
  Eigen::MatrixXcd f(static_cast<Eigen::Index>(grid.size()), kernel.feature_dim());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    f.row(static_cast<Eigen::Index>(j)) =
        std::sqrt(grid.weights[j]) * kernel.features(grid.nodes[j]).transpose();
  }
  return f;
}

}  // namespace gcond
