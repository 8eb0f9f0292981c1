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
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gcond/grid.hpp"
#include "gcond/kernels.hpp"

namespace gcond {

/// Real multiplier h on the plane, optionally cut to the closed annulus
/// inner <= |z| <= outer (zero outside). Poles are listed so that quadrature
/// can refuse nodes sitting on them.
struct Multiplier {
  std::function<double(cplx)> fn;
  std::vector<cplx> poles;
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();

  static Multiplier constant(double c);
  Multiplier restricted(double new_inner, double new_outer) const;
  bool active(cplx z) const;
  double operator()(cplx z) const { return active(z) ? fn(z) : 0.0; }
};

/// Multiplier values at the grid nodes. Throws PoleOnGrid when an active node
/// lies within 1e-9 of a pole or the value is not finite.
std::vector<double> sample_multiplier(const Multiplier& h, const Grid& grid);

/// Operator on a grid stored as A = L R^*. A dense N x N matrix is the special
/// case L = A, R = I; Nystrom matrices of finite-rank kernels have rank at most
/// the feature dimension and are never materialized unless asked for.
class DiscreteOperator {
 public:
  DiscreteOperator(Eigen::MatrixXcd left, Eigen::MatrixXcd right);
  static DiscreteOperator dense(Eigen::MatrixXcd a);

  Eigen::Index size() const { return left_.rows(); }
  Eigen::Index rank_bound() const { return left_.cols(); }
  const Eigen::MatrixXcd& left() const { return left_; }
  const Eigen::MatrixXcd& right() const { return right_; }

  /// R^* L; shares the nonzero spectrum of A.
  const Eigen::MatrixXcd& core() const { return core_; }
  Eigen::MatrixXcd matrix() const { return left_ * right_.adjoint(); }

 private:
  Eigen::MatrixXcd left_;
  Eigen::MatrixXcd right_;
  Eigen::MatrixXcd core_;
};

/// (F C)^* diag(values) (F C) for a weighted feature matrix F C.
Eigen::MatrixXcd moment_matrix(const Eigen::MatrixXcd& fc,
                               std::span<const double> values);

/// A = diag(sgn(h) sqrt|h|) (F C)(F C)^* diag(sqrt|h|).
DiscreteOperator nystrom_factored(const Eigen::MatrixXcd& fc,
                                  std::span<const double> values);

/// Symmetrized Nystrom discretization
/// A(j, k) = sgn h(z_j) sqrt|h(z_j)| K(z_j, z_k) sqrt|h(z_k)| sqrt(w_j w_k).
/// The kernel's coefficient matrix must be an orthogonal projection, which
/// holds for truncated kernels and their Palm reductions.
template <FiniteRankKernel K>
DiscreteOperator nystrom(const K& kernel, const Grid& grid, const Multiplier& h) {
  const std::vector<double> values = sample_multiplier(h, grid);
  return nystrom_factored(weighted_features(kernel, grid) * kernel.coefficient_matrix(),
                          values);
}

cplx trace(const DiscreteOperator& a);
/// tr(A^k), k >= 1.
cplx trace_power(const DiscreteOperator& a, int k);
double hs_norm(const DiscreteOperator& a);
double schatten_norm(const DiscreteOperator& a, double s);
/// Singular values of A in decreasing order (at most rank_bound of them).
Eigen::VectorXd singular_values(const DiscreteOperator& a);

/// det(I + A) by pivoted LU. Throws Singular when |det| <= 1e-300.
cplx fredholm_det(const DiscreteOperator& a);
/// log det(I + A) on the principal branch of each LU pivot; avoids overflow.
cplx log_fredholm_det(const DiscreteOperator& a);
/// det(I + A) exp(-tr A + tr(A^2) / 2).
cplx det3(const DiscreteOperator& a);
cplx log_det3(const DiscreteOperator& a);

}  // namespace gcond
