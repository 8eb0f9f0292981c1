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

#include "gcond/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcond/errors.hpp"

namespace gcond {

Multiplier Multiplier::constant(double c) {
  return Multiplier{[c](cplx) { return c; }, {}, 0.0, std::numeric_limits<double>::infinity()};
}

Multiplier Multiplier::restricted(double new_inner, double new_outer) const {
  Multiplier out = *this;
  out.inner = std::max(inner, new_inner);
  out.outer = std::min(outer, new_outer);
  return out;
}

bool Multiplier::active(cplx z) const {
  const double r = std::abs(z);
  return r >= inner && r <= outer;
}

std::vector<double> sample_multiplier(const Multiplier& h, const Grid& grid) {
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const cplx z = grid.nodes[j];
    if (!h.active(z)) continue;
    for (cplx pole : h.poles) {
      if (std::abs(z - pole) < 1e-9) {
        throw PoleOnGrid("grid node within 1e-9 of a multiplier pole");
      }
    }
    values[j] = h.fn(z);
    if (!std::isfinite(values[j])) throw PoleOnGrid("multiplier not finite at a grid node");
  }
  return values;
}

DiscreteOperator::DiscreteOperator(Eigen::MatrixXcd left, Eigen::MatrixXcd right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.rows() != right_.rows() || left_.cols() != right_.cols()) {
    throw std::invalid_argument("DiscreteOperator: factor shapes differ");
  }
  core_ = right_.adjoint() * left_;
}

DiscreteOperator DiscreteOperator::dense(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DiscreteOperator: matrix not square");
  const Eigen::Index n = a.rows();
  return DiscreteOperator(std::move(a), Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd moment_matrix(const Eigen::MatrixXcd& fc, std::span<const double> values) {
  if (static_cast<Eigen::Index>(values.size()) != fc.rows()) {
    throw std::invalid_argument("moment_matrix: size mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), fc.rows());
  return fc.adjoint() * (v.cast<cplx>().asDiagonal() * fc);
}

DiscreteOperator nystrom_factored(const Eigen::MatrixXcd& fc, std::span<const double> values) {
  if (static_cast<Eigen::Index>(values.size()) != fc.rows()) {
    throw std::invalid_argument("nystrom: size mismatch");
  }
  Eigen::VectorXd root(fc.rows());
  Eigen::VectorXd signed_root(fc.rows());
  for (Eigen::Index j = 0; j < fc.rows(); ++j) {
    root(j) = std::sqrt(std::abs(values[j]));
    signed_root(j) = values[j] < 0.0 ? -root(j) : root(j);
  }
  return DiscreteOperator(signed_root.cast<cplx>().asDiagonal() * fc,
                          root.cast<cplx>().asDiagonal() * fc);
}

cplx trace(const DiscreteOperator& a) { return a.core().trace(); }

cplx trace_power(const DiscreteOperator& a, int k) {
  if (k < 1) throw std::invalid_argument("trace_power: k must be >= 1");
  Eigen::MatrixXcd p = a.core();
  for (int i = 1; i < k; ++i) p = p * a.core();
  return p.trace();
}

double hs_norm(const DiscreteOperator& a) {
  // ||L R^*||_F^2 = tr((L^* L)(R^* R)).
  const Eigen::MatrixXcd ll = a.left().adjoint() * a.left();
  const Eigen::MatrixXcd rr = a.right().adjoint() * a.right();
  return std::sqrt(std::max(0.0, (ll * rr).trace().real()));
}

Eigen::VectorXd singular_values(const DiscreteOperator& a) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> ql(a.left());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a.right());
  const Eigen::Index m = std::min(a.left().rows(), a.left().cols());
  const Eigen::MatrixXcd rl =
      ql.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Eigen::MatrixXcd rr =
      qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  // A = Q_L (R_L R_R^*) Q_R^* with orthonormal Q_L, Q_R.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rl * rr.adjoint());
  return svd.singularValues();
}

double schatten_norm(const DiscreteOperator& a, double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("schatten_norm: s must be >= 1");
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  const double top = sv(0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sum += std::pow(sv(i) / top, s);
  return top * std::pow(sum, 1.0 / s);
}

cplx log_fredholm_det(const DiscreteOperator& a) {
  const Eigen::Index m = a.core().rows();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Eigen::MatrixXcd::Identity(m, m) + a.core());
  const Eigen::MatrixXcd& packed = lu.matrixLU();
  double log_abs = 0.0;
  double arg = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx pivot = packed(i, i);
    if (pivot == cplx(0.0)) throw Singular("I + A is singular");
    log_abs += std::log(std::abs(pivot));
    arg += std::arg(pivot);
  }
  if (lu.permutationP().determinant() < 0) arg += std::numbers::pi;
  if (log_abs <= std::log(1e-300)) throw Singular("|det(I + A)| <= 1e-300");
  return {log_abs, std::remainder(arg, 2.0 * std::numbers::pi)};
}

cplx fredholm_det(const DiscreteOperator& a) { return std::exp(log_fredholm_det(a)); }

cplx log_det3(const DiscreteOperator& a) {
  return log_fredholm_det(a) - trace(a) + 0.5 * trace_power(a, 2);
}

cplx det3(const DiscreteOperator& a) { return std::exp(log_det3(a)); }

}  // namespace gcond
