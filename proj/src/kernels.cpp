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

#include "gcond/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "gcond/errors.hpp"

namespace gcond {

KernelModel::KernelModel(RadialWeight weight, std::vector<double> coeffs,
                         QuadratureSpec quad)
    : weight_(std::make_shared<const RadialWeight>(std::move(weight))),
      coeffs_(std::move(coeffs)),
      quad_(quad) {
  if (coeffs_.empty()) throw std::invalid_argument("KernelModel: n must be >= 1");
  sqrt_coeffs_.reserve(coeffs_.size());
  for (double c : coeffs_) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("KernelModel: coefficients must be positive and finite");
    }
    sqrt_coeffs_.push_back(std::sqrt(c));
  }
}

KernelModel KernelModel::build(const RadialWeight& weight, int n,
                               const QuadratureSpec& quad) {
  return KernelModel(weight, moment_coefficients(weight, n, quad), quad);
}

cplx KernelModel::eval(cplx z, cplx w) const {
  const cplx x = z * std::conj(w);
  cplx sum = coeffs_.back();
  for (int k = n() - 2; k >= 0; --k) sum = sum * x + coeffs_[k];
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
    throw Overflow("kernel value not representable at |z conj(w)| = " +
                   std::to_string(std::abs(x)));
  }
  return sum;
}

Eigen::VectorXcd KernelModel::features(cplx z) const {
  Eigen::VectorXcd f(n());
  cplx power = 1.0;
  for (int a = 0; a < n(); ++a) {
    f(a) = sqrt_coeffs_[a] * power;
    power *= z;
  }
  return f;
}

Eigen::MatrixXcd KernelModel::coefficient_matrix() const {
  return Eigen::MatrixXcd::Identity(n(), n());
}

double KernelModel::tail_ratio(double rho) const {
  const double log_next = -log_radial_moment(*weight_, n(), quad_);
  const double x = rho * rho;
  double retained = 0.0;
  double power = 1.0;
  for (int k = 0; k < n(); ++k) {
    retained += coeffs_[k] * power;
    power *= x;
  }
  return std::exp(log_next + n() * std::log(x)) / retained;
}

PalmedKernel::PalmedKernel(KernelModel base)
    : base_(std::move(base)), coeffs_(base_.coefficient_matrix()) {}

void PalmedKernel::chain(cplx z, std::vector<cplx>& alpha) const {
  alpha.resize(points_.size());
  for (std::size_t t = 0; t < points_.size(); ++t) {
    cplx value = base_.eval(z, points_[t]);
    for (std::size_t s = 0; s < t; ++s) value -= alpha[s] * cross_[t][s] / pivots_[s];
    alpha[t] = value;
  }
}

cplx PalmedKernel::eval(cplx z, cplx w) const {
  cplx value = base_.eval(z, w);
  if (points_.empty()) return value;
  std::vector<cplx> az;
  std::vector<cplx> aw;
  chain(z, az);
  chain(w, aw);
  for (std::size_t s = 0; s < points_.size(); ++s) {
    value -= az[s] * std::conj(aw[s]) / pivots_[s];
  }
  return value;
}

PalmedKernel PalmedKernel::reduced(cplx q) const {
  for (cplx p : points_) {
    if (std::abs(p - q) <= 1e-12) {
      throw DegenerateCondition("conditioning point repeated");
    }
  }
  std::vector<cplx> alpha;
  chain(q, alpha);
  const double base_diag = base_.diagonal(q);
  double pivot = base_diag;
  for (std::size_t s = 0; s < alpha.size(); ++s) pivot -= std::norm(alpha[s]) / pivots_[s];
  if (!(pivot > 1e-14 * base_diag)) {
    throw DegenerateCondition("reduced diagonal vanishes at the conditioning point");
  }

  PalmedKernel out(*this);
  std::vector<cplx> row(alpha.size());
  for (std::size_t s = 0; s < alpha.size(); ++s) row[s] = std::conj(alpha[s]);
  out.points_.push_back(q);
  out.pivots_.push_back(pivot);
  out.cross_.push_back(std::move(row));

  const Eigen::VectorXcd fq = base_.features(q);
  const Eigen::VectorXcd u = coeffs_ * fq.conjugate();
  const double d = (fq.transpose() * u)(0).real();
  out.coeffs_ = coeffs_ - u * u.adjoint() / d;
  return out;
}

PalmedKernel palm_reduce(const KernelModel& k, cplx q) {
  return PalmedKernel(k).reduced(q);
}

PalmedKernel palm_reduce(const PalmedKernel& k, cplx q) { return k.reduced(q); }

PalmedKernel palm_reduce(const KernelModel& k, std::span<const cplx> points) {
  PalmedKernel out(k);
  for (cplx q : points) out = out.reduced(q);
  return out;
}

}  // namespace gcond
