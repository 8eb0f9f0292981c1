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

#include "gcond/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcond/errors.hpp"
#include "gcond/kernels.hpp"
#include "gcond/parallel.hpp"
#include "gcond/rng.hpp"

namespace gcond {

void EnsembleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("EnsembleSpec: n must be >= 1");
  if (ell() > n) throw std::invalid_argument("EnsembleSpec: more palm points than n");
  for (std::size_t i = 0; i < palm.size(); ++i) {
    for (std::size_t j = i + 1; j < palm.size(); ++j) {
      if (std::abs(palm[i] - palm[j]) <= 1e-12) {
        throw std::invalid_argument("EnsembleSpec: palm points must be distinct");
      }
    }
  }
}

double ope_log_density(const EnsembleSpec& spec, std::span<const cplx> points) {
  if (static_cast<int>(points.size()) != spec.particles()) {
    throw std::invalid_argument("ope_log_density: expected n - l points");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      sum += 2.0 * std::log(std::abs(points[i] - points[j]));
    }
    for (cplx q : spec.palm) sum += 2.0 * std::log(std::abs(points[i] - q));
    sum -= 2.0 * spec.weight.phi(std::abs(points[i]));
  }
  return sum;
}

namespace {

// Rows sqrt(w_j prod_m |z_j - q_m|^2) s_a z_j^a for a < k.
Eigen::MatrixXcd design(const EnsembleSpec& spec, const Grid& grid, const std::vector<double>& scale) {
  const int k = spec.particles();
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(grid.size()), k);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const cplx z = grid.nodes[j];
    cplx lead = std::sqrt(grid.weights[j]);
    for (cplx q : spec.palm) lead *= (z - q);
    cplx power = 1.0;
    for (int a = 0; a < k; ++a) {
      x(static_cast<Eigen::Index>(j), a) = lead * scale[a] * power;
      power *= z;
    }
  }
  return x;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const EnsembleSpec& spec, const Grid& grid) {
  spec.validate();
  const Eigen::MatrixXcd x = design(spec, grid, std::vector<double>(spec.particles(), 1.0));
  // Design rows hold prod (z - q_m) rather than its modulus; the phase cancels.
  return x.transpose() * x.conjugate();
}

double log_partition_function(const EnsembleSpec& spec, const Grid& grid) {
  const Eigen::MatrixXcd g = gram_matrix(spec, grid);
  const int k = spec.particles();
  if (k == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  if (llt.info() != Eigen::Success) throw SingularGram("Gram matrix is not positive definite");
  double log_det = 0.0;
  const Eigen::MatrixXcd l = llt.matrixL();
  for (int i = 0; i < k; ++i) log_det += 2.0 * std::log(l(i, i).real());
  return std::lgamma(k + 1.0) + log_det;
}

double partition_function(const EnsembleSpec& spec, const Grid& grid) {
  return std::exp(log_partition_function(spec, grid));
}

double log_partition_function_kernel(const EnsembleSpec& spec, const QuadratureSpec& quad) {
  spec.validate();
  const KernelModel kernel = KernelModel::build(spec.weight, spec.n, quad);
  double log_zn = std::lgamma(spec.n + 1.0);
  for (double c : kernel.coeffs()) log_zn -= std::log(c);
  const auto l = static_cast<Eigen::Index>(spec.ell());
  double log_det = 0.0;
  if (l > 0) {
    Eigen::MatrixXcd g(l, l);
    for (Eigen::Index i = 0; i < l; ++i) {
      for (Eigen::Index j = 0; j < l; ++j) g(i, j) = kernel.eval(spec.palm[i], spec.palm[j]);
    }
    const double det = g.determinant().real();
    if (!(det > 0.0)) throw SingularGram("kernel determinant at the palm points vanishes");
    log_det = std::log(det);
  }
  return log_zn + std::lgamma(spec.particles() + 1.0) - std::lgamma(spec.n + 1.0) + log_det -
         log_vandermonde_sq(spec.palm);
}

double partition_identity_check(const EnsembleSpec& spec, const Grid& grid) {
  if (spec.ell() < 1) throw std::invalid_argument("partition_identity_check: needs l >= 1");
  const double lhs = log_partition_function(spec, grid);
  const double rhs = log_partition_function_kernel(spec);
  return std::abs(std::expm1(lhs - rhs));
}

Grid ensemble_grid(const EnsembleSpec& spec) {
  const double r_max = std::sqrt(2.0 * spec.n / spec.weight.m()) + 5.0;
  const int n_angular = std::max(32, 8 * ((2 * spec.n + 23) / 8));
  return build_panel_grid(spec.weight, r_max, {}, 0.5, 20, n_angular);
}

Grid sampling_grid(const EnsembleSpec& spec, int n_radial, int n_angular) {
  const double r_max = std::sqrt(2.0 * spec.n / spec.weight.m()) + 4.0;
  return build_polar_grid(spec.weight, r_max, n_radial, n_angular);
}

GridSampler::GridSampler(const EnsembleSpec& spec, const Grid& grid)
    : grid_(grid), k_(spec.particles()) {
  spec.validate();
  const KernelModel base = KernelModel::build(spec.weight, spec.n);
  const PalmedKernel palm = palm_reduce(base, spec.palm);
  const Eigen::MatrixXcd fc = weighted_features(palm, grid) * palm.coefficient_matrix();
  continuum_trace_ = fc.rowwise().squaredNorm().sum();
  if (std::abs(continuum_trace_ - k_) > 1e-3) {
    throw GridTooCoarse("grid trace of the Palm kernel is " + std::to_string(continuum_trace_) +
                        ", expected " + std::to_string(k_));
  }
  leverage_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  if (k_ == 0) return;
  std::vector<double> scale(k_);
  for (int a = 0; a < k_; ++a) scale[a] = std::sqrt(base.coeffs()[a]);
  const Eigen::MatrixXcd x = design(spec, grid, scale);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
  basis_ = qr.householderQ() * Eigen::MatrixXcd::Identity(x.rows(), k_);
  leverage_ = basis_.rowwise().squaredNorm();
}

double GridSampler::node_intensity(std::size_t j) const {
  return leverage_(static_cast<Eigen::Index>(j));
}

std::vector<std::size_t> GridSampler::sample_indices(std::uint64_t seed, std::uint64_t index) const {
  CounterRng rng(seed, "sampler", index);
  std::vector<std::size_t> picked;
  picked.reserve(k_);
  Eigen::VectorXd d = leverage_;
  std::vector<Eigen::VectorXcd> frame;
  const Eigen::Index size = d.size();
  for (int i = 0; i < k_; ++i) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < size; ++j) total += std::max(0.0, d(j));
    const double target = rng.uniform() * total;
    double acc = 0.0;
    Eigen::Index chosen = -1;
    for (Eigen::Index j = 0; j < size; ++j) {
      const double mass = std::max(0.0, d(j));
      if (mass <= 0.0) continue;
      chosen = j;
      acc += mass;
      if (acc > target) break;
    }
    picked.push_back(static_cast<std::size_t>(chosen));
    if (i + 1 == k_) break;

    // Reduce the kernel at the chosen node: e spans the new direction.
    Eigen::VectorXcd e = basis_.row(chosen).adjoint();
    for (const auto& f : frame) e -= f * f.dot(e);
    e /= e.norm();
    const Eigen::VectorXcd c = basis_ * e;
    d -= c.cwiseAbs2();
    d(chosen) = 0.0;
    frame.push_back(std::move(e));
  }
  return picked;
}

Configuration GridSampler::sample(std::uint64_t seed, std::uint64_t index) const {
  Configuration out;
  for (std::size_t j : sample_indices(seed, index)) out.points.push_back(grid_.nodes[j]);
  return out;
}

Configuration sample_dpp_grid(const EnsembleSpec& spec, const Grid& grid, std::uint64_t seed) {
  return GridSampler(spec, grid).sample(seed, 0);
}

McEstimate mc_expectation_gamma(const GridSampler& sampler, const TuplePair& pair, double R,
                                std::size_t n_samples, std::uint64_t seed, int threads) {
  if (n_samples < 2) throw std::invalid_argument("mc_expectation_gamma: need >= 2 samples");
  std::vector<double> values(n_samples);
  parallel_for(
      n_samples,
      [&](std::size_t i) { values[i] = partial_gamma(sampler.sample(seed, i), pair, R); },
      threads);
  McEstimate out;
  out.samples = n_samples;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  var /= static_cast<double>(n_samples - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n_samples));
  return out;
}

McEstimate mc_expectation_gamma(const EnsembleSpec& spec, const TuplePair& pair, double R,
                                std::size_t n_samples, std::uint64_t seed, int threads) {
  if (pair.q.size() != spec.palm.size()) {
    throw std::invalid_argument("mc_expectation_gamma: pair.q must equal the palm tuple");
  }
  for (std::size_t i = 0; i < pair.q.size(); ++i) {
    if (std::abs(pair.q[i] - spec.palm[i]) > 1e-12) {
      throw std::invalid_argument("mc_expectation_gamma: pair.q must equal the palm tuple");
    }
  }
  const GridSampler sampler(spec, sampling_grid(spec));
  return mc_expectation_gamma(sampler, pair, R, n_samples, seed, threads);
}

void write_samples_csv(std::ostream& out, const std::vector<Configuration>& samples) {
  out << "sample_id,point_index,re,im\n";
  out.precision(17);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < samples[s].points.size(); ++i) {
      out << s << ',' << i << ',' << samples[s].points[i].real() << ','
          << samples[s].points[i].imag() << '\n';
    }
  }
}

}  // namespace gcond
