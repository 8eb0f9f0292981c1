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
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "gcond/configuration.hpp"
#include "gcond/functionals.hpp"
#include "gcond/grid.hpp"
#include "gcond/weights.hpp"

namespace gcond {

/// Orthogonal polynomial ensemble of n - l points with one-point weight
/// prod_m |z - q_m|^2 e^{-2 phi}: the Palm measure at palm = (q_1..q_l) of the
/// n-point ensemble, or the ensemble itself when palm is empty.
struct EnsembleSpec {
  RadialWeight weight;
  int n = 1;
  std::vector<cplx> palm;

  int ell() const { return static_cast<int>(palm.size()); }
  int particles() const { return n - ell(); }
  /// Throws std::invalid_argument unless n >= l and the palm points are distinct.
  void validate() const;
};

/// sum_{i<j} log|z_i - z_j|^2 + sum_j [sum_m log|z_j - q_m|^2 - 2 phi(|z_j|)].
/// -infinity for coincident points.
double ope_log_density(const EnsembleSpec& spec, std::span<const cplx> points);

/// G(j, k) = int z^j conj(z)^k prod_m |z - q_m|^2 d lambda_phi over the grid.
Eigen::MatrixXcd gram_matrix(const EnsembleSpec& spec, const Grid& grid);

/// Andreief: Z = (n - l)! det(gram_matrix). Throws SingularGram if det <= 0.
double log_partition_function(const EnsembleSpec& spec, const Grid& grid);
double partition_function(const EnsembleSpec& spec, const Grid& grid);

/// The same constant through the kernel:
/// Z_n(phi) (n - l)!/n! det(K_n(q_i, q_j)) / |Delta(q)|^2 with
/// Z_n(phi) = n! prod_k ||z^k||^2 from one-dimensional radial moments.
double log_partition_function_kernel(const EnsembleSpec& spec, const QuadratureSpec& quad = {});

/// |Z_andreief - Z_kernel| / Z_kernel. Requires l >= 1.
double partition_identity_check(const EnsembleSpec& spec, const Grid& grid);

/// Grid holding the ensemble: panels of length 1/2 with 20 nodes up to
/// sqrt(2n/m) + 5 and enough angles for the polynomial degree.
Grid ensemble_grid(const EnsembleSpec& spec);

/// Coarser grid for sampling: n_radial x n_angular on radius sqrt(2n/m) + 4.
Grid sampling_grid(const EnsembleSpec& spec, int n_radial = 64, int n_angular = 64);

/// Exact sampler of the projection DPP obtained by orthonormalizing
/// {z^a prod_m (z - q_m)}_{a < n - l} in the grid measure. Immutable after
/// construction; sample() may be called concurrently.
class GridSampler {
 public:
  /// Throws GridTooCoarse when the grid integral of the continuum Palm kernel
  /// diagonal misses n - l by more than 1e-3.
  GridSampler(const EnsembleSpec& spec, const Grid& grid);

  const Grid& grid() const { return grid_; }
  int particles() const { return k_; }
  double continuum_trace() const { return continuum_trace_; }
  /// Probability of node j under the one-point function, divided by n - l.
  double node_intensity(std::size_t j) const;

  /// Node indices of draw number index of the stream (seed, "sampler").
  std::vector<std::size_t> sample_indices(std::uint64_t seed, std::uint64_t index) const;
  Configuration sample(std::uint64_t seed, std::uint64_t index) const;

 private:
  Grid grid_;
  int k_ = 0;
  Eigen::MatrixXcd basis_;  // k x N, column j = conj of row j of the orthonormal Q
  Eigen::VectorXd leverage_;
  double continuum_trace_ = 0.0;
};

Configuration sample_dpp_grid(const EnsembleSpec& spec, const Grid& grid, std::uint64_t seed);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Mean and standard error of partial_gamma(., pair, R) over independent draws
/// from sampling_grid(spec); draw k uses stream index k.
McEstimate mc_expectation_gamma(const EnsembleSpec& spec, const TuplePair& pair, double R,
                                std::size_t n_samples, std::uint64_t seed, int threads = 0);
McEstimate mc_expectation_gamma(const GridSampler& sampler, const TuplePair& pair, double R,
                                std::size_t n_samples, std::uint64_t seed, int threads = 0);

/// CSV with header sample_id,point_index,re,im.
void write_samples_csv(std::ostream& out, const std::vector<Configuration>& samples);

}  // namespace gcond
