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
#include <cstdint>
#include <span>

#include "gcond/configuration.hpp"
#include "gcond/weights.hpp"

namespace gcond {

/// Open disk |z - center| < radius.
struct Window {
  cplx center = 0.0;
  double radius = 1.0;

  Window() = default;
  Window(cplx c, double r);
  bool contains(cplx z) const { return std::abs(z - center) < radius; }
};

/// log prod_{x in exterior} |1 - z/x|^2. Throws OriginNotInWindow unless 0 lies
/// in B, ExteriorPointInsideWindow if some exterior point does.
double log_exterior_weight(const Configuration& exterior, cplx z, const Window& B);
double exterior_weight(const Configuration& exterior, cplx z, const Window& B);

/// sum_{i<j} log|z_i - z_j|^2 + sum_i [log exterior_weight(z_i) - 2 phi(|z_i|)].
double conditional_log_density(std::span<const cplx> interior, const Configuration& exterior,
                               const Window& B, const RadialWeight& w);

/// Largest discrepancy, over random splits of n points into k inside B and
/// n - k outside, between the change of the joint log density and the change of
/// the conditional log density when the interior points are redrawn. A
/// negative k draws k uniformly from 0..n in every trial.
double conditional_factorization_check(int n, const Window& B, const RadialWeight& w,
                                       std::uint64_t seed, int trials, int k = -1);

enum class InteriorModel {
  exact,           ///< prod |1 - z/x|^2 e^{-2 phi}
  ignore_exterior  ///< e^{-2 phi} alone; used as a negative control
};

struct HistogramResult {
  double p_value = 0.0;
  double chi_square = 0.0;
  int dof = 0;
  std::size_t n_one_interior = 0;  ///< draws with exactly one point in B
  std::size_t n_conditioned = 0;   ///< of those, draws in the selected exterior class
};

/// Draws the n-point ensemble on a grid, keeps the draws with exactly one point
/// in B whose exterior falls in the most populated coarse class (8 x 8
/// angular-radial cells, taken modulo rotation), and tests the radial histogram
/// of the interior point against the conditional law. Expected bin counts sum
/// the exact conditional probabilities given each kept draw's exterior.
/// Adjacent bins are merged until every expected count is at least 5.
/// Throws InsufficientSamples below 500 conditioned draws.
HistogramResult conditional_histogram_test(int n, const Window& B, const RadialWeight& w,
                                           std::size_t samples, int bins, std::uint64_t seed,
                                           InteriorModel model = InteriorModel::exact,
                                           int threads = 0);

/// Pearson statistic and upper-tail p-value after merging adjacent bins with
/// expected count below 5.
HistogramResult chi_square_test(std::span<const double> observed, std::span<const double> expected);

}  // namespace gcond
