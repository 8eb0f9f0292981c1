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

#include "gcond/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcond/gauss_legendre.hpp"

namespace gcond {

namespace {

Grid assemble(const RadialWeight& w, const std::vector<double>& edges,
              const std::vector<int>& counts, int n_angular) {
  std::vector<double> radial_nodes;
  std::vector<double> radial_weights;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const QuadratureRule rule = gauss_legendre(counts[p], edges[p], edges[p + 1]);
    radial_nodes.insert(radial_nodes.end(), rule.nodes.begin(), rule.nodes.end());
    radial_weights.insert(radial_weights.end(), rule.weights.begin(), rule.weights.end());
  }
  Grid grid;
  grid.r_max = edges.back();
  grid.n_radial = static_cast<int>(radial_nodes.size());
  grid.n_angular = n_angular;
  grid.panel_edges = edges;
  const std::size_t total = radial_nodes.size() * n_angular;
  grid.nodes.reserve(total);
  grid.weights.reserve(total);
  grid.radii.reserve(total);
  const double dtheta = 2.0 * std::numbers::pi / n_angular;
  for (std::size_t i = 0; i < radial_nodes.size(); ++i) {
    const double r = radial_nodes[i];
    const double radial_weight = radial_weights[i] * r * std::exp(-2.0 * w.phi(r)) * dtheta;
    for (int k = 0; k < n_angular; ++k) {
      const double theta = dtheta * (k + 0.5);
      grid.nodes.push_back(std::polar(r, theta));
      grid.weights.push_back(radial_weight);
      grid.radii.push_back(r);
    }
  }
  return grid;
}

}  // namespace

Grid build_polar_grid(const RadialWeight& w, double r_max, int n_radial,
                      int n_angular, std::vector<double> breakpoints) {
  if (!(r_max > 0.0)) throw std::invalid_argument("build_polar_grid: r_max must be positive");
  if (n_radial < 8) throw std::invalid_argument("build_polar_grid: n_radial must be >= 8");
  if (n_angular < 8) throw std::invalid_argument("build_polar_grid: n_angular must be >= 8");

  std::vector<double> edges{0.0};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b > edges.back() + 1e-12 && b < r_max - 1e-12) edges.push_back(b);
  }
  edges.push_back(r_max);

  std::vector<int> counts;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double len = edges[p + 1] - edges[p];
    counts.push_back(std::max(8, static_cast<int>(std::lround(n_radial * len / r_max))));
  }
  return assemble(w, edges, counts, n_angular);
}

Grid build_polar_grid_panels(const RadialWeight& w, std::vector<double> edges,
                             int nodes_per_panel, int n_angular) {
  if (edges.size() < 2 || edges.front() != 0.0) {
    throw std::invalid_argument("build_polar_grid_panels: edges must start at 0");
  }
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    if (!(edges[p + 1] > edges[p])) {
      throw std::invalid_argument("build_polar_grid_panels: edges must increase");
    }
  }
  if (nodes_per_panel < 2) throw std::invalid_argument("build_polar_grid_panels: too few nodes");
  if (n_angular < 8) throw std::invalid_argument("build_polar_grid_panels: n_angular must be >= 8");
  return assemble(w, edges, std::vector<int>(edges.size() - 1, nodes_per_panel), n_angular);
}

Grid build_panel_grid(const RadialWeight& w, double r_max,
                      std::vector<double> breakpoints, double panel_length,
                      int nodes_per_panel, int n_angular) {
  if (!(r_max > 0.0) || !(panel_length > 0.0)) {
    throw std::invalid_argument("build_panel_grid: lengths must be positive");
  }
  breakpoints.push_back(r_max);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> edges{0.0};
  for (double b : breakpoints) {
    if (b <= edges.back() + 1e-12 || b > r_max) continue;
    const int pieces = static_cast<int>(std::ceil((b - edges.back()) / panel_length - 1e-9));
    const double start = edges.back();
    for (int i = 1; i <= pieces; ++i) edges.push_back(start + (b - start) * i / pieces);
  }
  return build_polar_grid_panels(w, std::move(edges), nodes_per_panel, n_angular);
}

}  // namespace gcond
