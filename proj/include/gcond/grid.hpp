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
#include <vector>

#include "gcond/weights.hpp"

namespace gcond {

/// Tensor polar quadrature for integrals against e^{-2 phi} d lambda over the
/// disk |z| <= r_max. The weight of each node already contains the density.
struct Grid {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::vector<double> radii;
  double r_max = 0.0;
  int n_radial = 0;   ///< total radial nodes over all panels
  int n_angular = 0;
  /// Radial panel edges, 0 first and r_max last.
  std::vector<double> panel_edges;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre radially times the offset trapezoid rule
/// theta_k = 2 pi (k + 1/2) / n_angular. Optional interior breakpoints split
/// [0, r_max] into panels so that radial cut-offs at those radii are
/// integrated without a jump inside a panel. Each panel gets
/// max(8, round(n_radial * length / r_max)) nodes.
Grid build_polar_grid(const RadialWeight& w, double r_max, int n_radial,
                      int n_angular, std::vector<double> breakpoints = {});

/// Same tensor rule on explicit radial panels with a fixed node count per
/// panel. edges must start at 0 and increase strictly.
Grid build_polar_grid_panels(const RadialWeight& w, std::vector<double> edges,
                             int nodes_per_panel, int n_angular);

/// Panels of at most panel_length on [0, r_max], split at the breakpoints,
/// each with nodes_per_panel Gauss-Legendre nodes.
Grid build_panel_grid(const RadialWeight& w, double r_max,
                      std::vector<double> breakpoints, double panel_length,
                      int nodes_per_panel, int n_angular);

}  // namespace gcond
