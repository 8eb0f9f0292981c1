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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace gcond {

using cplx = std::complex<double>;

/// Controls the radial moment quadrature.
struct QuadratureSpec {
  int node_count = 32;             ///< Gauss-Legendre nodes per panel, >= 16
  double truncation_radius = 0.0;  ///< 0 selects the cut-off automatically
  double rel_tol = 1e-10;
  int max_refinements = 14;
};

/// A radial weight phi(|z|) defining the reference measure e^{-2 phi} d lambda,
/// with bounds m <= Laplacian(phi) <= M.
///
/// Derivatives are analytic when supplied and otherwise fall back to central
/// differences with step 1e-5 * max(1, r).
class RadialWeight {
 public:
  using Fn = std::function<double(double)>;

  RadialWeight(std::string name, Fn phi, Fn phi_d1, Fn phi_d2, double m,
               double M);

  /// phi(r) = r^2.
  static RadialWeight ginibre();
  /// phi(r) = r^2 + log(1 + r^2) / 2, Laplacian 4 + 2 / (1 + r^2)^2.
  static RadialWeight perturbed();
  /// Interpolates (radius, phi) samples; radii must start at 0 and increase
  /// strictly. Beyond the last radius phi continues as
  /// a log(r) + (m/4) r^2 + const, matching value and slope, so the
  /// Laplacian stays at the table's lower bound.
  static RadialWeight tabulated(std::vector<double> radii,
                                std::vector<double> phi,
                                std::string name = "table");
  /// Two whitespace-separated columns: radius phi. '#' starts a comment.
  static RadialWeight from_table_file(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  double phi(double r) const { return phi_(r); }
  double phi_d1(double r) const;
  double phi_d2(double r) const;
  /// Radial Laplacian phi'' + phi'/r.
  double laplacian(double r) const;
  double m() const { return m_; }
  double M() const { return M_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(d1_); }

 private:
  std::string name_;
  Fn phi_;
  Fn d1_;
  Fn d2_;
  double m_;
  double M_;
};

struct LaplacianReport {
  double min_laplacian = 0.0;
  double max_laplacian = 0.0;
  bool within_bounds = false;
  /// Smallest diagnostic radius beyond which phi' >= 0 at every grid point.
  double nondecreasing_from = 0.0;
  bool eventually_nondecreasing = false;
};

/// Checks m - eps <= Laplacian <= M + eps on r = 0.01, 0.02, ..., 20.
LaplacianReport check_laplacian_bounds(const RadialWeight& w,
                                       double eps = 1e-6);

/// e^{-2 phi(|z|)}.
double weight_density(const RadialWeight& w, cplx z);

/// log of ||z^k||^2 = 2 pi int_0^inf r^{2k+1} e^{-2 phi(r)} dr. Stable for
/// large k where the moment itself overflows.
double log_radial_moment(const RadialWeight& w, int k,
                         const QuadratureSpec& quad = {});

double radial_moment(const RadialWeight& w, int k,
                     const QuadratureSpec& quad = {});

/// a_k^2 = 1 / ||z^k||^2 for k = 0..n-1.
std::vector<double> moment_coefficients(const RadialWeight& w, int n,
                                        const QuadratureSpec& quad = {});

/// log a_k^2 for k = 0..n-1.
std::vector<double> log_moment_coefficients(const RadialWeight& w, int n,
                                            const QuadratureSpec& quad = {});

}  // namespace gcond
