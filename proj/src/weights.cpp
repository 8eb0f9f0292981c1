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

#include "gcond/weights.hpp"

#include <algorithm>
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gcond/errors.hpp"
#include "gcond/gauss_legendre.hpp"

namespace gcond {
namespace {

double fd_step(double r) { return 1e-5 * std::max(1.0, r); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

RadialWeight::RadialWeight(std::string name, Fn phi, Fn phi_d1, Fn phi_d2,
                           double m, double M)
    : name_(std::move(name)),
      phi_(std::move(phi)),
      d1_(std::move(phi_d1)),
      d2_(std::move(phi_d2)),
      m_(m),
      M_(M) {
  if (!phi_) throw std::invalid_argument("RadialWeight: phi is required");
  if (!(m_ > 0.0) || !(M_ >= m_)) {
    throw std::invalid_argument("RadialWeight: need 0 < m <= M");
  }
}

RadialWeight RadialWeight::ginibre() {
  return RadialWeight(
      "ginibre", [](double r) { return r * r; },
      [](double r) { return 2.0 * r; }, [](double) { return 2.0; }, 4.0, 4.0);
}

RadialWeight RadialWeight::perturbed() {
  return RadialWeight(
      "perturbed",
      [](double r) { return r * r + 0.5 * std::log1p(r * r); },
      [](double r) { return 2.0 * r + r / (1.0 + r * r); },
      [](double r) {
        const double s = 1.0 + r * r;
        return 2.0 + (1.0 - r * r) / (s * s);
      },
      4.0, 6.0);
}

RadialWeight RadialWeight::tabulated(std::vector<double> radii,
                                     std::vector<double> phi,
                                     std::string name) {
  if (radii.size() != phi.size() || radii.size() < 4) {
    throw std::invalid_argument("tabulated weight: need >= 4 (radius, phi) rows");
  }
  if (radii.front() != 0.0) {
    throw std::invalid_argument("tabulated weight: first radius must be 0");
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw std::invalid_argument("tabulated weight: radii must increase strictly");
    }
  }
  const double r_last = radii.back();
  auto interp = std::make_shared<boost::math::barycentric_rational<double>>(
      std::move(radii), std::move(phi), 3);

  // Laplacian range inside the table, by central differences.
  double m = std::numeric_limits<double>::infinity();
  double M = -m;
  for (int i = 1; i * 0.01 < r_last; ++i) {
    const double r = i * 0.01;
    const double h = fd_step(r);
    if (r + h > r_last) break;
    const double f0 = (*interp)(r);
    const double d1 = ((*interp)(r + h) - (*interp)(r - h)) / (2 * h);
    const double d2 = ((*interp)(r + h) - 2 * f0 + (*interp)(r - h)) / (h * h);
    const double lap = d2 + d1 / r;
    m = std::min(m, lap);
    M = std::max(M, lap);
  }
  if (!(m > 0.0)) {
    throw std::invalid_argument("tabulated weight: Laplacian not bounded below by a positive constant");
  }

  const double phi_last = (*interp)(r_last);
  const double slope_last = interp->prime(r_last);
  const double quad_coef = m / 4.0;
  const double log_coef = r_last * (slope_last - 2.0 * quad_coef * r_last);
  auto phi_fn = [interp, r_last, phi_last, quad_coef, log_coef](double r) {
    if (r <= r_last) return (*interp)(r);
    return phi_last + log_coef * std::log(r / r_last) +
           quad_coef * (r * r - r_last * r_last);
  };
  return RadialWeight(std::move(name), phi_fn, nullptr, nullptr, m, M);
}

RadialWeight RadialWeight::from_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight table " + path.string());
  std::vector<double> radii;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    double r = 0.0;
    double v = 0.0;
    if (!(row >> r)) continue;
    if (!(row >> v)) throw std::invalid_argument("weight table: malformed row '" + line + "'");
    radii.push_back(r);
    values.push_back(v);
  }
  return tabulated(std::move(radii), std::move(values), path.filename().string());
}

double RadialWeight::phi_d1(double r) const {
  if (d1_) return d1_(r);
  const double h = fd_step(r);
  return (phi_(r + h) - phi_(std::abs(r - h))) / (2 * h);
}

double RadialWeight::phi_d2(double r) const {
  if (d2_) return d2_(r);
  const double h = fd_step(r);
  return (phi_(r + h) - 2 * phi_(r) + phi_(std::abs(r - h))) / (h * h);
}

double RadialWeight::laplacian(double r) const {
  return phi_d2(r) + phi_d1(r) / r;
}

LaplacianReport check_laplacian_bounds(const RadialWeight& w, double eps) {
  LaplacianReport report;
  report.min_laplacian = std::numeric_limits<double>::infinity();
  report.max_laplacian = -report.min_laplacian;
  double last_decrease = 0.0;
  bool any_decrease = false;
  for (int i = 1; i <= 2000; ++i) {
    const double r = 0.01 * i;
    const double lap = w.laplacian(r);
    report.min_laplacian = std::min(report.min_laplacian, lap);
    report.max_laplacian = std::max(report.max_laplacian, lap);
    if (w.phi_d1(r) < 0.0) {
      last_decrease = r;
      any_decrease = true;
    }
  }
  report.within_bounds = report.min_laplacian >= w.m() - eps &&
                         report.max_laplacian <= w.M() + eps;
  report.nondecreasing_from = any_decrease ? last_decrease + 0.01 : 0.01;
  report.eventually_nondecreasing = report.nondecreasing_from < 20.0;
  return report;
}

double weight_density(const RadialWeight& w, cplx z) {
  return std::exp(-2.0 * w.phi(std::abs(z)));
}

double log_radial_moment(const RadialWeight& w, int k, const QuadratureSpec& quad) {
  if (k < 0) throw std::invalid_argument("radial_moment: k must be nonnegative");
  if (quad.node_count < 16) {
    throw std::invalid_argument("radial_moment: node_count must be >= 16");
  }
  const double power = 2.0 * k + 1.0;
  auto log_integrand = [&](double r) { return power * std::log(r) - 2.0 * w.phi(r); };

  // Locate the peak on a geometric scan, then walk out to the cut-off where
  // the integrand has dropped by 1e-18 relative to it.
  const double drop = std::log(1e18);
  double r = 1e-3;
  double log_max = -std::numeric_limits<double>::infinity();
  double r_peak = r;
  while (true) {
    const double g = log_integrand(r);
    if (g > log_max) {
      log_max = g;
      r_peak = r;
    }
    if (r > r_peak && g < log_max - drop - 5.0) break;
    r *= 1.02;
    if (r > 1e6) throw NonConvergent("radial_moment: integrand does not decay");
  }
  double r_cut = quad.truncation_radius;
  if (r_cut <= 0.0) {
    double lo = r_peak;
    double hi = r;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (log_integrand(mid) < log_max - drop) hi = mid; else lo = mid;
    }
    r_cut = hi;
  }

  auto integrate = [&](int panels) {
    const double width = r_cut / panels;
    const QuadratureRule ref = gauss_legendre(quad.node_count, 0.0, width);
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double base = p * width;
      for (int i = 0; i < quad.node_count; ++i) {
        sum += ref.weights[i] * std::exp(log_integrand(base + ref.nodes[i]) - log_max);
      }
    }
    return sum;
  };

  double previous = integrate(1);
  int panels = 1;
  for (int level = 0; level < quad.max_refinements; ++level) {
    panels *= 2;
    const double current = integrate(panels);
    if (std::abs(current - previous) <= quad.rel_tol * std::abs(current)) {
      return std::log(kTwoPi) + log_max + std::log(current);
    }
    previous = current;
  }
  throw NonConvergent("radial_moment: no agreement to tolerance for k = " +
                      std::to_string(k));
}

double radial_moment(const RadialWeight& w, int k, const QuadratureSpec& quad) {
  return std::exp(log_radial_moment(w, k, quad));
}

std::vector<double> log_moment_coefficients(const RadialWeight& w, int n,
                                            const QuadratureSpec& quad) {
  if (n < 1) throw std::invalid_argument("moment_coefficients: n must be >= 1");
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = -log_radial_moment(w, k, quad);
  return out;
}

std::vector<double> moment_coefficients(const RadialWeight& w, int n,
                                        const QuadratureSpec& quad) {
  std::vector<double> out = log_moment_coefficients(w, n, quad);
  for (double& v : out) v = std::exp(v);
  return out;
}

}  // namespace gcond
