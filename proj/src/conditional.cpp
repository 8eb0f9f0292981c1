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

#include "gcond/conditional.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "gcond/ensembles.hpp"
#include "gcond/errors.hpp"
#include "gcond/parallel.hpp"
#include "gcond/rng.hpp"

namespace gcond {

Window::Window(cplx c, double r) : center(c), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("Window: radius must be positive");
}

double log_exterior_weight(const Configuration& exterior, cplx z, const Window& B) {
  if (!B.contains(0.0)) throw OriginNotInWindow("window does not contain 0");
  double sum = 0.0;
  for (cplx x : exterior.points) {
    if (B.contains(x)) throw ExteriorPointInsideWindow("exterior point lies in the window");
    sum += std::log(std::norm(1.0 - z / x));
  }
  return sum;
}

double exterior_weight(const Configuration& exterior, cplx z, const Window& B) {
  return std::exp(log_exterior_weight(exterior, z, B));
}

double conditional_log_density(std::span<const cplx> interior, const Configuration& exterior,
                               const Window& B, const RadialWeight& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (!B.contains(interior[i])) throw std::invalid_argument("interior point outside the window");
    for (std::size_t j = i + 1; j < interior.size(); ++j) {
      sum += std::log(std::norm(interior[i] - interior[j]));
    }
    sum += log_exterior_weight(exterior, interior[i], B) - 2.0 * w.phi(std::abs(interior[i]));
  }
  if (interior.empty()) log_exterior_weight(exterior, 0.0, B);
  return sum;
}

namespace {

cplx draw_inside(CounterRng& rng, const Window& B) {
  const double rho = B.radius * std::sqrt(rng.uniform()) * (1.0 - 1e-9);
  return B.center + std::polar(rho, 2.0 * std::numbers::pi * rng.uniform());
}

cplx draw_outside(CounterRng& rng, const Window& B) {
  const double rho = B.radius * (1.05 + 2.0 * rng.uniform());
  return B.center + std::polar(rho, 2.0 * std::numbers::pi * rng.uniform());
}

}  // namespace

double conditional_factorization_check(int n, const Window& B, const RadialWeight& w,
                                       std::uint64_t seed, int trials, int k) {
  if (n < 1) throw std::invalid_argument("conditional_factorization_check: n must be >= 1");
  if (k > n) throw std::invalid_argument("conditional_factorization_check: k > n");
  const EnsembleSpec spec{w, n, {}};
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    CounterRng split(seed, "trials", static_cast<std::uint64_t>(t));
    CounterRng perturb(seed, "perturb", static_cast<std::uint64_t>(t));
    const int inside = k >= 0 ? k : static_cast<int>(split.next() % static_cast<std::uint64_t>(n + 1));
    std::vector<cplx> a;
    std::vector<cplx> a_new;
    Configuration ext;
    for (int i = 0; i < inside; ++i) a.push_back(draw_inside(split, B));
    for (int i = inside; i < n; ++i) ext.points.push_back(draw_outside(split, B));
    for (int i = 0; i < inside; ++i) a_new.push_back(draw_inside(perturb, B));

    std::vector<cplx> joint = a;
    std::vector<cplx> joint_new = a_new;
    joint.insert(joint.end(), ext.points.begin(), ext.points.end());
    joint_new.insert(joint_new.end(), ext.points.begin(), ext.points.end());
    const double lhs = ope_log_density(spec, joint) - ope_log_density(spec, joint_new);
    const double rhs = conditional_log_density(a, ext, B, w) - conditional_log_density(a_new, ext, B, w);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

HistogramResult chi_square_test(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_test: size mismatch");
  }
  std::vector<double> obs;
  std::vector<double> exp;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= 5.0) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  HistogramResult out;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    out.chi_square += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  out.dof = static_cast<int>(obs.size()) - 1;
  if (out.dof < 1) {
    out.p_value = 1.0;
    return out;
  }
  const boost::math::chi_squared_distribution<double> dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
  return out;
}

HistogramResult conditional_histogram_test(int n, const Window& B, const RadialWeight& w,
                                           std::size_t samples, int bins, std::uint64_t seed,
                                           InteriorModel model, int threads) {
  if (n < 1 || bins < 2) throw std::invalid_argument("conditional_histogram_test: need n >= 1, bins >= 2");
  if (!B.contains(0.0)) throw OriginNotInWindow("window does not contain 0");

  const EnsembleSpec spec{w, n, {}};
  const double r_max = std::sqrt(2.0 * n / w.m()) + 4.0;
  std::vector<double> breaks;
  if (std::abs(B.center) == 0.0 && B.radius < r_max) breaks.push_back(B.radius);
  const Grid grid = build_polar_grid(w, r_max, 64, 64, breaks);
  const GridSampler sampler(spec, grid);

  // Nodes of B and their radial bins.
  std::vector<std::size_t> inside;
  std::vector<int> inside_bin;
  const double reach = std::abs(B.center) + B.radius;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!B.contains(grid.nodes[j])) continue;
    inside.push_back(j);
    inside_bin.push_back(std::min(bins - 1, static_cast<int>(bins * std::abs(grid.nodes[j]) / reach)));
  }

  // Exterior class key: sorted (radial cell, angular cell) pairs, rotated to
  // the lexicographically smallest angular offset.
  const double ext_span = std::max(r_max - reach, 1e-9);
  auto class_key = [&](const std::vector<cplx>& ext) {
    std::vector<std::array<int, 2>> cells;
    for (cplx x : ext) {
      const int rc = std::clamp(static_cast<int>(8.0 * (std::abs(x) - reach) / ext_span), 0, 7);
      double theta = std::arg(x);
      if (theta < 0) theta += 2.0 * std::numbers::pi;
      const int ac = std::min(7, static_cast<int>(8.0 * theta / (2.0 * std::numbers::pi)));
      cells.push_back({rc, ac});
    }
    std::vector<int> best;
    for (int shift = 0; shift < 8; ++shift) {
      std::vector<std::array<int, 2>> rotated = cells;
      for (auto& c : rotated) c[1] = (c[1] + shift) % 8;
      std::sort(rotated.begin(), rotated.end());
      std::vector<int> flat;
      for (auto& c : rotated) {
        flat.push_back(c[0]);
        flat.push_back(c[1]);
      }
      if (best.empty() || flat < best) best = flat;
    }
    return best;
  };

  struct Hit {
    std::size_t node = 0;
    std::vector<cplx> exterior;
  };
  std::vector<char> is_hit(samples, 0);
  std::vector<Hit> hits(samples);
  parallel_for(
      samples,
      [&](std::size_t s) {
        const std::vector<std::size_t> idx = sampler.sample_indices(seed, s);
        int count = 0;
        Hit h;
        for (std::size_t j : idx) {
          if (B.contains(grid.nodes[j])) {
            ++count;
            h.node = j;
          } else {
            h.exterior.push_back(grid.nodes[j]);
          }
        }
        if (count == 1) {
          is_hit[s] = 1;
          hits[s] = std::move(h);
        }
      },
      threads);

  HistogramResult out;
  std::map<std::vector<int>, std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < samples; ++s) {
    if (!is_hit[s]) continue;
    ++out.n_one_interior;
    classes[class_key(hits[s].exterior)].push_back(s);
  }
  const std::vector<std::size_t>* chosen = nullptr;
  for (const auto& [key, members] : classes) {
    if (!chosen || members.size() > chosen->size()) chosen = &members;
  }
  out.n_conditioned = chosen ? chosen->size() : 0;
  if (out.n_conditioned < 500) {
    throw InsufficientSamples("conditioning class has " + std::to_string(out.n_conditioned) +
                              " draws, need 500");
  }

  std::vector<double> observed(bins, 0.0);
  std::vector<double> expected(bins, 0.0);
  std::vector<double> mass(inside.size());
  for (std::size_t s : *chosen) {
    const Hit& h = hits[s];
    const Configuration ext{h.exterior};
    double total = 0.0;
    for (std::size_t i = 0; i < inside.size(); ++i) {
      const cplx z = grid.nodes[inside[i]];
      double value = grid.weights[inside[i]];
      if (model == InteriorModel::exact) value *= exterior_weight(ext, z, B);
      mass[i] = value;
      total += value;
    }
    for (std::size_t i = 0; i < inside.size(); ++i) expected[inside_bin[i]] += mass[i] / total;
    observed[std::min(bins - 1, static_cast<int>(bins * std::abs(grid.nodes[h.node]) / reach))] += 1.0;
  }
  const HistogramResult stats = chi_square_test(observed, expected);
  out.p_value = stats.p_value;
  out.chi_square = stats.chi_square;
  out.dof = stats.dof;
  return out;
}

}  // namespace gcond
