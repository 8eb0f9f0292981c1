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

#include "gcond/suites.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "gcond/conditional.hpp"
#include "gcond/ensembles.hpp"
#include "gcond/errors.hpp"
#include "gcond/functionals.hpp"
#include "gcond/kernels.hpp"
#include "gcond/quadrature.hpp"
#include "gcond/rng.hpp"

namespace gcond {

namespace {

using json = nlohmann::ordered_json;

json points_json(const std::vector<cplx>& points) {
  json out = json::array();
  for (cplx z : points) out.push_back({z.real(), z.imag()});
  return out;
}

TuplePair pair_or(const ExperimentConfig& cfg, const char* fallback) {
  if (cfg.pair) return cfg.make_pair();
  ExperimentConfig tmp;
  apply_setting(tmp, "pair", fallback);
  return tmp.make_pair();
}

double relative(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

ResultRecord moments_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  const int n = cfg.n.value_or(31);
  resolved["n"] = n;
  const std::vector<double> coeffs = moment_coefficients(w, n);
  const bool closed = cfg.weight_table.empty() && cfg.weight == "ginibre";
  double worst = 0.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  for (int k = 0; k < n; ++k) {
    double reference = 0.0;
    if (closed) {
      reference = std::exp((k + 1) * std::log(2.0) - std::lgamma(k + 1.0)) / std::numbers::pi;
    } else {
      const double moment = 2.0 * std::numbers::pi *
                            integrator.integrate(
                                [&](double r) {
                                  const double v = std::exp((2.0 * k + 1.0) * std::log(r) - 2.0 * w.phi(r));
                                  return std::isfinite(v) ? v : 0.0;
                                },
                                0.0, std::numeric_limits<double>::infinity());
      reference = 1.0 / moment;
    }
    worst = std::max(worst, relative(coeffs[k], reference));
  }
  const LaplacianReport lap = check_laplacian_bounds(w);
  ResultRecord rec;
  rec.metrics["reference"] = closed ? "closed_form" : "exp_sinh_quadrature";
  rec.metrics["max_rel_err"] = worst;
  rec.metrics["laplacian_min"] = lap.min_laplacian;
  rec.metrics["laplacian_max"] = lap.max_laplacian;
  rec.metrics["laplacian_within_bounds"] = lap.within_bounds;
  rec.pass = worst < 1e-8 && lap.within_bounds;
  return rec;
}

ResultRecord kernel_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  const int n = cfg.n.value_or(8);
  std::vector<cplx> palm = cfg.palm;
  if (cfg.raw.find("palm_points") == cfg.raw.end()) palm = {cplx(0.3, 0.1), cplx(0.0, -0.4)};
  if (static_cast<int>(palm.size()) > n) throw ConfigInvalid("palm_points: more points than n");
  const double r_max = cfg.grid_r_max.value_or(std::sqrt(2.0 * n / w.m()) + 5.0);
  resolved["n"] = n;
  resolved["palm_points"] = points_json(palm);
  resolved["grid.r_max"] = r_max;

  ResultRecord rec;
  const KernelModel base = KernelModel::build(w, n);
  const PalmedKernel palmed = palm_reduce(base, palm);
  const Grid grid = build_polar_grid(w, r_max, cfg.grid_n_radial, cfg.grid_n_angular);
  const DiscreteOperator t = nystrom(palmed, grid, Multiplier::constant(1.0));
  const double trace_err = std::abs(trace(t).real() - (n - static_cast<double>(palm.size())));

  CounterRng rng(cfg.seed, "trials");
  double herm = 0.0;
  double vanish = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cplx z(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const cplx v(rng.uniform(-2, 2), rng.uniform(-2, 2));
    herm = std::max(herm, std::abs(palmed.eval(z, v) - std::conj(palmed.eval(v, z))) /
                              std::abs(base.eval(z, v)));
    for (cplx q : palm) {
      vanish = std::max(vanish, std::abs(palmed.eval(q, v)) /
                                    std::sqrt(base.diagonal(q) * base.diagonal(v)));
    }
  }

  // Diagonal flatness of the order-60 surrogate; meaningful for phi = r^2.
  const KernelModel wide = KernelModel::build(w, 60);
  const Grid disk = build_polar_grid(w, 2.0, 32, 32);
  const double sup = christ_sup(wide, disk);
  double flat = 0.0;
  for (cplx z : disk.nodes) {
    flat = std::max(flat, std::abs(wide.diagonal(z) * weight_density(w, z) * std::numbers::pi / 2.0 - 1.0));
  }
  const bool ginibre = cfg.weight_table.empty() && cfg.weight == "ginibre";

  rec.metrics["palm_trace"] = trace(t).real();
  rec.metrics["palm_trace_err"] = trace_err;
  rec.metrics["hermitian_max_rel_err"] = herm;
  rec.metrics["palm_vanishing_max"] = vanish;
  rec.metrics["christ_sup"] = sup;
  rec.metrics["diagonal_flatness_max_rel_dev"] = ginibre ? json(flat) : json(nullptr);
  rec.pass = trace_err < 1e-6 && herm < 1e-10 && vanish < 1e-12 && (!ginibre || flat < 1e-2);
  return rec;
}

ResultRecord theorem1_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  const int n = cfg.n.value_or(6);
  const TuplePair pair = pair_or(cfg, "0.7,0|0,0");
  const double R = cfg.R.value_or(6.0);
  const std::size_t samples = cfg.samples.value_or(20000);
  if (n < static_cast<int>(pair.ell())) throw ConfigInvalid("n: must be at least the tuple length");
  resolved["n"] = n;
  resolved["R"] = R;
  resolved["samples"] = samples;
  resolved["pair"] = {{"p", points_json(pair.p)}, {"q", points_json(pair.q)}};

  const KernelModel kernel = KernelModel::build(w, n);
  const double closed = expected_gamma_closed(kernel, pair);
  const EnsembleSpec spec_q{w, n, pair.q};
  const EnsembleSpec spec_p{w, n, pair.p};
  const Grid zgrid = ensemble_grid(spec_q);
  const double z_ratio =
      std::exp(log_partition_function(spec_p, zgrid) - log_partition_function(spec_q, zgrid));
  const Grid fgrid = fredholm_grid(w, n, {R});
  const double fred = expected_gamma_fredholm(kernel, pair, fgrid, R);
  const GridSampler sampler(spec_q, sampling_grid(spec_q));
  const McEstimate mc = mc_expectation_gamma(sampler, pair, R, samples, cfg.seed, cfg.threads);

  ResultRecord rec;
  rec.metrics["closed_form"] = closed;
  rec.metrics["mc_mean"] = mc.mean;
  rec.metrics["mc_stderr"] = mc.std_error;
  rec.metrics["z_ratio"] = z_ratio;
  rec.metrics["fredholm_value"] = fred;
  rec.metrics["fredholm_rel_err"] = relative(fred, closed);
  rec.metrics["z_ratio_rel_err"] = relative(z_ratio, closed);
  rec.metrics["mc_z_score"] = (mc.mean - closed) / mc.std_error;
  rec.pass = std::abs(mc.mean - closed) <= 3.0 * mc.std_error && relative(fred, closed) < 1e-3 &&
             relative(z_ratio, closed) < 1e-6;
  return rec;
}

struct RegSetup {
  int n;
  double r;
  double R;
  TuplePair pair;
};

RegSetup regularization_setup(const ExperimentConfig& cfg, json& resolved) {
  const int n = cfg.n.value_or(6);
  const TuplePair pair = pair_or(cfg, "0.3,0.2|-0.1,-0.2");
  const double rpq = r_pq(pair);
  const double R = cfg.R.value_or(4.0);
  const double r = cfg.r.value_or(rpq + 0.5);
  const double grid_r_max = cfg.grid_r_max.value_or(R + 1.0);
  if (r < rpq) throw ConfigInvalid("r: must be at least r_pq = " + std::to_string(rpq));
  if (!(r < R)) throw ConfigInvalid("R: must exceed r = " + std::to_string(r));
  if (R > grid_r_max) throw ConfigInvalid("grid.r_max: must be at least R");
  if (n < static_cast<int>(pair.ell())) throw ConfigInvalid("n: must be at least the tuple length");
  resolved["n"] = n;
  resolved["r"] = r;
  resolved["R"] = R;
  resolved["r_pq"] = rpq;
  resolved["pair"] = {{"p", points_json(pair.p)}, {"q", points_json(pair.q)}};
  return {n, r, R, pair};
}

ResultRecord regularization_suite(const ExperimentConfig& cfg, json& resolved, bool factorization) {
  const RadialWeight w = cfg.make_weight();
  const RegSetup s = regularization_setup(cfg, resolved);
  const KernelModel kernel = KernelModel::build(w, s.n);
  const Grid grid = regularization_grid(w, s.n, s.r, s.R);
  const RegularizationTerms t = regularization_terms(s.n, s.R, s.r, kernel, s.pair, grid);
  const double trace_check = std::abs(t.sum() - t.trace_value);
  ResultRecord rec;
  rec.metrics["e1"] = t.e1;
  rec.metrics["e2"] = t.e2;
  rec.metrics["e3"] = t.e3;
  rec.metrics["e4"] = t.e4;
  rec.metrics["sum"] = t.sum();
  rec.metrics["trace_check"] = trace_check;
  if (factorization) {
    const double residual = std::abs(t.log_det - (t.log_det3 + t.sum()));
    rec.metrics["log_det"] = t.log_det;
    rec.metrics["log_det3"] = t.log_det3;
    rec.metrics["factorization_residual"] = residual;
    rec.pass = residual < 1e-8 && trace_check < 1e-8;
  } else {
    rec.pass = trace_check < 1e-8 && t.e4 >= 0.0;
  }
  return rec;
}

ResultRecord claims_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  std::vector<int> orders{2, 4, 8};
  std::vector<double> radii{3.0, 5.0, 8.0};
  if (cfg.n) orders = {*cfg.n};
  if (cfg.r) radii = {*cfg.r};
  resolved["orders"] = orders;
  resolved["radii"] = radii;
  ResultRecord rec;
  rec.pass = true;
  json rows = json::array();
  double min_a = std::numeric_limits<double>::infinity();
  double min_b = std::numeric_limits<double>::infinity();
  for (int n : orders) {
    const std::vector<double> coeffs = moment_coefficients(w, n);
    for (double r : radii) {
      const ClaimIntegrals c = i1_i2_radial(coeffs, w, n, r);
      const double slack_a = c.i1 * (1.0 + 1e-9) - c.i1n;
      const double slack_b = c.i2_partial + 1.0 / (r * r) + 1e-9 - c.i2n;
      min_a = std::min(min_a, slack_a);
      min_b = std::min(min_b, slack_b);
      rec.pass = rec.pass && slack_a >= 0.0 && slack_b >= 0.0;
      rows.push_back({{"n", n}, {"r", r}, {"i1n", c.i1n}, {"i1", c.i1}, {"i2n", c.i2n},
                      {"i2", c.i2}, {"i2_partial", c.i2_partial}, {"truncation", c.truncation},
                      {"claim_a_slack", slack_a}, {"claim_b_slack", slack_b}});
    }
  }
  rec.metrics["min_claim_a_slack"] = min_a;
  rec.metrics["min_claim_b_slack"] = min_b;
  rec.metrics["lattice"] = rows;
  return rec;
}

ResultRecord conditional_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  const int n = cfg.n.value_or(3);
  const Window window = cfg.window.value_or(Window(0.0, 0.8));
  const std::size_t samples = cfg.samples.value_or(200000);
  const int bins = cfg.bins.value_or(10);
  if (n > 5) throw ConfigInvalid("n: the histogram test supports n <= 5");
  resolved["n"] = n;
  resolved["window"] = {window.center.real(), window.center.imag(), window.radius};
  resolved["samples"] = samples;
  resolved["bins"] = bins;

  const double err = conditional_factorization_check(n, window, w, cfg.seed, 100);
  const HistogramResult h =
      conditional_histogram_test(n, window, w, samples, bins, cfg.seed, InteriorModel::exact, cfg.threads);
  const HistogramResult null = conditional_histogram_test(n, window, w, samples, bins, cfg.seed,
                                                          InteriorModel::ignore_exterior, cfg.threads);
  ResultRecord rec;
  rec.metrics["factorization_max_err"] = err;
  rec.metrics["histogram_p_value"] = h.p_value;
  rec.metrics["n_conditioned"] = h.n_conditioned;
  rec.metrics["n_one_interior"] = h.n_one_interior;
  rec.metrics["negative_control_p_value"] = null.p_value;
  rec.pass = err < 1e-9 && h.p_value > 0.005 && null.p_value < 0.005;
  return rec;
}

ResultRecord sample_suite(const ExperimentConfig& cfg, json& resolved) {
  const RadialWeight w = cfg.make_weight();
  const int n = cfg.n.value_or(4);
  const std::size_t count = cfg.samples.value_or(10);
  const std::string path = cfg.out.empty() ? "samples.csv" : cfg.out;
  const EnsembleSpec spec{w, n, cfg.palm};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid("palm_points: " + std::string(e.what()));
  }
  resolved["n"] = n;
  resolved["samples"] = count;
  resolved["out"] = path;
  const GridSampler sampler(spec, sampling_grid(spec));
  std::vector<Configuration> draws;
  for (std::size_t i = 0; i < count; ++i) draws.push_back(sampler.sample(cfg.seed, i));
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigInvalid("out: cannot write " + path);
    write_samples_csv(out, draws);
  }
  std::filesystem::rename(tmp, path);
  ResultRecord rec;
  rec.metrics["configurations"] = count;
  rec.metrics["points_per_configuration"] = spec.particles();
  rec.metrics["grid_trace"] = sampler.continuum_trace();
  rec.pass = true;
  return rec;
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "moments") return Suite::moments;
  if (name == "kernel" || name == "kernel-check") return Suite::kernel;
  if (name == "theorem1" || name == "verify-theorem1") return Suite::theorem1;
  if (name == "factorization" || name == "verify-factorization") return Suite::factorization;
  if (name == "claims" || name == "verify-claims") return Suite::claims;
  if (name == "conditional" || name == "verify-conditional") return Suite::conditional;
  if (name == "regularization" || name == "verify-regularization") return Suite::regularization;
  if (name == "sample") return Suite::sample;
  throw ConfigInvalid("unknown suite '" + name + "'");
}

std::string suite_name(Suite suite) {
  switch (suite) {
    case Suite::moments: return "moments";
    case Suite::kernel: return "kernel";
    case Suite::theorem1: return "theorem1";
    case Suite::factorization: return "factorization";
    case Suite::claims: return "claims";
    case Suite::conditional: return "conditional";
    case Suite::regularization: return "regularization";
    case Suite::sample: return "sample";
  }
  return "unknown";
}

nlohmann::ordered_json ResultRecord::to_json() const {
  return {{"suite", suite}, {"config_echo", config_echo}, {"metrics", metrics}, {"pass", pass}};
}

ResultRecord run_suite(const ExperimentConfig& cfg, Suite suite) {
  json resolved = json::object();
  resolved["weight"] = cfg.weight_table.empty() ? cfg.weight : "table:" + cfg.weight_table;
  resolved["seed"] = cfg.seed;
  ResultRecord rec;
  switch (suite) {
    case Suite::moments: rec = moments_suite(cfg, resolved); break;
    case Suite::kernel: rec = kernel_suite(cfg, resolved); break;
    case Suite::theorem1: rec = theorem1_suite(cfg, resolved); break;
    case Suite::factorization: rec = regularization_suite(cfg, resolved, true); break;
    case Suite::claims: rec = claims_suite(cfg, resolved); break;
    case Suite::conditional: rec = conditional_suite(cfg, resolved); break;
    case Suite::regularization: rec = regularization_suite(cfg, resolved, false); break;
    case Suite::sample: rec = sample_suite(cfg, resolved); break;
  }
  rec.suite = suite_name(suite);
  json raw = json::object();
  for (const auto& [k, v] : cfg.raw) raw[k] = v;
  rec.config_echo = {{"schema_version", cfg.schema_version}, {"settings", raw}, {"resolved", resolved}};
  return rec;
}

void write_record(const ResultRecord& record, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigInvalid("out: cannot write " + path);
    out << record.to_json().dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gcond
