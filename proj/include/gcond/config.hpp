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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcond/conditional.hpp"
#include "gcond/functionals.hpp"
#include "gcond/weights.hpp"

namespace gcond {

/// Parsed experiment settings. Every field comes from a flat "key = value"
/// text; the raw pairs are kept for echoing. Keys:
///   schema_version  1
///   weight          ginibre | perturbed
///   weight.table    path of a two-column (radius, phi) file; overrides weight
///   n               kernel order
///   palm_points     "re,im;re,im"
///   pair            "p-tuple|q-tuple", each tuple as for palm_points
///   grid.n_radial, grid.n_angular, grid.r_max
///   r, R            inner and outer radius
///   samples, seed, threads, bins
///   window          "cx,cy,radius"
///   out             output path
struct ExperimentConfig {
  std::map<std::string, std::string> raw;

  int schema_version = 1;
  std::string weight = "ginibre";
  std::string weight_table;
  std::optional<int> n;
  std::vector<cplx> palm;
  std::optional<std::pair<std::vector<cplx>, std::vector<cplx>>> pair;
  int grid_n_radial = 96;
  int grid_n_angular = 96;
  std::optional<double> grid_r_max;
  std::optional<double> r;
  std::optional<double> R;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<int> bins;
  std::optional<Window> window;
  std::string out;

  RadialWeight make_weight() const;
  /// Throws ConfigInvalid if the pair is unset or malformed.
  TuplePair make_pair() const;
};

/// Sets one key; throws ConfigInvalid naming the key on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "re,im;re,im;..."; an empty string gives an empty tuple.
std::vector<cplx> parse_points(const std::string& text);
std::string format_points(const std::vector<cplx>& points);

}  // namespace gcond
