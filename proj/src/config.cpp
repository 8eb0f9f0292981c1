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

#include "gcond/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gcond/errors.hpp"

namespace gcond {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(first, last - first + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigInvalid(key + ": expected a real number, got '" + value + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigInvalid(key + ": expected an integer, got '" + value + "'");
  }
  return out;
}

int positive_int(const std::string& key, const std::string& value, int minimum = 1) {
  const long long v = to_int(key, value);
  if (v < minimum || v > 1000000000) {
    throw ConfigInvalid(key + ": must be >= " + std::to_string(minimum));
  }
  return static_cast<int>(v);
}

double positive_double(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (!(v > 0.0)) throw ConfigInvalid(key + ": must be positive");
  return v;
}

}  // namespace

std::vector<cplx> parse_points(const std::string& text) {
  std::vector<cplx> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ',');
    if (parts.size() != 2) throw ConfigInvalid("point '" + item + "': expected re,im");
    out.emplace_back(to_double("point", parts[0]), to_double("point", parts[1]));
  }
  return out;
}

std::string format_points(const std::vector<cplx>& points) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ';';
    out << points[i].real() << ',' << points[i].imag();
  }
  return out.str();
}

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "schema_version") {
    cfg.schema_version = positive_int(key, value);
    if (cfg.schema_version != 1) throw ConfigInvalid("schema_version: only version 1 is supported");
  } else if (key == "weight") {
    if (value != "ginibre" && value != "perturbed") {
      throw ConfigInvalid("weight: expected ginibre or perturbed, got '" + value + "'");
    }
    cfg.weight = value;
  } else if (key == "weight.table") {
    if (value.empty()) throw ConfigInvalid("weight.table: empty path");
    cfg.weight_table = value;
  } else if (key == "n") {
    cfg.n = positive_int(key, value);
  } else if (key == "palm_points") {
    try {
      cfg.palm = parse_points(value);
    } catch (const ConfigInvalid& e) {
      throw ConfigInvalid("palm_points: " + std::string(e.what()));
    }
  } else if (key == "pair") {
    const auto bar = value.find('|');
    if (bar == std::string::npos) throw ConfigInvalid("pair: expected 'p-tuple|q-tuple'");
    try {
      cfg.pair = std::make_pair(parse_points(value.substr(0, bar)), parse_points(value.substr(bar + 1)));
    } catch (const ConfigInvalid& e) {
      throw ConfigInvalid("pair: " + std::string(e.what()));
    }
    if (cfg.pair->first.empty() || cfg.pair->first.size() != cfg.pair->second.size()) {
      throw ConfigInvalid("pair: tuples must be nonempty and of equal length");
    }
  } else if (key == "grid.n_radial") {
    cfg.grid_n_radial = positive_int(key, value, 8);
  } else if (key == "grid.n_angular") {
    cfg.grid_n_angular = positive_int(key, value, 8);
  } else if (key == "grid.r_max") {
    cfg.grid_r_max = positive_double(key, value);
  } else if (key == "r") {
    cfg.r = positive_double(key, value);
  } else if (key == "R") {
    cfg.R = positive_double(key, value);
  } else if (key == "samples") {
    cfg.samples = static_cast<std::size_t>(positive_int(key, value));
  } else if (key == "seed") {
    const long long s = to_int(key, value);
    if (s < 0) throw ConfigInvalid("seed: must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "threads") {
    cfg.threads = positive_int(key, value);
  } else if (key == "bins") {
    cfg.bins = positive_int(key, value, 2);
  } else if (key == "window") {
    const auto parts = split(value, ',');
    if (parts.size() != 3) throw ConfigInvalid("window: expected cx,cy,radius");
    cfg.window = Window(cplx(to_double(key, parts[0]), to_double(key, parts[1])),
                        positive_double(key, parts[2]));
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw ConfigInvalid("unknown key '" + key + "'");
  }
  cfg.raw[key] = value;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigInvalid("line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RadialWeight ExperimentConfig::make_weight() const {
  if (!weight_table.empty()) {
    try {
      return RadialWeight::from_table_file(weight_table);
    } catch (const std::exception& e) {
      throw ConfigInvalid("weight.table: " + std::string(e.what()));
    }
  }
  return weight == "perturbed" ? RadialWeight::perturbed() : RadialWeight::ginibre();
}

TuplePair ExperimentConfig::make_pair() const {
  if (!pair) throw ConfigInvalid("pair: not set");
  try {
    return TuplePair(pair->first, pair->second);
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid("pair: " + std::string(e.what()));
  }
}

}  // namespace gcond
