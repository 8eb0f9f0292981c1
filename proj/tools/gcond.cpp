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

// Command-line front end: one subcommand per verification suite.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcond/config.hpp"
#include "gcond/errors.hpp"
#include "gcond/suites.hpp"

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

// Flag name -> config key.
const std::vector<std::pair<std::string, std::string>> kFlagKeys = {
    {"n", "n"},           {"pair", "pair"},       {"palm", "palm_points"}, {"R", "R"},
    {"r", "r"},           {"samples", "samples"}, {"count", "samples"},    {"seed", "seed"},
    {"out", "out"},       {"window", "window"},   {"weight", "weight"},    {"weight-table", "weight.table"},
    {"threads", "threads"}, {"bins", "bins"},     {"n-radial", "grid.n_radial"},
    {"n-angular", "grid.n_angular"},              {"r-max", "grid.r_max"},
};

void add_common(CLI::App* app, Options& opts) {
  app->add_option("--config", opts.config_path, "key = value configuration file");
  app->add_option("--set", opts.sets, "extra key=value setting (repeatable)");
  for (const auto& [flag, key] : kFlagKeys) {
    app->add_option("--" + flag, opts.flags[flag], "sets " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Ginibre conditional-measure verification"};
  app.require_subcommand(1);
  Options opts;
  const std::vector<std::string> names = {"moments",           "kernel-check",         "verify-theorem1",
                                          "verify-factorization", "verify-claims",     "verify-conditional",
                                          "verify-regularization", "sample"};
  for (const auto& name : names) add_common(app.add_subcommand(name, "run the " + name + " suite"), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  gcond::ResultRecord record;
  try {
    gcond::ExperimentConfig cfg =
        opts.config_path.empty() ? gcond::ExperimentConfig{} : gcond::load_config(opts.config_path);
    for (const auto& [flag, key] : kFlagKeys) {
      const auto it = opts.flags.find(flag);
      if (it != opts.flags.end() && !it->second.empty()) gcond::apply_setting(cfg, key, it->second);
    }
    for (const auto& s : opts.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw gcond::ConfigInvalid("--set expects key=value, got '" + s + "'");
      gcond::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    const gcond::Suite suite = gcond::parse_suite(sub);
    record = gcond::run_suite(cfg, suite);
    if (!cfg.out.empty() && suite != gcond::Suite::sample) gcond::write_record(record, cfg.out);
  } catch (const gcond::ConfigInvalid& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  std::cout << record.to_json().dump(2) << '\n';
  return record.pass ? 0 : 1;
}
