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

#include <string>

#include <json.hpp>

#include "gcond/config.hpp"

namespace gcond {

enum class Suite { moments, kernel, theorem1, factorization, claims, conditional, regularization, sample };

/// Accepts the suite names and the CLI subcommand spellings
/// (kernel-check, verify-theorem1, ...). Throws ConfigInvalid otherwise.
Suite parse_suite(const std::string& name);
std::string suite_name(Suite suite);

struct ResultRecord {
  std::string suite;
  nlohmann::ordered_json config_echo;
  nlohmann::ordered_json metrics;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
};

/// Runs one suite. Configuration problems raise ConfigInvalid before any
/// numerical work starts. The sample suite writes its CSV to cfg.out.
ResultRecord run_suite(const ExperimentConfig& cfg, Suite suite);

/// Writes the record to path through a temporary file and a rename.
void write_record(const ResultRecord& record, const std::string& path);

}  // namespace gcond
