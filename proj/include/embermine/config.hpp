// Copyright 2026 The Embermine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBERMINE_CONFIG_HPP
#define EMBERMINE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embermine/authors.hpp"
#include "embermine/external.hpp"
#include "embermine/rules.hpp"

namespace embermine {

struct RunConfig {
  RuleConfig rules;
  ExternalConfig external;
  std::string authors_map_path;
  AuthorMap authors;
  std::vector<std::string> template_authors;
  std::optional<std::int64_t> project_start;
  std::optional<std::int64_t> project_deadline;
  std::string out_dir = "out";
  double cluster_boundary = 0.70;

  TemplatePolicy template_policy() const {
    TemplatePolicy tp;
    tp.start_epoch = project_start.value_or(-1);
    tp.author_patterns = template_authors;
    return tp;
  }
};

// Strict JSON load: unknown keys are rejected, referenced files must exist.
// Throws ConfigError with the offending key or path.
RunConfig load_run_config(const std::string& path);

struct RepoSpec {
  std::string path;
  std::string group_id;
  std::vector<std::string> members;
  std::string kind = "project";  // "project" | "lab"
  std::string project_tag;       // distinguishes multiple projects per cohort
};

struct CohortManifest {
  std::vector<RepoSpec> repos;
  std::string labs_csv;    // optional
  std::string grades_csv;  // optional
};

// Relative paths inside the manifest resolve against its directory.
CohortManifest load_manifest(const std::string& path);

struct LabRow {
  std::string author_id;
  std::string assessment_id;
  long occurrence_count = 0;
};

std::vector<LabRow> load_labs_csv(const std::string& path);
std::map<std::string, double> load_grades_csv(const std::string& path);

// "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[Z]" to UTC epoch seconds.
std::int64_t parse_iso_date(const std::string& text);

// Stable digest of the rule configuration, part of the analysis cache key.
std::string rule_config_digest(const RuleConfig& rules);

}  // namespace embermine

#endif  // EMBERMINE_CONFIG_HPP
