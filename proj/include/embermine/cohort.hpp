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

#ifndef EMBERMINE_COHORT_HPP
#define EMBERMINE_COHORT_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "embermine/config.hpp"
#include "embermine/mine.hpp"

namespace embermine {

struct CohortOptions {
  std::string metric = "occurrence";  // "occurrence" | "total"
  double cluster_boundary = 0.70;
  std::set<std::string> critical_rules;
};

struct CohortReport {
  nlohmann::json report;       // report.json payload
  std::string markdown;        // report.md
  std::string fig_fix_latency;   // repo,rule_id,critical,same_fixer,commits,days
  std::string fig_intro_removed; // repo,rule_id,same_fixer,norm_intro,norm_fix
  std::string fig_day_hist;      // repo,rule_id,norm_intro_day,fixed,norm_fix_day
};

// Aggregates mined repositories into the cohort report: per-rule counts by
// scope, contribution clustering with a cluster-level location test,
// configured correlation pairs, fix-authorship shares, and fix-latency
// summaries. Statistics whose inputs are absent are emitted as skipped rows
// with a reason, never fabricated. `mined` parallels `manifest.repos`.
CohortReport cohort_summary(const CohortManifest& manifest,
                            const std::vector<MineResult>& mined,
                            const std::optional<std::vector<LabRow>>& labs,
                            const std::optional<std::map<std::string, double>>& grades,
                            const CohortOptions& opts);

// Writes report.json, report.md, and the three figure CSVs into dir.
// Byte-identical across runs over identical inputs.
void write_cohort_report(const CohortReport& report, const std::string& dir);

}  // namespace embermine

#endif  // EMBERMINE_COHORT_HPP
