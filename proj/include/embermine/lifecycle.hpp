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

#ifndef EMBERMINE_LIFECYCLE_HPP
#define EMBERMINE_LIFECYCLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embermine/fingerprint.hpp"
#include "embermine/gitrepo.hpp"

namespace embermine {

struct FailureRecord {
  std::string commit_hash;  // empty for repo-level failures
  std::string kind;         // error kind tag, e.g. "AnalyzerTimeout"
  std::string detail;
};

struct IssueInstance {
  Diagnostic diag;
  Fingerprint fp;
};

// Everything the sweep learned about one commit.
struct CommitAnalysis {
  int index = -1;
  std::string commit_hash;
  std::int64_t timestamp = 0;
  std::vector<IssueInstance> instances;  // sorted by fingerprint key
  std::vector<FailureRecord> failures;
};

struct IssueLifecycle {
  Fingerprint fp;
  Diagnostic sample;  // the diagnostic as seen at introduction

  int introduced_index = -1;
  std::string introduced_hash;
  std::string introduced_by;      // filled by attribute_lifecycles
  std::string introduced_origin;  // blame origin commit

  bool fixed = false;
  int fixed_index = -1;
  std::string fixed_hash;
  std::string fixed_by;

  bool same_fixer = false;  // meaningful only when fixed
  bool direct_fix = false;  // fix commit touched the issue's file

  long alive_commit_count = 0;
  double alive_days = 0.0;
  std::vector<int> present_in;

  double norm_intro_commit = 0.0;
  double norm_fix_commit = -1.0;  // -1 when unfixed
  double norm_intro_day = 0.0;
  double norm_fix_day = -1.0;

  std::string attribution_status;  // "ok" | "unknown"
};

struct IssueMetrics {
  std::map<std::string, long> occurrence;  // rule -> distinct fingerprints
  std::map<std::string, long> total;       // rule -> summed instances
};

// Folds per-commit presence into lifecycles. An issue opens at its first
// commit and closes at the first commit where it stays absent beyond the
// gap tolerance; a reappearance after closure starts a new lifecycle.
std::vector<IssueLifecycle> build_timelines(
    const std::vector<CommitAnalysis>& per_commit, int gap = 0);

// Blames introductions, assigns fixers, computes same_fixer/direct_fix.
// Blame failures yield introduced_by = UNKNOWN, never an exception.
void attribute_lifecycles(std::vector<IssueLifecycle>& lifecycles,
                          const GitRepo& repo,
                          const std::vector<CommitRecord>& commits);

// Fills norm_* fields. Configured dates must satisfy deadline > start
// (ConfigError); derived dates with a zero span normalize days to 0.
void normalize_lifecycles(std::vector<IssueLifecycle>& lifecycles,
                          const std::vector<CommitRecord>& commits,
                          std::optional<std::int64_t> start_epoch,
                          std::optional<std::int64_t> deadline_epoch);

// Occurrence and total per rule. Verifies that total recomputed from
// per-commit instances equals total recomputed from lifecycle presence
// sets, throwing ShapeError when the two disagree.
IssueMetrics compute_metrics(const std::vector<IssueLifecycle>& lifecycles,
                             const std::vector<CommitAnalysis>& per_commit);

}  // namespace embermine

#endif  // EMBERMINE_LIFECYCLE_HPP
