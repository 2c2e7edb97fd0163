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

#ifndef EMBERMINE_SWEEP_HPP
#define EMBERMINE_SWEEP_HPP

#include <string>
#include <vector>

#include "embermine/external.hpp"
#include "embermine/gitrepo.hpp"
#include "embermine/lifecycle.hpp"
#include "embermine/rules.hpp"

namespace embermine {

struct SweepOptions {
  RuleConfig rules;
  ExternalConfig external;
  bool use_external = true;
  // When set, analyzer results are read from <dir>/<commit-hash>.xml instead
  // of running the analyzer; a missing file degrades that commit to
  // embedded-only analysis and records a ReportMissing failure.
  std::string external_reports_dir;
  std::string cache_dir;  // empty disables the per-commit result cache
  int jobs = 0;           // parallel worker cap, 0 = runtime default
};

struct SweepResult {
  std::vector<CommitAnalysis> per_commit;   // one entry per commit, in order
  std::vector<FailureRecord> repo_failures; // commit_hash empty
  std::string analyzer_tool;
  std::string analyzer_version;
  bool external_used = false;
};

// Analyzes every commit: snapshot, tokenize/parse, embedded rules, external
// analyzer (unless disabled or unavailable), fingerprinting against
// rename-canonical paths. Analyzer trouble degrades the affected commit to
// embedded-only analysis and is recorded, never thrown.
SweepResult sweep_commits_serial(const GitRepo& repo,
                                 const std::vector<CommitRecord>& commits,
                                 const SweepOptions& opts);

// Same contract and bit-identical results; commits are analyzed by a
// parallel worker pool when OpenMP is available.
SweepResult sweep_commits_parallel(const GitRepo& repo,
                                   const std::vector<CommitRecord>& commits,
                                   const SweepOptions& opts);

// Creates a unique directory under the system temp root. Used for commit
// snapshots; callers must remove it.
std::string make_temp_dir(const std::string& tag);

}  // namespace embermine

#endif  // EMBERMINE_SWEEP_HPP
