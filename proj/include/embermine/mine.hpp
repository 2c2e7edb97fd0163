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

#ifndef EMBERMINE_MINE_HPP
#define EMBERMINE_MINE_HPP

#include <map>
#include <string>
#include <vector>

#include "embermine/config.hpp"
#include "embermine/lifecycle.hpp"
#include "embermine/sweep.hpp"

namespace embermine {

struct MineOptions {
  RunConfig config;
  std::string branch;  // empty = current head
  int gap = 0;
  int jobs = 0;
  bool parallel = true;
  bool use_external = true;
  std::string external_reports_dir;
  bool use_cache = true;
  std::string cache_dir;  // set by the caller when caching is wanted
  std::string repo_name;  // empty = repository basename
};

struct MineResult {
  std::string repo_name;
  long commit_count = 0;
  std::vector<IssueLifecycle> lifecycles;
  IssueMetrics metrics;
  long unfixed = 0;
  std::vector<FailureRecord> failures;  // repo-level first, then per commit
  std::map<std::string, double> loc_shares;
  std::string analyzer_tool;
  std::string analyzer_version;
  bool external_used = false;
  int gap = 0;
  std::string branch;
};

// Full pipeline for one repository: enumerate, sweep, fold lifecycles,
// attribute authors, normalize timelines, compute metrics and ownership.
MineResult mine_repository(const std::string& repo_path,
                           const MineOptions& opts);

// Writes issues.jsonl, metrics.json, and failures.json into dir. Files are
// replaced atomically and byte-identical across repeated runs on the same
// inputs.
void write_mine_artifacts(const MineResult& result, const std::string& dir);

// Reads artifacts written by write_mine_artifacts. Throws IoError on
// missing or malformed files.
MineResult load_mine_artifacts(const std::string& dir);

std::string repo_basename(const std::string& repo_path);

}  // namespace embermine

#endif  // EMBERMINE_MINE_HPP
