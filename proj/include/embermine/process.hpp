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

#ifndef EMBERMINE_PROCESS_HPP
#define EMBERMINE_PROCESS_HPP

#include <string>
#include <utility>
#include <vector>

namespace embermine {

struct RunOptions {
  std::vector<std::pair<std::string, std::string>> env;  // overrides
  int timeout_ms = -1;  // < 0 means unlimited
  std::string cwd;      // empty inherits the caller's directory
  std::string stdin_data;
};

struct RunResult {
  int exit_code = -1;  // 128+signal when killed
  std::string out;
  std::string err;
  bool timed_out = false;
};

// Runs argv[0] (PATH-resolved) with full stdout/stderr capture. Throws
// IoError when the process cannot be spawned at all; a failing child is
// reported through exit_code, not an exception.
RunResult run_process(const std::vector<std::string>& argv,
                      const RunOptions& opts = {});

}  // namespace embermine

#endif  // EMBERMINE_PROCESS_HPP
