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

#include "fixture_repo.hpp"

#include <filesystem>
#include <fstream>

#include "embermine/errors.hpp"
#include "embermine/process.hpp"

namespace fs = std::filesystem;

namespace embermine::testing {

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

FixtureRepo::FixtureRepo() {
  git({"init", "-q"});
  git({"config", "commit.gpgsign", "false"});
}

std::string FixtureRepo::git(
    const std::vector<std::string>& args,
    const std::vector<std::pair<std::string, std::string>>& env) const {
  std::vector<std::string> argv = {"git"};
  argv.insert(argv.end(), args.begin(), args.end());
  RunOptions opts;
  opts.cwd = dir_.path;
  opts.env = {{"GIT_CONFIG_SYSTEM", "/dev/null"},
              {"GIT_CONFIG_GLOBAL", "/dev/null"},
              {"GIT_TERMINAL_PROMPT", "0"},
              {"LC_ALL", "C"},
              {"TZ", "UTC"}};
  opts.env.insert(opts.env.end(), env.begin(), env.end());
  RunResult r = run_process(argv, opts);
  if (r.exit_code != 0)
    throw IoError("fixture git " + args[0] + " failed (exit " +
                  std::to_string(r.exit_code) + "): " + r.err);
  return r.out;
}

std::string FixtureRepo::commit(const Author& who, std::int64_t when,
                                const Change& change) {
  for (const auto& [old_path, new_path] : change.moves)
    git({"mv", old_path, new_path});
  for (const auto& [rel, content] : change.files) {
    fs::path p = fs::path(dir_.path) / rel;
    if (content) {
      fs::create_directories(p.parent_path());
      std::ofstream out(p, std::ios::binary | std::ios::trunc);
      out << *content;
      if (!out.flush()) throw IoError("fixture write failed: " + p.string());
    } else {
      git({"rm", "-q", rel});
    }
  }
  git({"add", "-A"});
  const std::string stamp = std::to_string(when) + " +0000";
  git({"commit", "-q", "--allow-empty", "-m", change.message},
      {{"GIT_AUTHOR_NAME", who.name},
       {"GIT_AUTHOR_EMAIL", who.email},
       {"GIT_COMMITTER_NAME", who.name},
       {"GIT_COMMITTER_EMAIL", who.email},
       {"GIT_AUTHOR_DATE", stamp},
       {"GIT_COMMITTER_DATE", stamp}});
  return head();
}

std::string FixtureRepo::commit_file(const Author& who, std::int64_t when,
                                     const std::string& file,
                                     const std::string& content,
                                     const std::string& message) {
  Change change;
  change.files[file] = content;
  change.message = message;
  return commit(who, when, change);
}

std::string FixtureRepo::head() const {
  return trim(git({"rev-parse", "HEAD"}));
}

std::string FixtureRepo::branch() const {
  return trim(git({"rev-parse", "--abbrev-ref", "HEAD"}));
}

}  // namespace embermine::testing
