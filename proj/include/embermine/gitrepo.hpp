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

#ifndef EMBERMINE_GITREPO_HPP
#define EMBERMINE_GITREPO_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "embermine/authors.hpp"

namespace embermine {

struct CommitRecord {
  std::string hash;
  std::string tree_hash;
  std::string author_name;
  std::string author_email;
  std::string author_id;  // canonicalized
  std::int64_t timestamp = 0;  // author time, UTC seconds
  int index = 0;               // 0-based first-parent position
  std::string message;         // subject line
  long changed_lines = 0;      // insertions + deletions across C files
  std::vector<std::string> changed_paths;               // C files touched
  std::vector<std::pair<std::string, std::string>> renames;  // old -> new
  bool is_template = false;
};

struct SnapshotFile {
  std::string path;       // repo-relative
  std::string blob_hash;  // object id recorded by the VCS
};

struct BlameInfo {
  std::string author_id;  // canonical id or TEMPLATE
  std::string origin_commit;
};

// Read-only access to one repository via the git CLI. Blame output is
// cached whole-file per (commit, path); the cache is thread-safe.
class GitRepo {
 public:
  explicit GitRepo(std::string repo_path, AuthorMap authors = {},
                   TemplatePolicy template_policy = {});

  const std::string& path() const { return path_; }
  const AuthorMap& authors() const { return authors_; }
  const TemplatePolicy& template_policy() const { return template_policy_; }

  // First-parent chain oldest first, indices 0..N-1. Empty history yields
  // an empty list; a named branch that does not exist throws RepoOpenError.
  std::vector<CommitRecord> enumerate_commits(const std::string& branch = "") const;

  // Extracts every .c/.h blob at the commit into out_dir, verifying each
  // extracted file against the hash the VCS recorded for the blob.
  std::vector<SnapshotFile> snapshot(const std::string& commit_hash,
                                     const std::string& out_dir) const;

  // C files present at a commit, without extraction.
  std::vector<SnapshotFile> list_c_files(const std::string& commit_hash) const;

  // Last-writer attribution of one line. Throws BlameRangeError when the
  // path or line is absent at the commit.
  BlameInfo blame_line(const std::string& commit_hash, const std::string& path,
                       int line) const;

  // Fraction of tip-tree C lines per canonical author; TEMPLATE lines are
  // excluded from the denominator. Fractions sum to 1 within 1e-9.
  std::map<std::string, double> loc_share(const std::string& tip = "HEAD") const;

 private:
  struct BlameLineOrigin {
    std::string origin_commit;
    std::string author_name;
    std::string author_email;
    std::int64_t author_time = 0;
  };
  using BlameFile = std::vector<BlameLineOrigin>;

  std::string git_out(const std::vector<std::string>& args,
                      const std::string& stdin_data = "") const;
  std::shared_ptr<const BlameFile> blame_file(const std::string& commit,
                                              const std::string& path) const;
  std::string classify(const BlameLineOrigin& o) const;

  std::string path_;
  AuthorMap authors_;
  TemplatePolicy template_policy_;
  mutable std::mutex blame_mutex_;
  mutable std::map<std::pair<std::string, std::string>,
                   std::shared_ptr<const BlameFile>>
      blame_cache_;
};

// True for paths ending in .c or .h.
bool is_c_source_path(const std::string& path);

}  // namespace embermine

#endif  // EMBERMINE_GITREPO_HPP
