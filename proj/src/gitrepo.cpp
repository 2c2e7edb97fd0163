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

#include "embermine/gitrepo.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "embermine/errors.hpp"
#include "embermine/hash.hpp"
#include "embermine/process.hpp"

namespace fs = std::filesystem;

namespace embermine {

namespace {

constexpr char kRecordSep = '\x01';
constexpr char kFieldSep = '\x1f';

RunOptions git_opts(std::string stdin_data = "") {
  RunOptions o;
  o.stdin_data = std::move(stdin_data);
  // Isolate from user/system git configuration for reproducible output.
  o.env = {{"GIT_CONFIG_SYSTEM", "/dev/null"},
           {"GIT_CONFIG_GLOBAL", "/dev/null"},
           {"GIT_TERMINAL_PROMPT", "0"},
           {"GIT_PAGER", "cat"},
           {"LC_ALL", "C"},
           {"TZ", "UTC"}};
  return o;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find('\n', i);
    if (j == std::string::npos) {
      if (i < s.size()) out.push_back(s.substr(i));
      break;
    }
    out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (;;) {
    std::size_t j = s.find(sep, i);
    if (j == std::string::npos) {
      out.push_back(s.substr(i));
      return out;
    }
    out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
}

// Resolves numstat rename syntax ("dir/{old.c => new.c}" or "old.c => new.c")
// to the post-rename path.
std::string numstat_new_path(const std::string& raw) {
  std::size_t brace = raw.find('{');
  std::size_t arrow = raw.find(" => ");
  if (arrow == std::string::npos) return raw;
  if (brace != std::string::npos && brace < arrow) {
    std::size_t close = raw.find('}', arrow);
    if (close == std::string::npos) return raw;
    return raw.substr(0, brace) + raw.substr(arrow + 4, close - arrow - 4) +
           raw.substr(close + 1);
  }
  return raw.substr(arrow + 4);
}

bool safe_relative_path(const std::string& p) {
  if (p.empty() || p.front() == '/') return false;
  for (const std::string& part : split_on(p, '/'))
    if (part == "..") return false;
  return true;
}

}  // namespace

bool is_c_source_path(const std::string& path) {
  auto ends = [&](std::string_view suf) {
    return path.size() > suf.size() &&
           path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  return ends(".c") || ends(".h");
}

GitRepo::GitRepo(std::string repo_path, AuthorMap authors,
                 TemplatePolicy template_policy)
    : path_(std::move(repo_path)),
      authors_(std::move(authors)),
      template_policy_(std::move(template_policy)) {
  std::vector<std::string> argv = {"git", "-C", path_, "rev-parse", "--git-dir"};
  RunResult r = run_process(argv, git_opts());
  if (r.exit_code != 0)
    throw RepoOpenError("'" + path_ + "' is not a git repository: " + r.err);
}

std::string GitRepo::git_out(const std::vector<std::string>& args,
                             const std::string& stdin_data) const {
  std::vector<std::string> argv = {"git", "-C", path_};
  argv.insert(argv.end(), args.begin(), args.end());
  RunResult r = run_process(argv, git_opts(stdin_data));
  if (r.exit_code != 0)
    throw RepoOpenError("git " + args.front() + " failed in '" + path_ +
                        "': " + r.err);
  return std::move(r.out);
}

std::vector<CommitRecord> GitRepo::enumerate_commits(
    const std::string& branch) const {
  std::string ref = branch.empty() ? "HEAD" : branch;
  {
    std::vector<std::string> argv = {"git",      "-C",      path_,
                                     "rev-parse", "--verify", "--quiet",
                                     ref + "^{commit}"};
    RunResult r = run_process(argv, git_opts());
    if (r.exit_code != 0) {
      if (branch.empty()) return {};  // unborn HEAD: no history yet
      throw RepoOpenError("branch '" + branch + "' not found in '" + path_ +
                          "'");
    }
  }

  std::string fmt = std::string("--format=") + kRecordSep + "%H" + kFieldSep +
                    "%an" + kFieldSep + "%ae" + kFieldSep + "%at" + kFieldSep +
                    "%T" + kFieldSep + "%s";
  std::string raw = git_out({"log", "--first-parent", "--reverse",
                             "--no-show-signature", fmt, "--numstat", ref});

  std::vector<CommitRecord> commits;
  for (const std::string& rec : split_on(raw, kRecordSep)) {
    if (rec.empty()) continue;
    std::size_t nl = rec.find('\n');
    std::string header = nl == std::string::npos ? rec : rec.substr(0, nl);
    std::vector<std::string> fields = split_on(header, kFieldSep);
    if (fields.size() < 6) continue;
    CommitRecord c;
    c.hash = fields[0];
    c.author_name = fields[1];
    c.author_email = fields[2];
    c.timestamp = std::strtoll(fields[3].c_str(), nullptr, 10);
    c.tree_hash = fields[4];
    c.message = fields[5];
    c.author_id = authors_.canonical(c.author_name, c.author_email);
    c.is_template = template_policy_.is_template(c.author_id, c.author_name,
                                                 c.author_email, c.timestamp);
    if (nl != std::string::npos) {
      for (const std::string& line : split_lines(rec.substr(nl + 1))) {
        if (line.empty()) continue;
        std::vector<std::string> cols = split_on(line, '\t');
        if (cols.size() < 3) continue;
        std::string file = numstat_new_path(cols[2]);
        if (!is_c_source_path(file)) continue;
        long ins = cols[0] == "-" ? 0 : std::strtol(cols[0].c_str(), nullptr, 10);
        long del = cols[1] == "-" ? 0 : std::strtol(cols[1].c_str(), nullptr, 10);
        c.changed_lines += ins + del;
        c.changed_paths.push_back(file);
      }
    }
    c.index = static_cast<int>(commits.size());
    commits.push_back(std::move(c));
  }

  // Second pass for rename pairs; --numstat's arrow syntax is ambiguous for
  // paths containing " => ", --name-status is not.
  std::string fmt2 = std::string("--format=") + kRecordSep + "%H";
  std::string renames_raw =
      git_out({"log", "--first-parent", "--reverse", "--no-show-signature",
               fmt2, "-M", "--name-status", "--diff-filter=R", ref});
  std::map<std::string, std::size_t> by_hash;
  for (std::size_t i = 0; i < commits.size(); ++i)
    by_hash[commits[i].hash] = i;
  for (const std::string& rec : split_on(renames_raw, kRecordSep)) {
    if (rec.empty()) continue;
    std::vector<std::string> lines = split_lines(rec);
    if (lines.empty()) continue;
    auto it = by_hash.find(lines[0]);
    if (it == by_hash.end()) continue;
    for (std::size_t li = 1; li < lines.size(); ++li) {
      if (lines[li].empty() || lines[li][0] != 'R') continue;
      std::vector<std::string> cols = split_on(lines[li], '\t');
      if (cols.size() == 3)
        commits[it->second].renames.emplace_back(cols[1], cols[2]);
    }
  }
  return commits;
}

std::vector<SnapshotFile> GitRepo::list_c_files(
    const std::string& commit_hash) const {
  {
    std::vector<std::string> argv = {"git",       "-C",       path_,
                                     "rev-parse", "--verify", "--quiet",
                                     commit_hash + "^{commit}"};
    RunResult r = run_process(argv, git_opts());
    if (r.exit_code != 0)
      throw ObjectMissing("commit '" + commit_hash + "' not found in '" +
                          path_ + "'");
  }
  std::string raw = git_out({"ls-tree", "-r", "-z", commit_hash});
  std::vector<SnapshotFile> files;
  for (const std::string& entry : split_on(raw, '\0')) {
    if (entry.empty()) continue;
    // "<mode> <type> <hash>\t<path>"
    std::size_t tab = entry.find('\t');
    if (tab == std::string::npos) continue;
    std::string meta = entry.substr(0, tab);
    std::string file_path = entry.substr(tab + 1);
    std::vector<std::string> cols = split_on(meta, ' ');
    if (cols.size() < 3 || cols[1] != "blob") continue;
    if (!is_c_source_path(file_path) || !safe_relative_path(file_path)) continue;
    files.push_back({file_path, cols[2]});
  }
  std::sort(files.begin(), files.end(),
            [](const SnapshotFile& a, const SnapshotFile& b) {
              return a.path < b.path;
            });
  return files;
}

std::vector<SnapshotFile> GitRepo::snapshot(const std::string& commit_hash,
                                            const std::string& out_dir) const {
  std::vector<SnapshotFile> files = list_c_files(commit_hash);

  std::vector<std::string> wanted;
  for (const SnapshotFile& f : files) wanted.push_back(f.blob_hash);
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::map<std::string, std::string> contents;
  if (!wanted.empty()) {
    std::string request;
    for (const std::string& h : wanted) request += h + "\n";
    std::string raw = git_out({"cat-file", "--batch"}, request);
    std::size_t pos = 0;
    while (pos < raw.size()) {
      std::size_t nl = raw.find('\n', pos);
      if (nl == std::string::npos) break;
      std::string header = raw.substr(pos, nl - pos);
      pos = nl + 1;
      std::vector<std::string> cols = split_on(header, ' ');
      if (cols.size() >= 2 && cols[1] == "missing")
        throw ObjectMissing("blob " + cols[0] + " missing from '" + path_ + "'");
      if (cols.size() < 3) break;
      std::size_t size = std::strtoull(cols[2].c_str(), nullptr, 10);
      if (pos + size > raw.size())
        throw ObjectMissing("truncated object stream for blob " + cols[0]);
      contents[cols[0]] = raw.substr(pos, size);
      pos += size + 1;  // object payload plus framing newline
    }
  }

  for (const SnapshotFile& f : files) {
    auto it = contents.find(f.blob_hash);
    if (it == contents.end())
      throw ObjectMissing("blob for '" + f.path + "' not returned by the VCS");
    if (git_blob_sha1(it->second) != f.blob_hash)
      throw ObjectMissing("content hash mismatch for '" + f.path + "' at " +
                          commit_hash);
    fs::path dest = fs::path(out_dir) / f.path;
    std::error_code ec;
    fs::create_directories(dest.parent_path(), ec);
    std::ofstream out(dest, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write snapshot file '" + dest.string() + "'");
    out.write(it->second.data(),
              static_cast<std::streamsize>(it->second.size()));
    if (!out) throw IoError("short write on '" + dest.string() + "'");
  }
  return files;
}

std::shared_ptr<const GitRepo::BlameFile> GitRepo::blame_file(
    const std::string& commit, const std::string& path) const {
  {
    std::lock_guard<std::mutex> lock(blame_mutex_);
    auto it = blame_cache_.find({commit, path});
    if (it != blame_cache_.end()) return it->second;
  }
  std::vector<std::string> argv = {"git",  "-C",   path_,  "blame",
                                   "--line-porcelain", commit, "--", path};
  RunResult r = run_process(argv, git_opts());
  if (r.exit_code != 0)
    throw BlameRangeError("cannot blame '" + path + "' at " + commit + ": " +
                          r.err);

  auto parsed = std::make_shared<BlameFile>();
  BlameLineOrigin cur;
  bool in_record = false;
  for (const std::string& line : split_lines(r.out)) {
    if (!line.empty() && line[0] == '\t') {
      if (in_record) parsed->push_back(cur);
      cur = BlameLineOrigin{};
      in_record = false;
      continue;
    }
    if (!in_record) {
      std::size_t sp = line.find(' ');
      cur.origin_commit = sp == std::string::npos ? line : line.substr(0, sp);
      in_record = true;
      continue;
    }
    if (line.rfind("author ", 0) == 0) {
      cur.author_name = line.substr(7);
    } else if (line.rfind("author-mail ", 0) == 0) {
      std::string mail = line.substr(12);
      if (mail.size() >= 2 && mail.front() == '<' && mail.back() == '>')
        mail = mail.substr(1, mail.size() - 2);
      cur.author_email = mail;
    } else if (line.rfind("author-time ", 0) == 0) {
      cur.author_time = std::strtoll(line.c_str() + 12, nullptr, 10);
    }
  }
  std::lock_guard<std::mutex> lock(blame_mutex_);
  auto [it, inserted] = blame_cache_.emplace(std::make_pair(commit, path), parsed);
  return it->second;
}

std::string GitRepo::classify(const BlameLineOrigin& o) const {
  std::string id = authors_.canonical(o.author_name, o.author_email);
  if (template_policy_.is_template(id, o.author_name, o.author_email,
                                   o.author_time))
    return kTemplateAuthor;
  return id;
}

BlameInfo GitRepo::blame_line(const std::string& commit_hash,
                              const std::string& path, int line) const {
  std::shared_ptr<const BlameFile> file = blame_file(commit_hash, path);
  if (line < 1 || static_cast<std::size_t>(line) > file->size())
    throw BlameRangeError("line " + std::to_string(line) + " out of range for '" +
                          path + "' at " + commit_hash + " (file has " +
                          std::to_string(file->size()) + " lines)");
  const BlameLineOrigin& o = (*file)[static_cast<std::size_t>(line - 1)];
  return {classify(o), o.origin_commit};
}

std::map<std::string, double> GitRepo::loc_share(const std::string& tip) const {
  std::vector<SnapshotFile> files = list_c_files(tip);
  std::map<std::string, long> counts;
  long student_total = 0;
  for (const SnapshotFile& f : files) {
    std::shared_ptr<const BlameFile> blames = blame_file(tip, f.path);
    for (const BlameLineOrigin& o : *blames) {
      std::string id = classify(o);
      if (id == kTemplateAuthor) continue;
      ++counts[id];
      ++student_total;
    }
  }
  std::map<std::string, double> shares;
  if (student_total == 0) return shares;
  for (const auto& [id, n] : counts)
    shares[id] = static_cast<double>(n) / static_cast<double>(student_total);
  return shares;
}

}  // namespace embermine
