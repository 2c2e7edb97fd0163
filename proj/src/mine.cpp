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

#include "embermine/mine.hpp"

#include <filesystem>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "embermine/errors.hpp"
#include "embermine/fsutil.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace embermine {

namespace {

json norm_or_null(double v) {
  if (v < 0) return nullptr;
  return v;
}

json issue_to_json(const IssueLifecycle& lc) {
  json j;
  j["v"] = 1;
  j["rule"] = lc.fp.rule_id;
  j["source"] = lc.sample.source == DiagSource::External ? "external" : "embedded";
  j["critical"] = lc.sample.critical;
  j["path"] = lc.fp.path;
  j["live_path"] = lc.sample.path;
  j["line"] = lc.sample.line;
  j["symbol"] = lc.fp.symbol;
  j["message"] = lc.sample.message;
  j["severity"] = lc.sample.severity;
  j["context_hash"] = lc.fp.context_hash;
  j["ordinal"] = lc.fp.ordinal;
  j["introduced"] = json{{"index", lc.introduced_index},
                         {"commit", lc.introduced_hash},
                         {"author", lc.introduced_by},
                         {"origin", lc.introduced_origin}};
  if (lc.fixed) {
    j["fixed"] = json{{"index", lc.fixed_index},
                      {"commit", lc.fixed_hash},
                      {"author", lc.fixed_by}};
    j["same_fixer"] = lc.same_fixer;
    j["direct_fix"] = lc.direct_fix;
  } else {
    j["fixed"] = nullptr;
    j["same_fixer"] = nullptr;
    j["direct_fix"] = nullptr;
  }
  j["alive_commits"] = lc.alive_commit_count;
  j["alive_days"] = lc.alive_days;
  j["present_in"] = lc.present_in;
  j["norm"] = json{{"intro_commit", lc.norm_intro_commit},
                   {"fix_commit", norm_or_null(lc.norm_fix_commit)},
                   {"intro_day", lc.norm_intro_day},
                   {"fix_day", norm_or_null(lc.norm_fix_day)}};
  j["attribution"] = lc.attribution_status;
  return j;
}

IssueLifecycle issue_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw IoError(where + ": issue record is not an object");
  try {
    IssueLifecycle lc;
    lc.fp.rule_id = j.at("rule").get<std::string>();
    lc.fp.path = j.at("path").get<std::string>();
    lc.fp.symbol = j.at("symbol").get<std::string>();
    lc.fp.context_hash = j.at("context_hash").get<std::string>();
    lc.fp.ordinal = j.at("ordinal").get<int>();
    lc.sample.rule_id = lc.fp.rule_id;
    lc.sample.path = j.at("live_path").get<std::string>();
    lc.sample.line = j.at("line").get<int>();
    lc.sample.symbol = lc.fp.symbol;
    lc.sample.message = j.at("message").get<std::string>();
    lc.sample.severity = j.at("severity").get<std::string>();
    lc.sample.critical = j.at("critical").get<bool>();
    lc.sample.source = j.at("source").get<std::string>() == "external"
                           ? DiagSource::External
                           : DiagSource::Embedded;
    const json& intro = j.at("introduced");
    lc.introduced_index = intro.at("index").get<int>();
    lc.introduced_hash = intro.at("commit").get<std::string>();
    lc.introduced_by = intro.at("author").get<std::string>();
    lc.introduced_origin = intro.at("origin").get<std::string>();
    if (!j.at("fixed").is_null()) {
      const json& fx = j.at("fixed");
      lc.fixed = true;
      lc.fixed_index = fx.at("index").get<int>();
      lc.fixed_hash = fx.at("commit").get<std::string>();
      lc.fixed_by = fx.at("author").get<std::string>();
      lc.same_fixer = j.at("same_fixer").get<bool>();
      lc.direct_fix = j.at("direct_fix").get<bool>();
    }
    lc.alive_commit_count = j.at("alive_commits").get<long>();
    lc.alive_days = j.at("alive_days").get<double>();
    lc.present_in = j.at("present_in").get<std::vector<int>>();
    const json& norm = j.at("norm");
    lc.norm_intro_commit = norm.at("intro_commit").get<double>();
    lc.norm_fix_commit = norm.at("fix_commit").is_null()
                             ? -1.0
                             : norm.at("fix_commit").get<double>();
    lc.norm_intro_day = norm.at("intro_day").get<double>();
    lc.norm_fix_day =
        norm.at("fix_day").is_null() ? -1.0 : norm.at("fix_day").get<double>();
    lc.attribution_status = j.at("attribution").get<std::string>();
    return lc;
  } catch (const json::exception& e) {
    throw IoError(where + ": " + e.what());
  }
}

void atomic_write(const fs::path& file, const std::string& content) {
  atomic_write_file(file.string(), content);
}

std::string read_text(const fs::path& file) {
  return read_text_file(file.string());
}

}  // namespace

std::string repo_basename(const std::string& repo_path) {
  std::string trimmed = repo_path;
  while (trimmed.size() > 1 && (trimmed.back() == '/' || trimmed.back() == '\\'))
    trimmed.pop_back();
  std::string name = fs::path(trimmed).filename().string();
  return name.empty() ? trimmed : name;
}

MineResult mine_repository(const std::string& repo_path,
                           const MineOptions& opts) {
  GitRepo repo(repo_path, opts.config.authors, opts.config.template_policy());
  std::vector<CommitRecord> commits = repo.enumerate_commits(opts.branch);

  SweepOptions sweep_opts;
  sweep_opts.rules = opts.config.rules;
  sweep_opts.external = opts.config.external;
  sweep_opts.use_external = opts.use_external;
  sweep_opts.external_reports_dir = opts.external_reports_dir;
  sweep_opts.jobs = opts.jobs;
  if (opts.use_cache) sweep_opts.cache_dir = opts.cache_dir;

  SweepResult sweep = opts.parallel
                          ? sweep_commits_parallel(repo, commits, sweep_opts)
                          : sweep_commits_serial(repo, commits, sweep_opts);

  MineResult res;
  res.repo_name =
      opts.repo_name.empty() ? repo_basename(repo_path) : opts.repo_name;
  res.commit_count = static_cast<long>(commits.size());
  res.gap = opts.gap;
  res.branch = opts.branch;
  res.analyzer_tool = sweep.analyzer_tool;
  res.analyzer_version = sweep.analyzer_version;
  res.external_used = sweep.external_used;

  res.lifecycles = build_timelines(sweep.per_commit, opts.gap);
  attribute_lifecycles(res.lifecycles, repo, commits);
  normalize_lifecycles(res.lifecycles, commits, opts.config.project_start,
                       opts.config.project_deadline);
  res.metrics = compute_metrics(res.lifecycles, sweep.per_commit);
  for (const IssueLifecycle& lc : res.lifecycles)
    if (!lc.fixed) ++res.unfixed;

  res.failures = std::move(sweep.repo_failures);
  for (const CommitAnalysis& ca : sweep.per_commit)
    res.failures.insert(res.failures.end(), ca.failures.begin(),
                        ca.failures.end());

  if (!commits.empty()) res.loc_shares = repo.loc_share(commits.back().hash);
  return res;
}

void write_mine_artifacts(const MineResult& result, const std::string& dir) {
  fs::create_directories(dir);

  std::string issues;
  for (const IssueLifecycle& lc : result.lifecycles) {
    issues += issue_to_json(lc).dump();
    issues += '\n';
  }
  atomic_write(fs::path(dir) / "issues.jsonl", issues);

  json metrics;
  metrics["repo"] = result.repo_name;
  metrics["commit_count"] = result.commit_count;
  metrics["branch"] = result.branch;
  metrics["gap"] = result.gap;
  metrics["issues"] = json{{"occurrence", result.metrics.occurrence},
                           {"total", result.metrics.total},
                           {"lifecycles", result.lifecycles.size()},
                           {"unfixed", result.unfixed}};
  metrics["loc_share"] = result.loc_shares;
  metrics["analyzer"] = json{{"used", result.external_used},
                             {"tool", result.analyzer_tool},
                             {"version", result.analyzer_version}};
  atomic_write(fs::path(dir) / "metrics.json", metrics.dump(2) + "\n");

  json failures = json::array();
  for (const FailureRecord& f : result.failures)
    failures.push_back(json{{"commit", f.commit_hash},
                            {"kind", f.kind},
                            {"detail", f.detail}});
  atomic_write(fs::path(dir) / "failures.json",
               json{{"failures", failures}}.dump(2) + "\n");
}

MineResult load_mine_artifacts(const std::string& dir) {
  MineResult res;

  const fs::path issues_file = fs::path(dir) / "issues.jsonl";
  std::string issues = read_text(issues_file);
  std::istringstream lines(issues);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw IoError(issues_file.string() + ":" + std::to_string(lineno) +
                    ": invalid JSON");
    res.lifecycles.push_back(issue_from_json(
        j, issues_file.string() + ":" + std::to_string(lineno)));
  }

  const fs::path metrics_file = fs::path(dir) / "metrics.json";
  json metrics = json::parse(read_text(metrics_file), nullptr, false);
  if (metrics.is_discarded() || !metrics.is_object())
    throw IoError(metrics_file.string() + ": invalid JSON");
  try {
    res.repo_name = metrics.at("repo").get<std::string>();
    res.commit_count = metrics.at("commit_count").get<long>();
    res.branch = metrics.value("branch", "");
    res.gap = metrics.value("gap", 0);
    const json& issues_obj = metrics.at("issues");
    res.metrics.occurrence =
        issues_obj.at("occurrence").get<std::map<std::string, long>>();
    res.metrics.total =
        issues_obj.at("total").get<std::map<std::string, long>>();
    res.unfixed = issues_obj.at("unfixed").get<long>();
    res.loc_shares =
        metrics.at("loc_share").get<std::map<std::string, double>>();
    const json& analyzer = metrics.at("analyzer");
    res.external_used = analyzer.at("used").get<bool>();
    res.analyzer_tool = analyzer.at("tool").get<std::string>();
    res.analyzer_version = analyzer.at("version").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError(metrics_file.string() + ": " + e.what());
  }

  const fs::path failures_file = fs::path(dir) / "failures.json";
  json failures = json::parse(read_text(failures_file), nullptr, false);
  if (failures.is_discarded() || !failures.is_object() ||
      !failures.contains("failures") || !failures["failures"].is_array())
    throw IoError(failures_file.string() + ": invalid JSON");
  for (const json& f : failures["failures"]) {
    try {
      res.failures.push_back(FailureRecord{f.at("commit").get<std::string>(),
                                           f.at("kind").get<std::string>(),
                                           f.at("detail").get<std::string>()});
    } catch (const json::exception& e) {
      throw IoError(failures_file.string() + ": " + e.what());
    }
  }
  return res;
}

}  // namespace embermine
