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

#include "embermine/sweep.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include <json.hpp>

#include "embermine/config.hpp"
#include "embermine/errors.hpp"
#include "embermine/fingerprint.hpp"
#include "embermine/fsutil.hpp"
#include "embermine/hash.hpp"
#include "embermine/lexer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace embermine {

std::string make_temp_dir(const std::string& tag) {
  fs::path base = fs::temp_directory_path() / ("embermine-" + tag + "-XXXXXX");
  std::string templ = base.string();
  if (!mkdtemp(templ.data()))
    throw IoError("mkdtemp failed for " + templ);
  return templ;
}

namespace {

enum class ExtMode { kOff, kOnline, kOffline };

struct TempDir {
  explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string path;
};

std::string read_file(const fs::path& path) {
  return read_text_file(path.string());
}

// Snapshot directories are transient; failure details must not leak them.
std::string scrub(std::string detail, const std::string& tmp) {
  if (tmp.empty()) return detail;
  std::size_t pos = 0;
  while ((pos = detail.find(tmp, pos)) != std::string::npos) {
    detail.replace(pos, tmp.size(), "<snapshot>");
    pos += std::strlen("<snapshot>");
  }
  return detail;
}

std::string strip_dot_slash(std::string path) {
  while (path.rfind("./", 0) == 0) path.erase(0, 2);
  return path;
}

struct SweepPlan {
  ExtMode mode = ExtMode::kOff;
  std::string rule_digest;
  // Canonical (rename-followed) name per live path, one map per commit.
  std::vector<std::map<std::string, std::string>> canon;
  SweepResult seed;
};

std::string canon_digest(const std::map<std::string, std::string>& canon) {
  std::string flat;
  for (const auto& [live, first] : canon) {
    flat += live;
    flat += '\x1f';
    flat += first;
    flat += '\x1e';
  }
  return sha1_hex(flat);
}

std::string external_cache_component(ExtMode mode,
                                     const std::string& analyzer_version,
                                     const SweepOptions& opts,
                                     const std::optional<std::string>& report) {
  switch (mode) {
    case ExtMode::kOff:
      return "none";
    case ExtMode::kOnline: {
      std::string args;
      for (const std::string& a : opts.external.extra_args) {
        args += a;
        args += '\x1f';
      }
      return "online:" + analyzer_version + "|" + args;
    }
    case ExtMode::kOffline:
      return report ? "offline:" + sha1_hex(*report) : "offline:absent";
  }
  return "none";
}

json instance_to_json(const IssueInstance& inst) {
  return json{{"rule", inst.diag.rule_id},
              {"path", inst.diag.path},
              {"line", inst.diag.line},
              {"symbol", inst.diag.symbol},
              {"message", inst.diag.message},
              {"source", inst.diag.source == DiagSource::External ? "external"
                                                                  : "embedded"},
              {"critical", inst.diag.critical},
              {"severity", inst.diag.severity},
              {"canon", inst.fp.path},
              {"ctx", inst.fp.context_hash},
              {"ordinal", inst.fp.ordinal}};
}

std::optional<IssueInstance> instance_from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  for (const char* k :
       {"rule", "path", "symbol", "message", "source", "severity", "canon", "ctx"})
    if (!j.contains(k) || !j[k].is_string()) return std::nullopt;
  if (!j.contains("line") || !j["line"].is_number_integer()) return std::nullopt;
  if (!j.contains("critical") || !j["critical"].is_boolean()) return std::nullopt;
  if (!j.contains("ordinal") || !j["ordinal"].is_number_integer())
    return std::nullopt;
  IssueInstance inst;
  inst.diag.rule_id = j["rule"].get<std::string>();
  inst.diag.path = j["path"].get<std::string>();
  inst.diag.line = j["line"].get<int>();
  inst.diag.symbol = j["symbol"].get<std::string>();
  inst.diag.message = j["message"].get<std::string>();
  inst.diag.source = j["source"].get<std::string>() == "external"
                         ? DiagSource::External
                         : DiagSource::Embedded;
  inst.diag.critical = j["critical"].get<bool>();
  inst.diag.severity = j["severity"].get<std::string>();
  inst.fp.rule_id = inst.diag.rule_id;
  inst.fp.path = j["canon"].get<std::string>();
  inst.fp.symbol = inst.diag.symbol;
  inst.fp.context_hash = j["ctx"].get<std::string>();
  inst.fp.ordinal = j["ordinal"].get<int>();
  return inst;
}

struct CachedCommit {
  std::string tool;
  std::string version;
  std::vector<IssueInstance> instances;
  std::vector<FailureRecord> failures;  // commit hash refilled on load
};

std::optional<CachedCommit> load_cached(const fs::path& file) {
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error&) {
    return std::nullopt;
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("v", 0) != 1)
    return std::nullopt;
  CachedCommit out;
  out.tool = j.value("tool", "");
  out.version = j.value("version", "");
  if (!j.contains("instances") || !j["instances"].is_array()) return std::nullopt;
  for (const json& e : j["instances"]) {
    std::optional<IssueInstance> inst = instance_from_json(e);
    if (!inst) return std::nullopt;
    out.instances.push_back(std::move(*inst));
  }
  if (j.contains("failures")) {
    if (!j["failures"].is_array()) return std::nullopt;
    for (const json& e : j["failures"]) {
      if (!e.is_object() || !e.contains("kind") || !e.contains("detail"))
        return std::nullopt;
      out.failures.push_back(
          FailureRecord{"", e["kind"].get<std::string>(),
                        e["detail"].get<std::string>()});
    }
  }
  return out;
}

void store_cached(const fs::path& file, const CommitAnalysis& ca,
                  const std::string& tool, const std::string& version) {
  json j;
  j["v"] = 1;
  j["tool"] = tool;
  j["version"] = version;
  j["instances"] = json::array();
  for (const IssueInstance& inst : ca.instances)
    j["instances"].push_back(instance_to_json(inst));
  j["failures"] = json::array();
  for (const FailureRecord& f : ca.failures)
    j["failures"].push_back(json{{"kind", f.kind}, {"detail", f.detail}});

  fs::path tmp = file;
  tmp += ".tmp-" + std::to_string(getpid()) + "-" +
         std::to_string(reinterpret_cast<std::uintptr_t>(&ca) % 100000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // the cache is best-effort
    out << j.dump();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      return;
    }
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) fs::remove(tmp, ec);
}

SweepPlan prepare_sweep(const GitRepo& repo,
                        const std::vector<CommitRecord>& commits,
                        const SweepOptions& opts) {
  SweepPlan plan;
  plan.rule_digest = rule_config_digest(opts.rules);

  if (opts.use_external) {
    if (!opts.external_reports_dir.empty()) {
      plan.mode = ExtMode::kOffline;
    } else {
      // Probe once on an empty tree: resolves the executable and captures
      // its version without analyzing anything.
      TempDir probe("probe");
      try {
        ExternalReport rep = run_external_analyzer(probe.path, opts.external);
        plan.seed.analyzer_tool = rep.tool;
        plan.seed.analyzer_version = rep.version;
        plan.mode = ExtMode::kOnline;
      } catch (const Error& e) {
        plan.seed.repo_failures.push_back(
            FailureRecord{"", e.kind(), scrub(e.what(), probe.path)});
      }
    }
  }
  plan.seed.external_used = plan.mode != ExtMode::kOff;

  plan.canon.resize(commits.size());
  PathCanonicalizer pc;
  for (std::size_t i = 0; i < commits.size(); ++i) {
    pc.advance(commits[i].renames);
    std::vector<std::string> live;
    for (const SnapshotFile& f : repo.list_c_files(commits[i].hash))
      live.push_back(f.path);
    plan.canon[i] = pc.canonical_map(live);
  }

  if (!opts.cache_dir.empty()) fs::create_directories(opts.cache_dir);
  return plan;
}

CommitAnalysis analyze_commit(const GitRepo& repo, const CommitRecord& c,
                              const SweepOptions& opts, const SweepPlan& plan,
                              const std::map<std::string, std::string>& canon,
                              std::pair<std::string, std::string>& tool_info) {
  CommitAnalysis ca;
  ca.index = c.index;
  ca.commit_hash = c.hash;
  ca.timestamp = c.timestamp;

  std::optional<std::string> offline_xml;
  if (plan.mode == ExtMode::kOffline) {
    fs::path report =
        fs::path(opts.external_reports_dir) / (c.hash + ".xml");
    std::error_code ec;
    if (fs::exists(report, ec)) offline_xml = read_file(report);
  }

  std::string cache_key;
  fs::path cache_file;
  if (!opts.cache_dir.empty()) {
    std::string ext = external_cache_component(
        plan.mode, plan.seed.analyzer_version, opts, offline_xml);
    cache_key = sha1_hex("sweep-v1\n" + c.tree_hash + "\n" + plan.rule_digest +
                         "\n" + ext + "\n" + canon_digest(canon));
    cache_file = fs::path(opts.cache_dir) / (cache_key + ".json");
    if (std::optional<CachedCommit> hit = load_cached(cache_file)) {
      ca.instances = std::move(hit->instances);
      for (FailureRecord& f : hit->failures) f.commit_hash = c.hash;
      ca.failures = std::move(hit->failures);
      if (!hit->tool.empty()) tool_info = {hit->tool, hit->version};
      return ca;
    }
  }

  TempDir tmp("snap");
  std::vector<SnapshotFile> files = repo.snapshot(c.hash, tmp.path);

  std::map<std::string, std::vector<Diagnostic>> diags_by_path;
  std::map<std::string, std::vector<Token>> tokens_by_path;
  for (const SnapshotFile& f : files) {
    std::string text = read_file(fs::path(tmp.path) / f.path);
    LexResult lex = tokenize(text, f.path);
    ParseResult parsed = parse_translation_unit(lex.tokens, f.path);
    std::vector<Diagnostic> diags = run_embedded_rules(parsed.model, opts.rules);
    diags.insert(diags.end(), lex.diagnostics.begin(), lex.diagnostics.end());
    diags.insert(diags.end(), parsed.diagnostics.begin(),
                 parsed.diagnostics.end());
    diags_by_path[f.path] = std::move(diags);
    tokens_by_path[f.path] = std::move(lex.tokens);
  }

  std::string cached_tool, cached_version;
  std::optional<ExternalReport> report;
  if (plan.mode == ExtMode::kOnline) {
    try {
      report = run_external_analyzer(tmp.path, opts.external);
    } catch (const Error& e) {
      ca.failures.push_back(
          FailureRecord{c.hash, e.kind(), scrub(e.what(), tmp.path)});
    }
  } else if (plan.mode == ExtMode::kOffline) {
    if (!offline_xml) {
      ca.failures.push_back(FailureRecord{
          c.hash, "ReportMissing", "no analyzer report for commit " + c.hash});
    } else {
      try {
        report = parse_external_report(*offline_xml);
      } catch (const Error& e) {
        ca.failures.push_back(FailureRecord{c.hash, e.kind(), e.what()});
      }
    }
  }
  if (report) {
    tool_info = {report->tool, report->version};
    cached_tool = report->tool;
    cached_version = report->version;
    for (Diagnostic d : external_to_diagnostics(*report, opts.rules)) {
      d.path = strip_dot_slash(d.path);
      diags_by_path[d.path].push_back(std::move(d));
    }
  }

  for (auto& [path, diags] : diags_by_path) {
    apply_critical_flags(diags, opts.rules);
    auto canon_it = canon.find(path);
    const std::string& canonical =
        canon_it != canon.end() ? canon_it->second : path;
    auto tokens_it = tokens_by_path.find(path);
    const std::vector<Token>* tokens =
        tokens_it != tokens_by_path.end() ? &tokens_it->second : nullptr;
    for (FingerprintedDiag& fd : fingerprint_file(diags, tokens, canonical))
      ca.instances.push_back(IssueInstance{std::move(fd.diag), std::move(fd.fp)});
  }

  std::sort(ca.instances.begin(), ca.instances.end(),
            [](const IssueInstance& a, const IssueInstance& b) {
              if (!(a.fp == b.fp)) return a.fp < b.fp;
              return diag_less(a.diag, b.diag);
            });
  // Identical fingerprints within one commit (possible only when two live
  // files collapse to the same canonical name) must fold to one instance,
  // or presence counting and instance counting would disagree downstream.
  ca.instances.erase(std::unique(ca.instances.begin(), ca.instances.end(),
                                 [](const IssueInstance& a,
                                    const IssueInstance& b) {
                                   return a.fp == b.fp;
                                 }),
                     ca.instances.end());

  if (!cache_file.empty())
    store_cached(cache_file, ca, cached_tool, cached_version);
  return ca;
}

CommitAnalysis degraded_commit(const CommitRecord& c, const std::string& kind,
                               const std::string& detail) {
  CommitAnalysis ca;
  ca.index = c.index;
  ca.commit_hash = c.hash;
  ca.timestamp = c.timestamp;
  ca.failures.push_back(FailureRecord{c.hash, kind, detail});
  return ca;
}

CommitAnalysis analyze_or_degrade(
    const GitRepo& repo, const CommitRecord& c, const SweepOptions& opts,
    const SweepPlan& plan, const std::map<std::string, std::string>& canon,
    std::pair<std::string, std::string>& tool_info) {
  try {
    return analyze_commit(repo, c, opts, plan, canon, tool_info);
  } catch (const Error& e) {
    return degraded_commit(c, e.kind(), e.what());
  } catch (const std::exception& e) {
    return degraded_commit(c, "InternalError", e.what());
  }
}

SweepResult finish_sweep(SweepPlan&& plan,
                         std::vector<CommitAnalysis>&& slots,
                         std::vector<std::pair<std::string, std::string>>&& tools) {
  SweepResult res = std::move(plan.seed);
  res.per_commit = std::move(slots);
  if (res.analyzer_tool.empty()) {
    for (const auto& [tool, version] : tools) {
      if (tool.empty()) continue;
      res.analyzer_tool = tool;
      res.analyzer_version = version;
      break;
    }
  }
  return res;
}

}  // namespace

SweepResult sweep_commits_serial(const GitRepo& repo,
                                 const std::vector<CommitRecord>& commits,
                                 const SweepOptions& opts) {
  SweepPlan plan = prepare_sweep(repo, commits, opts);
  std::vector<CommitAnalysis> slots(commits.size());
  std::vector<std::pair<std::string, std::string>> tools(commits.size());
  for (std::size_t i = 0; i < commits.size(); ++i)
    slots[i] = analyze_or_degrade(repo, commits[i], opts, plan, plan.canon[i],
                                  tools[i]);
  return finish_sweep(std::move(plan), std::move(slots), std::move(tools));
}

SweepResult sweep_commits_parallel(const GitRepo& repo,
                                   const std::vector<CommitRecord>& commits,
                                   const SweepOptions& opts) {
  SweepPlan plan = prepare_sweep(repo, commits, opts);
  std::vector<CommitAnalysis> slots(commits.size());
  std::vector<std::pair<std::string, std::string>> tools(commits.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(commits.size());
#if defined(_OPENMP)
  const int workers = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    slots[k] = analyze_or_degrade(repo, commits[k], opts, plan, plan.canon[k],
                                  tools[k]);
  }
  return finish_sweep(std::move(plan), std::move(slots), std::move(tools));
}

}  // namespace embermine
