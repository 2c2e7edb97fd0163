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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "embermine/cohort.hpp"
#include "embermine/config.hpp"
#include "embermine/errors.hpp"
#include "embermine/external.hpp"
#include "embermine/fsutil.hpp"
#include "embermine/mine.hpp"
#include "embermine/rules.hpp"
#include "embermine/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace embermine;

struct CheckArgs {
  std::string path;
  std::string config;
  std::string external_report;
  bool json_output = false;
  bool force_external = false;
  bool no_external = false;
};

struct MineArgs {
  std::string repo;
  std::string config;
  std::string out;
  std::string branch;
  std::string reports_dir;
  int gap = 0;
  int jobs = 0;
  bool serial = false;
  bool no_external = false;
  bool no_cache = false;
};

struct CohortArgs {
  std::string manifest;
  std::string config;
  std::string out;
  std::string metric = "occurrence";
  int gap = 0;
  int jobs = 0;
  bool serial = false;
  bool no_external = false;
  bool no_cache = false;
  bool mine_first = false;
  bool allow_partial = false;
};

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return load_run_config(path);
}

json diag_to_json(const Diagnostic& d) {
  return json{{"rule", d.rule_id},      {"path", d.path},
              {"line", d.line},         {"symbol", d.symbol},
              {"message", d.message},   {"severity", d.severity},
              {"critical", d.critical}, {"source", diag_source_name(d.source)}};
}

std::string strip_dot_slash(std::string path) {
  while (path.rfind("./", 0) == 0) path.erase(0, 2);
  return path;
}

int run_check(const CheckArgs& args) {
  RunConfig cfg = load_config_or_default(args.config);
  fs::path target(args.path);
  if (!fs::exists(target)) {
    std::cerr << "embermine: path '" << args.path << "' does not exist\n";
    return 2;
  }
  const bool is_dir = fs::is_directory(target);

  std::vector<std::pair<std::string, std::string>> sources;  // rel, text
  if (is_dir) {
    std::vector<std::string> rels;
    for (fs::recursive_directory_iterator it(target), end; it != end; ++it) {
      if (!it->is_regular_file()) continue;
      std::string ext = it->path().extension().string();
      if (ext != ".c" && ext != ".h") continue;
      rels.push_back(fs::relative(it->path(), target).generic_string());
    }
    std::sort(rels.begin(), rels.end());
    for (const std::string& rel : rels)
      sources.emplace_back(rel, read_text_file((target / rel).string()));
  } else {
    sources.emplace_back(args.path, read_text_file(args.path));
  }

  std::vector<Diagnostic> diags;
  for (const auto& [rel, text] : sources)
    for (Diagnostic& d : analyze_source(text, rel, cfg.rules))
      diags.push_back(std::move(d));

  const bool external_configured =
      args.force_external || !cfg.external.path.empty() ||
      (std::getenv("EMBERMINE_EXTERNAL_PATH") != nullptr &&
       *std::getenv("EMBERMINE_EXTERNAL_PATH") != '\0');
  if (!args.external_report.empty()) {
    ExternalReport rep =
        parse_external_report(read_text_file(args.external_report));
    for (Diagnostic d : external_to_diagnostics(rep, cfg.rules)) {
      d.path = strip_dot_slash(d.path);
      diags.push_back(std::move(d));
    }
  } else if (external_configured && !args.no_external) {
    ExternalReport rep;
    if (is_dir) {
      rep = run_external_analyzer(target.string(), cfg.external);
    } else {
      // Single-file checks get a one-file scratch tree.
      std::string scratch = make_temp_dir("check");
      fs::copy_file(target, fs::path(scratch) / target.filename());
      try {
        rep = run_external_analyzer(scratch, cfg.external);
      } catch (...) {
        std::error_code ec;
        fs::remove_all(scratch, ec);
        throw;
      }
      std::error_code ec;
      fs::remove_all(scratch, ec);
      for (ExternalEntry& e : rep.entries)
        if (strip_dot_slash(e.path) == target.filename().string())
          e.path = args.path;
    }
    for (Diagnostic d : external_to_diagnostics(rep, cfg.rules)) {
      d.path = strip_dot_slash(d.path);
      diags.push_back(std::move(d));
    }
  }

  std::sort(diags.begin(), diags.end(), diag_less);
  if (args.json_output) {
    json doc;
    doc["count"] = diags.size();
    doc["diagnostics"] = json::array();
    for (const Diagnostic& d : diags) doc["diagnostics"].push_back(diag_to_json(d));
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const Diagnostic& d : diags) {
      std::cout << d.path << ":" << d.line << ": [" << d.rule_id << "] "
                << d.message;
      if (d.critical) std::cout << " (critical)";
      std::cout << "\n";
    }
    if (diags.empty())
      std::cout << "no issues found\n";
    else
      std::cout << diags.size() << " issue" << (diags.size() == 1 ? "" : "s")
                << " found\n";
  }
  return diags.empty() ? 0 : 1;
}

MineOptions make_mine_options(const RunConfig& cfg, const std::string& branch,
                              int gap, int jobs, bool serial, bool no_external,
                              bool no_cache, const std::string& reports_dir) {
  MineOptions mo;
  mo.config = cfg;
  mo.branch = branch;
  mo.gap = gap;
  mo.jobs = jobs;
  mo.parallel = !serial;
  mo.use_external = !no_external;
  mo.external_reports_dir = reports_dir;
  mo.use_cache = !no_cache;
  return mo;
}

int run_mine(const MineArgs& args) {
  RunConfig cfg = load_config_or_default(args.config);
  const std::string out = args.out.empty() ? cfg.out_dir : args.out;
  const std::string name = repo_basename(args.repo);
  const std::string repo_dir = (fs::path(out) / name).string();

  MineOptions mo =
      make_mine_options(cfg, args.branch, args.gap, args.jobs, args.serial,
                        args.no_external, args.no_cache, args.reports_dir);
  mo.repo_name = name;
  mo.cache_dir = (fs::path(repo_dir) / "cache").string();

  MineResult res = mine_repository(args.repo, mo);
  write_mine_artifacts(res, repo_dir);

  std::cout << name << ": " << res.commit_count << " commits, "
            << res.lifecycles.size() << " issue lifecycles ("
            << res.unfixed << " unfixed), " << res.failures.size()
            << " failures\n";
  std::cout << "wrote " << repo_dir << "\n";
  return 0;
}

int run_cohort(const CohortArgs& args) {
  RunConfig cfg = load_config_or_default(args.config);
  const std::string out = args.out.empty() ? cfg.out_dir : args.out;
  CohortManifest manifest = load_manifest(args.manifest);

  // Display names must be unique; later duplicates get an ordinal suffix.
  std::vector<std::string> names;
  std::map<std::string, int> used;
  for (const RepoSpec& spec : manifest.repos) {
    std::string base = repo_basename(spec.path);
    int n = ++used[base];
    names.push_back(n == 1 ? base : base + "-" + std::to_string(n));
  }

  std::vector<MineResult> mined;
  std::vector<RepoSpec> kept;
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < manifest.repos.size(); ++i) {
    const RepoSpec& spec = manifest.repos[i];
    const std::string repo_dir = (fs::path(out) / names[i]).string();
    if (args.mine_first) {
      MineOptions mo = make_mine_options(cfg, "", args.gap, args.jobs,
                                         args.serial, args.no_external,
                                         args.no_cache, "");
      mo.repo_name = names[i];
      mo.cache_dir = (fs::path(repo_dir) / "cache").string();
      MineResult res = mine_repository(spec.path, mo);
      write_mine_artifacts(res, repo_dir);
      mined.push_back(std::move(res));
      kept.push_back(spec);
    } else {
      try {
        mined.push_back(load_mine_artifacts(repo_dir));
        kept.push_back(spec);
      } catch (const Error&) {
        missing.push_back(names[i] + " (expected under " + repo_dir + ")");
      }
    }
  }

  if (!missing.empty()) {
    for (const std::string& m : missing)
      std::cerr << "embermine: not mined yet: " << m << "\n";
    if (!args.allow_partial) {
      std::cerr << "embermine: run `embermine mine` first or pass "
                   "--allow-partial\n";
      return 2;
    }
  }
  if (mined.empty()) {
    std::cerr << "embermine: no mined repositories available\n";
    return 2;
  }

  CohortManifest filtered = manifest;
  filtered.repos = kept;

  std::optional<std::vector<LabRow>> labs;
  if (!manifest.labs_csv.empty()) labs = load_labs_csv(manifest.labs_csv);
  std::optional<std::map<std::string, double>> grades;
  if (!manifest.grades_csv.empty())
    grades = load_grades_csv(manifest.grades_csv);

  CohortOptions co;
  co.metric = args.metric;
  co.cluster_boundary = cfg.cluster_boundary;
  co.critical_rules = cfg.rules.critical_rules;

  CohortReport report = cohort_summary(filtered, mined, labs, grades, co);
  const std::string cohort_dir = (fs::path(out) / "cohort").string();
  write_cohort_report(report, cohort_dir);
  std::cout << "wrote " << cohort_dir << "\n";
  return 0;
}

int run_rules(bool json_output) {
  if (json_output) {
    json doc = json::array();
    for (const RuleInfo& r : embedded_rule_catalog())
      doc.push_back(json{{"id", r.id},
                         {"description", r.description},
                         {"critical_default", r.critical_default}});
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const RuleInfo& r : embedded_rule_catalog()) {
      std::cout << r.id;
      if (r.critical_default) std::cout << " (critical)";
      std::cout << "\n    " << r.description << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"embedded C code-quality analysis and repository mining"};
  app.require_subcommand(1);

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Analyze a source tree and report diagnostics");
  check->add_option("path", check_args.path, "file or directory to analyze")
      ->required();
  check->add_option("--config", check_args.config, "configuration file");
  check->add_flag("--json", check_args.json_output, "machine-readable output");
  check->add_flag("--external", check_args.force_external,
                  "run the external analyzer even when not configured");
  check->add_flag("--no-external", check_args.no_external,
                  "skip the external analyzer");
  check->add_option("--external-report", check_args.external_report,
                    "pre-recorded analyzer XML report to merge");

  MineArgs mine_args;
  CLI::App* mine = app.add_subcommand(
      "mine", "Analyze every commit of a repository and write issue data");
  mine->add_option("repo", mine_args.repo, "path to a git repository")
      ->required();
  mine->add_option("--config", mine_args.config, "configuration file");
  mine->add_option("--out", mine_args.out, "output directory");
  mine->add_option("--branch", mine_args.branch, "branch to walk");
  mine->add_option("--gap", mine_args.gap,
                   "commits an issue may skip without closing its lifecycle")
      ->check(CLI::NonNegativeNumber);
  mine->add_option("--jobs", mine_args.jobs, "parallel analysis workers")
      ->check(CLI::NonNegativeNumber);
  mine->add_flag("--serial", mine_args.serial, "single-threaded sweep");
  mine->add_flag("--no-external", mine_args.no_external,
                 "embedded rules only");
  mine->add_flag("--no-cache", mine_args.no_cache,
                 "disable the per-commit result cache");
  mine->add_option("--external-reports", mine_args.reports_dir,
                   "directory of pre-recorded <commit>.xml analyzer reports");

  CohortArgs cohort_args;
  CLI::App* cohort = app.add_subcommand(
      "cohort", "Aggregate mined repositories into a cohort report");
  cohort->add_option("manifest", cohort_args.manifest, "cohort manifest file")
      ->required();
  cohort->add_option("--config", cohort_args.config, "configuration file");
  cohort->add_option("--out", cohort_args.out, "output directory");
  cohort
      ->add_option("--metric", cohort_args.metric,
                   "issue metric for group comparisons")
      ->check(CLI::IsMember({"occurrence", "total"}));
  cohort->add_flag("--mine", cohort_args.mine_first,
                   "mine every manifest repository first");
  cohort->add_flag("--allow-partial", cohort_args.allow_partial,
                   "proceed when some repositories are not mined");
  cohort->add_option("--gap", cohort_args.gap, "lifecycle gap tolerance")
      ->check(CLI::NonNegativeNumber);
  cohort->add_option("--jobs", cohort_args.jobs, "parallel analysis workers")
      ->check(CLI::NonNegativeNumber);
  cohort->add_flag("--serial", cohort_args.serial, "single-threaded sweeps");
  cohort->add_flag("--no-external", cohort_args.no_external,
                   "embedded rules only");
  cohort->add_flag("--no-cache", cohort_args.no_cache,
                   "disable the per-commit result cache");

  bool rules_json = false;
  CLI::App* rules = app.add_subcommand("rules", "Rule catalog");
  CLI::App* rules_list =
      rules->add_subcommand("list", "List the embedded rules");
  rules_list->add_flag("--json", rules_json, "machine-readable output");
  rules->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(check_args);
    if (mine->parsed()) return run_mine(mine_args);
    if (cohort->parsed()) return run_cohort(cohort_args);
    if (rules->parsed() && rules_list->parsed()) return run_rules(rules_json);
  } catch (const embermine::Error& e) {
    std::cerr << "embermine: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "embermine: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
