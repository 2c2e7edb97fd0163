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

#include "embermine/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "embermine/authors.hpp"
#include "embermine/errors.hpp"
#include "embermine/fsutil.hpp"
#include "embermine/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace embermine {

namespace {

// Shortest round-trip decimal form; keeps figure CSVs byte-stable.
std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "0";
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

json skipped(const std::string& reason) {
  return json{{"skipped", reason}};
}

json moments(const std::vector<double>& v) {
  json j;
  j["n"] = v.size();
  if (!v.empty()) {
    j["mean"] = mean(v);
    j["sd"] = v.size() > 1 ? json(sample_sd(v)) : json(nullptr);
  }
  return j;
}

json utest_or_skip(const std::vector<double>& a, const std::vector<double>& b,
                   const std::string& needs) {
  if (a.empty() || b.empty()) return skipped("missing input: " + needs);
  try {
    TestResult t = mann_whitney_u(a, b);
    return json{{"U", t.statistic}, {"p", t.p_value},   {"n1", t.n1},
                {"n2", t.n2},       {"method", t.method}};
  } catch (const Error& e) {
    return skipped(std::string("not computable: ") + e.what());
  }
}

json pearson_or_skip(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() < 2) return skipped("fewer than two paired observations");
  try {
    return json{{"r", pearson(x, y)}, {"n", x.size()}};
  } catch (const Error& e) {
    return skipped(std::string("not computable: ") + e.what());
  }
}

struct ScopeCounts {
  std::map<std::string, long> occurrence;
  std::map<std::string, long> total;
  long lifecycles = 0;
  long unfixed = 0;
};

void add_scope(ScopeCounts& scope, const MineResult& repo) {
  for (const auto& [rule, n] : repo.metrics.occurrence)
    scope.occurrence[rule] += n;
  for (const auto& [rule, n] : repo.metrics.total) scope.total[rule] += n;
  scope.lifecycles += static_cast<long>(repo.lifecycles.size());
  scope.unfixed += repo.unfixed;
}

long metric_sum(const MineResult& repo, const std::string& metric) {
  long sum = 0;
  const auto& source =
      metric == "total" ? repo.metrics.total : repo.metrics.occurrence;
  for (const auto& [rule, n] : source) sum += n;
  return sum;
}

bool attributable(const IssueLifecycle& lc) {
  return lc.introduced_by != kTemplateAuthor &&
         lc.introduced_by != kUnknownAuthor &&
         lc.attribution_status == "ok";
}

long metric_sum_map(const std::map<std::string, long>& m) {
  long sum = 0;
  for (const auto& [rule, n] : m) sum += n;
  return sum;
}

// Markdown rendering below works from the finished JSON payload so the two
// report forms can never disagree.
std::string cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned())
    return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string cell_at(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) return "-";
  return cell(obj[key]);
}

std::string stat_line(const json& t) {
  if (t.contains("skipped"))
    return "skipped (" + t["skipped"].get<std::string>() + ")";
  std::string s = "U = " + cell_at(t, "U") + ", p = " + cell_at(t, "p") +
                  ", n1 = " + cell_at(t, "n1") + ", n2 = " + cell_at(t, "n2") +
                  ", method = " + cell_at(t, "method");
  return s;
}

std::string corr_line(const json& t) {
  if (t.contains("skipped"))
    return "skipped (" + t["skipped"].get<std::string>() + ")";
  return "r = " + cell_at(t, "r") + ", n = " + cell_at(t, "n");
}

std::string render_markdown(const json& r) {
  std::ostringstream md;
  md << "# Cohort report\n\n";

  md << "## Repositories\n\n";
  md << "| repo | kind | group | tag | commits | lifecycles | unfixed | "
        "failures | analyzer |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  for (const json& repo : r["repos"]) {
    std::string analyzer = repo["analyzer_used"].get<bool>()
                               ? cell_at(repo, "analyzer_tool")
                               : std::string("off");
    md << "| " << cell_at(repo, "name") << " | " << cell_at(repo, "kind")
       << " | " << cell_at(repo, "group_id") << " | "
       << cell_at(repo, "project_tag") << " | " << cell_at(repo, "commits")
       << " | " << cell_at(repo, "lifecycles") << " | "
       << cell_at(repo, "unfixed") << " | " << cell_at(repo, "failures")
       << " | " << analyzer << " |\n";
  }

  md << "\n## Issues per rule\n\n";
  md << "| rule | critical | project occurrence | project total | "
        "lab occurrence | lab total |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const auto& [rule, row] : r["rules"].items()) {
    md << "| " << rule << " | " << cell_at(row, "critical") << " | "
       << cell(row["project"]["occurrence"]) << " | "
       << cell(row["project"]["total"]) << " | "
       << cell(row["lab"]["occurrence"]) << " | " << cell(row["lab"]["total"])
       << " |\n";
  }
  const json& totals = r["totals"];
  md << "| *all* | | " << cell(totals["project"]["occurrence"]) << " | "
     << cell(totals["project"]["total"]) << " | "
     << cell(totals["lab"]["occurrence"]) << " | "
     << cell(totals["lab"]["total"]) << " |\n";

  md << "\n## Contribution clusters\n\n";
  md << "| group | repo | max share | cluster | issues | grade |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const json& g : r["groups"]) {
    md << "| " << cell_at(g, "group_id") << " | " << cell_at(g, "repo")
       << " | " << cell_at(g, "max_share") << " | " << cell_at(g, "cluster")
       << " | " << cell_at(g, "issue_count") << " | " << cell_at(g, "grade")
       << " |\n";
  }
  const json& cc = r["cluster_comparison"];
  md << "\nCluster 0: n = " << cell(cc["cluster0"]["n"])
     << ", mean = " << cell_at(cc["cluster0"], "mean")
     << ", sd = " << cell_at(cc["cluster0"], "sd") << "\n";
  md << "\nCluster 1: n = " << cell(cc["cluster1"]["n"])
     << ", mean = " << cell_at(cc["cluster1"], "mean")
     << ", sd = " << cell_at(cc["cluster1"], "sd") << "\n";
  md << "\nLocation test (" << cell_at(cc, "metric")
     << "): " << stat_line(cc["u_test"]) << "\n";

  md << "\n## Correlations\n\n";
  for (const auto& [name, row] : r["correlations"].items())
    md << "- " << name << ": " << corr_line(row) << "\n";

  md << "\n## Fix authorship\n\n";
  const json& fx = r["fixers"];
  md << "- fixed lifecycles: " << cell_at(fx, "fixed_lifecycles") << "\n";
  md << "- same fixer: " << cell_at(fx, "same_fixer") << "\n";
  md << "- different fixer: " << cell_at(fx, "different_fixer") << "\n";
  md << "- template-introduced (fixed): " << cell_at(fx, "template_introduced")
     << "\n";
  md << "- unknown attribution: " << cell_at(fx, "unknown_attribution")
     << "\n";
  if (fx["same_fixer_pct"].is_null())
    md << "- same-fixer share: undefined ("
       << cell_at(fx, "same_fixer_pct_undefined") << ")\n";
  else
    md << "- same-fixer share: " << cell(fx["same_fixer_pct"]) << "%\n";

  md << "\n## Fix latency\n\n";
  const json& lt = r["latency"];
  md << "| fixer | n | mean commits | sd commits | mean days | sd days |\n";
  md << "|---|---|---|---|---|---|\n";
  auto latency_row = [&](const char* label, const json& row) {
    md << "| " << label << " | " << cell(row["commits"]["n"]) << " | "
       << cell_at(row["commits"], "mean") << " | "
       << cell_at(row["commits"], "sd") << " | " << cell_at(row["days"], "mean")
       << " | " << cell_at(row["days"], "sd") << " |\n";
  };
  latency_row("same", lt["same_fixer"]);
  latency_row("different", lt["different_fixer"]);
  md << "\nU test (commits): " << stat_line(lt["u_test_commits"]) << "\n";
  md << "\nU test (days): " << stat_line(lt["u_test_days"]) << "\n";
  md << "\n| criticality | n | mean commits | sd commits | mean days | "
        "sd days |\n";
  md << "|---|---|---|---|---|---|\n";
  latency_row("critical", lt["by_criticality"]["critical"]);
  latency_row("non-critical", lt["by_criticality"]["non_critical"]);

  md << "\n## Per-rule latency\n\n";
  md << "| rule | critical | fixed | unfixed | mean commits | sd commits | "
        "mean days | sd days |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& [rule, row] : r["per_rule_latency"].items()) {
    md << "| " << rule << " | " << cell_at(row, "critical") << " | "
       << cell_at(row, "fixed") << " | " << cell_at(row, "unfixed") << " | ";
    if (row.contains("commits")) {
      md << cell_at(row["commits"], "mean") << " | "
         << cell_at(row["commits"], "sd") << " | "
         << cell_at(row["days"], "mean") << " | " << cell_at(row["days"], "sd")
         << " |\n";
    } else {
      md << "- | - | - | - |\n";
    }
  }

  md << "\n## Integrity\n\n";
  md << "- occurrence sum: " << cell(r["conservation"]["occurrence_sum"])
     << "\n";
  md << "- distinct fingerprints: "
     << cell(r["conservation"]["distinct_fingerprints"]) << "\n";

  md << "\n## Method notes\n\n";
  const json& meta = r["metadata"];
  md << "- issue metric: " << cell_at(meta, "metric") << "\n";
  md << "- cluster boundary: " << cell(meta["cluster_boundary"])
     << " (max share above it selects cluster 1)\n";
  md << "- location test: two-sided Mann-Whitney U, midrank ties, "
        "continuity correction\n";
  md << "- dispersion: sample standard deviation (ddof = 1)\n";
  md << "- latency scope: " << cell_at(meta, "latency_scope")
     << " repositories, fixed issues only\n";
  return md.str();
}

}  // namespace

CohortReport cohort_summary(
    const CohortManifest& manifest, const std::vector<MineResult>& mined,
    const std::optional<std::vector<LabRow>>& labs,
    const std::optional<std::map<std::string, double>>& grades,
    const CohortOptions& opts) {
  if (manifest.repos.size() != mined.size())
    throw ShapeError("cohort_summary: " + std::to_string(mined.size()) +
                     " mined results for " +
                     std::to_string(manifest.repos.size()) + " manifest repos");
  if (mined.empty()) throw ConfigError("cohort_summary: no repositories");

  json report;
  report["metadata"] = json{
      {"metric", opts.metric},
      {"cluster_boundary", opts.cluster_boundary},
      {"critical_rules",
       std::vector<std::string>(opts.critical_rules.begin(),
                                opts.critical_rules.end())},
      {"latency_scope", "project"},
      {"statistics",
       json{{"u_test", json{{"two_sided", true},
                            {"continuity_correction", true},
                            {"tie_handling", "midranks"}}},
            {"sd_ddof", 1}}},
  };

  // Per-rule counts, split by manifest scope.
  ScopeCounts project, lab;
  std::vector<std::size_t> project_idx;
  for (std::size_t i = 0; i < mined.size(); ++i) {
    if (manifest.repos[i].kind == "lab") {
      add_scope(lab, mined[i]);
    } else {
      add_scope(project, mined[i]);
      project_idx.push_back(i);
    }
  }
  std::set<std::string> all_rules;
  for (const auto& [rule, n] : project.occurrence) all_rules.insert(rule);
  for (const auto& [rule, n] : lab.occurrence) all_rules.insert(rule);

  json rules = json::object();
  for (const std::string& rule : all_rules) {
    auto count = [&](const std::map<std::string, long>& m) -> long {
      auto it = m.find(rule);
      return it == m.end() ? 0 : it->second;
    };
    rules[rule] = json{
        {"critical", opts.critical_rules.count(rule) > 0},
        {"project", json{{"occurrence", count(project.occurrence)},
                         {"total", count(project.total)}}},
        {"lab", json{{"occurrence", count(lab.occurrence)},
                     {"total", count(lab.total)}}}};
  }
  report["rules"] = rules;
  report["totals"] = json{
      {"project",
       json{{"occurrence", metric_sum_map(project.occurrence)},
            {"total", metric_sum_map(project.total)},
            {"lifecycles", project.lifecycles},
            {"unfixed", project.unfixed}}},
      {"lab", json{{"occurrence", metric_sum_map(lab.occurrence)},
                   {"total", metric_sum_map(lab.total)},
                   {"lifecycles", lab.lifecycles},
                   {"unfixed", lab.unfixed}}}};

  // Conservation: the occurrence aggregate must equal an independent count
  // of distinct fingerprints over the loaded issue databases.
  long occurrence_sum = 0;
  for (const auto& [rule, n] : project.occurrence) occurrence_sum += n;
  for (const auto& [rule, n] : lab.occurrence) occurrence_sum += n;
  long distinct_fps = 0;
  for (const MineResult& repo : mined) {
    std::set<std::string> keys;
    for (const IssueLifecycle& lc : repo.lifecycles) keys.insert(lc.fp.key());
    distinct_fps += static_cast<long>(keys.size());
  }
  if (occurrence_sum != distinct_fps)
    throw ShapeError("report conservation violated: occurrence sum " +
                     std::to_string(occurrence_sum) + " vs " +
                     std::to_string(distinct_fps) + " distinct fingerprints");
  report["conservation"] = json{{"occurrence_sum", occurrence_sum},
                                {"distinct_fingerprints", distinct_fps},
                                {"holds", true}};

  // Group contribution profiles over project repos.
  std::map<std::string, double> lab_count_by_author;
  if (labs)
    for (const LabRow& row : *labs)
      lab_count_by_author[row.author_id] +=
          static_cast<double>(row.occurrence_count);

  std::vector<GroupProfile> profiles;
  std::vector<std::size_t> profile_repo;  // mined index per profile
  for (std::size_t i : project_idx) {
    const RepoSpec& spec = manifest.repos[i];
    GroupProfile p;
    p.group_id = spec.group_id;
    p.members = spec.members;
    p.loc_shares = mined[i].loc_shares;
    p.issue_occurrence_count =
        static_cast<double>(metric_sum(mined[i], opts.metric));
    for (const std::string& m : spec.members) {
      auto it = lab_count_by_author.find(m);
      if (it != lab_count_by_author.end()) p.lab_counts[m] = it->second;
    }
    if (grades) {
      auto it = grades->find(spec.group_id);
      if (it != grades->end()) p.grade = it->second;
    }
    profiles.push_back(std::move(p));
    profile_repo.push_back(i);
  }

  // Cluster labels only where ownership shares exist (a repo with no
  // student-authored lines has no contribution profile).
  {
    std::vector<GroupProfile> clusterable;
    std::vector<std::size_t> where;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      if (!profiles[k].loc_shares.empty()) {
        clusterable.push_back(profiles[k]);
        where.push_back(k);
      }
    }
    cluster_groups(clusterable, opts.cluster_boundary);
    for (std::size_t k = 0; k < where.size(); ++k)
      profiles[where[k]].cluster = clusterable[k].cluster;
  }

  json groups = json::array();
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const GroupProfile& p = profiles[k];
    double max_share = 0.0;
    for (const auto& [author, share] : p.loc_shares)
      max_share = std::max(max_share, share);
    groups.push_back(json{
        {"group_id", p.group_id},
        {"repo", mined[profile_repo[k]].repo_name},
        {"members", p.members},
        {"loc_shares", p.loc_shares},
        {"max_share", p.loc_shares.empty() ? json(nullptr) : json(max_share)},
        {"cluster", p.cluster < 0 ? json(nullptr) : json(p.cluster)},
        {"issue_count", p.issue_occurrence_count},
        {"grade", p.grade ? json(*p.grade) : json(nullptr)}});
  }
  report["groups"] = groups;

  // Cluster comparison: issue metric distribution, balanced vs dominated.
  std::vector<double> cluster0, cluster1;
  for (const GroupProfile& p : profiles) {
    if (p.cluster == 0) cluster0.push_back(p.issue_occurrence_count);
    if (p.cluster == 1) cluster1.push_back(p.issue_occurrence_count);
  }
  json cluster_cmp;
  cluster_cmp["metric"] = opts.metric;
  cluster_cmp["cluster0"] = moments(cluster0);
  cluster_cmp["cluster1"] = moments(cluster1);
  cluster_cmp["u_test"] =
      (cluster0.empty() || cluster1.empty())
          ? skipped("both clusters must be populated")
          : utest_or_skip(cluster0, cluster1, "clusters");
  report["cluster_comparison"] = cluster_cmp;

  // Per-student introduction counts over project repos, for correlations.
  std::map<std::string, long> intro_by_author;
  std::map<std::string, std::map<std::string, long>> intro_by_tag_author;
  for (std::size_t i : project_idx) {
    const std::string& tag = manifest.repos[i].project_tag;
    for (const IssueLifecycle& lc : mined[i].lifecycles) {
      if (lc.introduced_by == kTemplateAuthor ||
          lc.introduced_by == kUnknownAuthor)
        continue;
      ++intro_by_author[lc.introduced_by];
      ++intro_by_tag_author[tag][lc.introduced_by];
    }
  }
  std::set<std::string> project_students;
  for (std::size_t i : project_idx)
    for (const std::string& m : manifest.repos[i].members)
      project_students.insert(m);

  json correlations;
  if (!labs) {
    correlations["lab_vs_project_per_student"] =
        skipped("missing input: labs.csv");
    correlations["lab_vs_project_per_group"] =
        skipped("missing input: labs.csv");
  } else {
    std::vector<double> x, y;
    for (const std::string& s : project_students) {
      auto it = lab_count_by_author.find(s);
      if (it == lab_count_by_author.end()) continue;
      x.push_back(it->second);
      auto in = intro_by_author.find(s);
      y.push_back(in == intro_by_author.end() ? 0.0
                                              : static_cast<double>(in->second));
    }
    correlations["lab_vs_project_per_student"] = pearson_or_skip(x, y);

    std::vector<double> gx, gy;
    for (const GroupProfile& p : profiles) {
      if (p.lab_counts.empty()) continue;
      double lab_sum = 0.0;
      for (const auto& [author, n] : p.lab_counts) lab_sum += n;
      gx.push_back(lab_sum);
      gy.push_back(p.issue_occurrence_count);
    }
    correlations["lab_vs_project_per_group"] = pearson_or_skip(gx, gy);
  }

  {
    std::set<std::string> tags;
    for (std::size_t i : project_idx) tags.insert(manifest.repos[i].project_tag);
    if (tags.size() < 2) {
      correlations["project_vs_project_per_student"] =
          skipped("fewer than two project phases in manifest");
    } else {
      auto it = tags.begin();
      const std::string first = *it++;
      const std::string second = *it;
      std::set<std::string> first_students, second_students;
      for (std::size_t i : project_idx) {
        const RepoSpec& spec = manifest.repos[i];
        for (const std::string& m : spec.members) {
          if (spec.project_tag == first) first_students.insert(m);
          if (spec.project_tag == second) second_students.insert(m);
        }
      }
      std::vector<double> x, y;
      for (const std::string& s : first_students) {
        if (!second_students.count(s)) continue;
        auto fx = intro_by_tag_author[first].find(s);
        auto fy = intro_by_tag_author[second].find(s);
        x.push_back(fx == intro_by_tag_author[first].end()
                        ? 0.0
                        : static_cast<double>(fx->second));
        y.push_back(fy == intro_by_tag_author[second].end()
                        ? 0.0
                        : static_cast<double>(fy->second));
      }
      json row = pearson_or_skip(x, y);
      row["phases"] = json::array({first, second});
      correlations["project_vs_project_per_student"] = row;
    }
  }

  if (!grades) {
    correlations["grade_vs_issues_per_group"] =
        skipped("missing input: grades.csv");
  } else {
    std::vector<double> x, y;
    for (const GroupProfile& p : profiles) {
      if (!p.grade) continue;
      x.push_back(p.issue_occurrence_count);
      y.push_back(*p.grade);
    }
    correlations["grade_vs_issues_per_group"] = pearson_or_skip(x, y);
  }
  report["correlations"] = correlations;

  // Fix authorship and latency, project scope.
  long n_fixed = 0, n_same = 0, n_diff = 0, n_template = 0, n_unknown = 0;
  std::vector<double> same_commits, same_days, diff_commits, diff_days;
  std::vector<double> crit_commits, crit_days, noncrit_commits, noncrit_days;
  std::map<std::string, std::vector<double>> rule_commits, rule_days;
  std::map<std::string, long> rule_unfixed;
  long template_introduced_total = 0;
  for (std::size_t i : project_idx) {
    for (const IssueLifecycle& lc : mined[i].lifecycles) {
      if (lc.introduced_by == kTemplateAuthor) ++template_introduced_total;
      if (!lc.fixed) {
        ++rule_unfixed[lc.fp.rule_id];
        continue;
      }
      ++n_fixed;
      const double commits = static_cast<double>(lc.alive_commit_count);
      const double days = lc.alive_days;
      rule_commits[lc.fp.rule_id].push_back(commits);
      rule_days[lc.fp.rule_id].push_back(days);
      if (lc.sample.critical) {
        crit_commits.push_back(commits);
        crit_days.push_back(days);
      } else {
        noncrit_commits.push_back(commits);
        noncrit_days.push_back(days);
      }
      if (lc.introduced_by == kTemplateAuthor) {
        ++n_template;
      } else if (!attributable(lc)) {
        ++n_unknown;
      } else if (lc.same_fixer) {
        ++n_same;
        same_commits.push_back(commits);
        same_days.push_back(days);
      } else {
        ++n_diff;
        diff_commits.push_back(commits);
        diff_days.push_back(days);
      }
    }
  }

  json fixers;
  fixers["fixed_lifecycles"] = n_fixed;
  fixers["same_fixer"] = n_same;
  fixers["different_fixer"] = n_diff;
  fixers["template_introduced"] = n_template;
  fixers["unknown_attribution"] = n_unknown;
  fixers["template_introduced_lifecycles_all"] = template_introduced_total;
  if (n_same + n_diff > 0) {
    fixers["same_fixer_pct"] =
        100.0 * static_cast<double>(n_same) / static_cast<double>(n_same + n_diff);
  } else {
    fixers["same_fixer_pct"] = nullptr;
    fixers["same_fixer_pct_undefined"] =
        n_fixed == 0 ? "no fixed issues" : "no attributable fixed issues";
  }
  report["fixers"] = fixers;

  json latency;
  latency["same_fixer"] =
      json{{"commits", moments(same_commits)}, {"days", moments(same_days)}};
  latency["different_fixer"] =
      json{{"commits", moments(diff_commits)}, {"days", moments(diff_days)}};
  latency["u_test_commits"] =
      utest_or_skip(same_commits, diff_commits,
                    "fixed issues in both fixer classes");
  latency["u_test_days"] = utest_or_skip(
      same_days, diff_days, "fixed issues in both fixer classes");
  latency["by_criticality"] =
      json{{"critical", json{{"commits", moments(crit_commits)},
                             {"days", moments(crit_days)}}},
           {"non_critical", json{{"commits", moments(noncrit_commits)},
                                 {"days", moments(noncrit_days)}}}};
  report["latency"] = latency;

  json per_rule = json::object();
  {
    std::set<std::string> latency_rules;
    for (const auto& [rule, v] : rule_commits) latency_rules.insert(rule);
    for (const auto& [rule, n] : rule_unfixed) latency_rules.insert(rule);
    for (const std::string& rule : latency_rules) {
      json row;
      row["critical"] = opts.critical_rules.count(rule) > 0;
      auto it = rule_commits.find(rule);
      row["fixed"] = it == rule_commits.end() ? 0 : it->second.size();
      auto un = rule_unfixed.find(rule);
      row["unfixed"] = un == rule_unfixed.end() ? 0 : un->second;
      if (it != rule_commits.end()) {
        row["commits"] = moments(it->second);
        row["days"] = moments(rule_days[rule]);
      }
      per_rule[rule] = row;
    }
  }
  report["per_rule_latency"] = per_rule;

  json repos = json::array();
  for (std::size_t i = 0; i < mined.size(); ++i) {
    const MineResult& r = mined[i];
    repos.push_back(json{{"name", r.repo_name},
                         {"kind", manifest.repos[i].kind},
                         {"group_id", manifest.repos[i].group_id},
                         {"project_tag", manifest.repos[i].project_tag},
                         {"commits", r.commit_count},
                         {"lifecycles", r.lifecycles.size()},
                         {"unfixed", r.unfixed},
                         {"failures", r.failures.size()},
                         {"analyzer_used", r.external_used},
                         {"analyzer_tool", r.analyzer_tool},
                         {"analyzer_version", r.analyzer_version}});
  }
  report["repos"] = repos;

  CohortReport out;
  out.report = std::move(report);

  // Figure series, project scope, manifest then lifecycle order.
  std::string fig1 = "repo,rule_id,critical,same_fixer,commits_to_fix,days_to_fix\n";
  std::string fig2 = "repo,rule_id,same_fixer,norm_intro_commit,norm_fix_commit\n";
  std::string fig3 = "repo,rule_id,norm_intro_day,fixed,norm_fix_day\n";
  for (std::size_t i : project_idx) {
    const std::string repo_field = csv_field(mined[i].repo_name);
    for (const IssueLifecycle& lc : mined[i].lifecycles) {
      const std::string rule_field = csv_field(lc.fp.rule_id);
      if (lc.fixed) {
        fig1 += repo_field + "," + rule_field + "," +
                (lc.sample.critical ? "1" : "0") + "," +
                (lc.same_fixer ? "1" : "0") + "," +
                std::to_string(lc.alive_commit_count) + "," +
                fmt(lc.alive_days) + "\n";
      }
      fig2 += repo_field + "," + rule_field + "," +
              (lc.fixed ? (lc.same_fixer ? "1" : "0") : std::string()) + "," +
              fmt(lc.norm_intro_commit) + "," +
              (lc.fixed ? fmt(lc.norm_fix_commit) : std::string()) + "\n";
      fig3 += repo_field + "," + rule_field + "," + fmt(lc.norm_intro_day) +
              "," + (lc.fixed ? "1" : "0") + "," +
              (lc.fixed ? fmt(lc.norm_fix_day) : std::string()) + "\n";
    }
  }
  out.fig_fix_latency = std::move(fig1);
  out.fig_intro_removed = std::move(fig2);
  out.fig_day_hist = std::move(fig3);

  out.markdown = render_markdown(out.report);
  return out;
}

void write_cohort_report(const CohortReport& report, const std::string& dir) {
  fs::create_directories(dir);
  atomic_write_file((fs::path(dir) / "report.json").string(),
                    report.report.dump(2) + "\n");
  atomic_write_file((fs::path(dir) / "report.md").string(), report.markdown);
  atomic_write_file((fs::path(dir) / "fig_fix_latency.csv").string(),
                    report.fig_fix_latency);
  atomic_write_file((fs::path(dir) / "fig_intro_removed.csv").string(),
                    report.fig_intro_removed);
  atomic_write_file((fs::path(dir) / "fig_day_hist.csv").string(),
                    report.fig_day_hist);
}

}  // namespace embermine
