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

// Release gate for the whole toolchain. Each criterion below exercises one
// end-to-end guarantee and prints exactly one PASS/FAIL line; the process
// exits nonzero when any of them fails. Ground truths are scripted into
// fixture repositories or computed by independent oracle implementations,
// never read back from the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "embermine/cohort.hpp"
#include "embermine/errors.hpp"
#include "embermine/fsutil.hpp"
#include "embermine/gitrepo.hpp"
#include "embermine/lifecycle.hpp"
#include "embermine/mine.hpp"
#include "embermine/process.hpp"
#include "embermine/rules.hpp"
#include "embermine/stats.hpp"
#include "support/fixture_repo.hpp"
#include "support/stub_analyzer.hpp"
#include "support/temp_dir.hpp"

using namespace embermine;
using namespace embermine::testing;
using nlohmann::json;

namespace {

constexpr const char* kNoAnalyzer = "/nonexistent/analyzer";

std::string fixture(const std::string& name) {
  return std::string(EMBERMINE_FIXTURES_DIR) + "/" + name;
}

RunResult cli(std::vector<std::string> args,
              const std::string& analyzer_path = kNoAnalyzer) {
  std::vector<std::string> argv = {EMBERMINE_BIN_PATH};
  for (auto& a : args) argv.push_back(std::move(a));
  RunOptions opts;
  opts.env.emplace_back("EMBERMINE_EXTERNAL_PATH", analyzer_path);
  opts.timeout_ms = 120000;
  return run_process(argv, opts);
}

std::string str(long v) { return std::to_string(v); }
std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double elapsed_s(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

// Source bodies used by the scripted histories. Each file carries exactly
// one finding so lifecycles map one-to-one onto the script.
std::string isr_flag_bug(int k) {
  std::string n = str(static_cast<long>(k));
  return "int flag" + n + " = 0;\n" +
         "void F" + n + "_IRQHandler(void) { flag" + n + " = 1; }\n" +
         "int poll" + n + "(void) { return flag" + n + "; }\n";
}
std::string isr_flag_fixed(int k) { return "volatile " + isr_flag_bug(k); }
std::string slow_isr_bug(int k) {
  return "void T" + str(static_cast<long>(k)) + "_IRQHandler(void) {\n" +
         "  sleep_ms(10);\n}\n";
}
std::string slow_isr_fixed(int k) {
  return "void T" + str(static_cast<long>(k)) + "_IRQHandler(void) {\n}\n";
}

// Two students, three commits: an isr volatility bug fixed by the partner,
// then a slow isr call that stays open.
void small_history(FixtureRepo& r, const Author& dev, const Author& partner) {
  r.commit_file(dev, kEpoch, "main.c", isr_flag_bug(0), "bring up gpio");
  r.commit_file(partner, kEpoch + 86400, "main.c", isr_flag_fixed(0),
                "volatile flag");
  r.commit_file(dev, kEpoch + 2 * 86400, "util.c", slow_isr_bug(0),
                "timer work");
}

// Mined repositories accumulate here so the conservation criterion can
// audit every result produced by earlier criteria.
std::vector<MineResult> g_mined;

// ---------------------------------------------------------------------------
// 1. The reference snippet yields exactly its five findings; its cleaned
//    counterpart yields none; a check run stays under one second.
std::string criterion_snippet_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  RunResult dirty = cli({"check", fixture("snippet_gpio.c"), "--json",
                         "--no-external"});
  double dirty_s = elapsed_s(t0);
  if (dirty.exit_code != 1) return "check exit " + str((long)dirty.exit_code);

  json doc = json::parse(dirty.out);
  std::vector<std::pair<std::string, int>> got;
  for (const auto& d : doc["diagnostics"])
    got.emplace_back(d["rule"].get<std::string>(), d["line"].get<int>());
  std::sort(got.begin(), got.end());
  std::vector<std::pair<std::string, int>> want = {
      {"notVolatileVarIrs", 1}, {"slowIRS", 7},          {"slowIRS", 8},
      {"wrongUseGlobalVar", 2}, {"wrongUseOfVolatile", 13}};
  if (got != want) {
    std::string s = "diagnostic set mismatch:";
    for (const auto& [r, l] : got) s += " " + r + "@" + str((long)l);
    return s;
  }

  t0 = std::chrono::steady_clock::now();
  RunResult clean = cli({"check", fixture("snippet_gpio_clean.c"), "--json",
                         "--no-external"});
  double clean_s = elapsed_s(t0);
  if (clean.exit_code != 0) return "clean variant exit " + str((long)clean.exit_code);
  if (json::parse(clean.out)["count"] != 0) return "clean variant reported issues";
  if (dirty_s >= 1.0 || clean_s >= 1.0)
    return "check took " + str(std::max(dirty_s, clean_s)) + "s";
  return "";
}

// ---------------------------------------------------------------------------
// 2. With an analyzer available the division/uninitialized findings appear
//    on the tone snippet; without one, mining still completes and records
//    the outage explicitly.
std::string criterion_external_analyzer() {
  bool real_analyzer = false;
  try {
    RunOptions probe_opts;
    probe_opts.timeout_ms = 10000;
    real_analyzer = run_process({"cppcheck", "--version"}, probe_opts)
                        .exit_code == 0;
  } catch (const IoError&) {
    real_analyzer = false;
  }
  TempDir bin;
  std::string analyzer =
      real_analyzer ? "cppcheck" : write_stub_analyzer(bin.path);

  RunResult res = cli({"check", fixture("tone.c"), "--json"}, analyzer);
  if (res.exit_code != 1) return "check exit " + str((long)res.exit_code);
  json doc = json::parse(res.out);
  std::map<std::string, int> lines;
  for (const auto& d : doc["diagnostics"])
    if (d["source"] == "external")
      lines.emplace(d["rule"].get<std::string>(), d["line"].get<int>());
  if (!lines.count("zerodivcond")) return "no zerodivcond entry";
  if (!lines.count("uninitvar")) return "no uninitvar entry";
  if (!real_analyzer) {
    if (lines["zerodivcond"] != 2)
      return "zerodivcond at line " + str((long)lines["zerodivcond"]);
    if (lines["uninitvar"] != 4)
      return "uninitvar at line " + str((long)lines["uninitvar"]);
  }

  FixtureRepo repo;
  small_history(repo, kAlice, kBob);
  MineOptions mo;
  mo.config.external.path = kNoAnalyzer;
  mo.parallel = false;
  MineResult mined = mine_repository(repo.path(), mo);
  bool outage = false;
  for (const FailureRecord& f : mined.failures)
    if (f.kind == "AnalyzerUnavailable" && f.commit_hash.empty()) outage = true;
  if (!outage) return "no AnalyzerUnavailable record";
  if (mined.external_used) return "external_used set despite outage";
  if (mined.metrics.occurrence["notVolatileVarIrs"] != 1)
    return "embedded findings missing in analyzer-less mode";
  g_mined.push_back(std::move(mined));
  return "";
}

// ---------------------------------------------------------------------------
// 3. Randomized scripted histories with declared ground truth: mining must
//    reproduce authorship and latency for every planned issue, exactly.
struct PlannedIssue {
  std::string file;
  std::string rule;
  int intro = 0;
  int fix = -1;  // -1 never fixed
};

std::string criterion_lifecycle_ground_truth() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(20260814u);
  const Author authors[] = {kAlice, kBob, kInstructor};
  const int kRepos = 22;

  long issues_checked = 0;
  for (int trial = 0; trial < kRepos; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);
    std::vector<std::int64_t> ts(n);
    ts[0] = kEpoch;
    for (int i = 1; i < n; ++i)
      ts[i] = ts[i - 1] + 3600 + static_cast<std::int64_t>(rng() % 90000);
    std::vector<int> commit_author(n);
    for (int i = 0; i < n; ++i) commit_author[i] = static_cast<int>(rng() % 3);

    const int n_issues = 1 + static_cast<int>(rng() % 3);
    std::vector<PlannedIssue> plan;
    for (int k = 0; k < n_issues; ++k) {
      PlannedIssue p;
      p.file = "issue" + str((long)k) + ".c";
      p.rule = (rng() % 2 == 0) ? "notVolatileVarIrs" : "slowIRS";
      p.intro = static_cast<int>(rng() % (n - 1));
      if (rng() % 3 != 0)
        p.fix = p.intro + 1 + static_cast<int>(rng() % (n - 1 - p.intro));
      plan.push_back(p);
    }

    FixtureRepo repo;
    for (int i = 0; i < n; ++i) {
      FixtureRepo::Change change;
      for (int k = 0; k < n_issues; ++k) {
        const PlannedIssue& p = plan[k];
        const bool slow = p.rule == "slowIRS";
        if (p.intro == i)
          change.files[p.file] = slow ? slow_isr_bug(k) : isr_flag_bug(k);
        if (p.fix == i)
          change.files[p.file] = slow ? slow_isr_fixed(k) : isr_flag_fixed(k);
      }
      if (change.files.empty())
        change.files["log.c"] = "// entry " + str((long)i) + "\n";
      change.message = "step " + str((long)i);
      repo.commit(authors[commit_author[i]], ts[i], change);
    }

    MineOptions mo;
    mo.config.template_authors = {"*staff*"};
    mo.use_external = false;
    mo.parallel = false;
    MineResult mined = mine_repository(repo.path(), mo);

    if (mined.lifecycles.size() != plan.size())
      return "repo " + str((long)trial) + ": " + str((long)mined.lifecycles.size()) +
             " lifecycles for " + str((long)plan.size()) + " planned issues";

    for (std::size_t k = 0; k < plan.size(); ++k) {
      const PlannedIssue& p = plan[k];
      const IssueLifecycle* lc = nullptr;
      for (const IssueLifecycle& cand : mined.lifecycles)
        if (cand.fp.path == p.file && cand.fp.rule_id == p.rule) lc = &cand;
      const std::string tag = "repo " + str((long)trial) + " " + p.file;
      if (!lc) return tag + ": lifecycle not found";

      auto expected_id = [&](int commit) {
        const Author& a = authors[commit_author[commit]];
        return a.email == kInstructor.email ? std::string(kTemplateAuthor)
                                            : a.email;
      };
      const std::string want_intro = expected_id(p.intro);
      if (lc->introduced_by != want_intro)
        return tag + ": introduced_by " + lc->introduced_by + " want " +
               want_intro;
      const bool fixed = p.fix >= 0;
      if (lc->fixed != fixed) return tag + ": fixed flag mismatch";
      if (fixed) {
        const std::string want_fix = expected_id(p.fix);
        if (lc->fixed_by != want_fix)
          return tag + ": fixed_by " + lc->fixed_by + " want " + want_fix;
        const bool want_same = want_intro == want_fix &&
                               want_intro != kTemplateAuthor;
        if (lc->same_fixer != want_same) return tag + ": same_fixer mismatch";
      }
      const long want_commits = fixed ? p.fix - p.intro : n - p.intro;
      if (lc->alive_commit_count != want_commits)
        return tag + ": alive commits " + str(lc->alive_commit_count) +
               " want " + str(want_commits);
      const std::int64_t t_end = fixed ? ts[p.fix] : ts[n - 1];
      const double want_days =
          static_cast<double>(t_end - ts[p.intro]) / 86400.0;
      if (lc->alive_days != want_days)
        return tag + ": alive days " + str(lc->alive_days) + " want " +
               str(want_days);
      ++issues_checked;
    }
    g_mined.push_back(std::move(mined));
  }

  double secs = elapsed_s(t0);
  if (secs >= 60.0)
    return str((long)kRepos) + " repos took " + str(secs) + "s";
  if (issues_checked == 0) return "no issues were generated";
  return "";
}

// ---------------------------------------------------------------------------
// 4. Occurrence never exceeds total, and the stored totals agree with an
//    independent recount from lifecycle presence sets.
std::string criterion_metric_conservation() {
  if (g_mined.empty()) {
    FixtureRepo repo;
    small_history(repo, kAlice, kBob);
    MineOptions mo;
    mo.use_external = false;
    mo.parallel = false;
    g_mined.push_back(mine_repository(repo.path(), mo));
  }
  for (const MineResult& m : g_mined) {
    std::map<std::string, long> total_from_lifecycles;
    std::map<std::string, std::set<std::string>> fps_per_rule;
    for (const IssueLifecycle& lc : m.lifecycles) {
      total_from_lifecycles[lc.fp.rule_id] +=
          static_cast<long>(lc.present_in.size());
      fps_per_rule[lc.fp.rule_id].insert(lc.fp.key());
    }
    for (const auto& [rule, total] : m.metrics.total) {
      auto occ = m.metrics.occurrence.find(rule);
      if (occ == m.metrics.occurrence.end())
        return m.repo_name + ": rule " + rule + " has total but no occurrence";
      if (occ->second > total)
        return m.repo_name + ": " + rule + " occurrence " + str(occ->second) +
               " > total " + str(total);
      if (total_from_lifecycles[rule] != total)
        return m.repo_name + ": " + rule + " total " + str(total) +
               " != presence recount " + str(total_from_lifecycles[rule]);
      if (static_cast<long>(fps_per_rule[rule].size()) != occ->second)
        return m.repo_name + ": " + rule + " occurrence " + str(occ->second) +
               " != distinct fingerprints " +
               str((long)fps_per_rule[rule].size());
    }
    if (m.metrics.occurrence.size() != m.metrics.total.size())
      return m.repo_name + ": occurrence/total key sets differ";
  }
  return "";
}

// ---------------------------------------------------------------------------
// 5. Rank test against a permutation-enumeration oracle, correlation against
//    the closed-form sums, plus symmetry and rank-invariance properties.
double pairwise_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

double exact_p_oracle(const std::vector<double>& a,
                      const std::vector<double>& b) {
  std::vector<double> pool(a);
  pool.insert(pool.end(), b.begin(), b.end());
  const std::size_t n1 = a.size();
  const double u_obs = pairwise_u(a, b);
  std::vector<bool> mask(pool.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(n1), true);

  long count_le = 0, count_ge = 0, count_all = 0;
  do {
    std::vector<double> left, right;
    for (std::size_t i = 0; i < pool.size(); ++i)
      (mask[i] ? left : right).push_back(pool[i]);
    const double u = pairwise_u(left, right);
    if (u <= u_obs + 1e-9) ++count_le;
    if (u >= u_obs - 1e-9) ++count_ge;
    ++count_all;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  const double tail = static_cast<double>(std::min(count_le, count_ge)) /
                      static_cast<double>(count_all);
  return std::min(1.0, 2.0 * tail);
}

std::string criterion_statistics_oracles() {
  std::mt19937 rng(97531u);
  std::vector<double> deck(12);
  for (int i = 0; i < 12; ++i) deck[static_cast<std::size_t>(i)] = i + 1;

  for (int trial = 0; trial < 1000; ++trial) {
    const std::string tag = "trial " + str((long)trial);
    std::shuffle(deck.begin(), deck.end(), rng);
    const std::size_t n1 = 3 + rng() % 4;
    const std::size_t n2 = 3 + rng() % 4;
    std::vector<double> a(deck.begin(), deck.begin() + static_cast<long>(n1));
    std::vector<double> b(deck.begin() + static_cast<long>(n1),
                          deck.begin() + static_cast<long>(n1 + n2));

    TestResult ex = mann_whitney_u(a, b);
    if (ex.method != "exact") return tag + ": expected exact method";
    const double oracle = exact_p_oracle(a, b);
    if (std::fabs(ex.p_value - oracle) > 1e-12)
      return tag + ": exact p " + str(ex.p_value) + " vs oracle " + str(oracle);

    TestResult ap = mann_whitney_u(a, b, UMethod::approx);
    if (ap.method != "normal-approximation")
      return tag + ": expected approximation method";
    if (std::fabs(ap.p_value - oracle) > 0.05)
      return tag + ": approx p " + str(ap.p_value) + " vs oracle " +
             str(oracle);

    TestResult rev = mann_whitney_u(b, a);
    if (std::fabs(ex.statistic + rev.statistic -
                  static_cast<double>(n1 * n2)) > 1e-12)
      return tag + ": U(a,b)+U(b,a) != n1*n2";
    if (std::fabs(ex.p_value - rev.p_value) > 1e-12)
      return tag + ": p not symmetric under sample swap";

    std::vector<double> a3(a), b3(b);
    for (double& v : a3) v = v * v * v;
    for (double& v : b3) v = v * v * v;
    TestResult mono = mann_whitney_u(a3, b3);
    if (mono.statistic != ex.statistic ||
        std::fabs(mono.p_value - ex.p_value) > 1e-12)
      return tag + ": not invariant under a monotone transform";

    const std::size_t np = 2 + rng() % 9;
    std::vector<double> x(np), y(np);
    do {
      for (double& v : x) v = static_cast<double>(rng() % 21);
    } while (*std::min_element(x.begin(), x.end()) ==
             *std::max_element(x.begin(), x.end()));
    do {
      for (double& v : y) v = static_cast<double>(rng() % 21);
    } while (*std::min_element(y.begin(), y.end()) ==
             *std::max_element(y.begin(), y.end()));
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < np; ++i) {
      sx += x[i];
      sy += y[i];
      sxy += static_cast<long double>(x[i]) * y[i];
      sxx += static_cast<long double>(x[i]) * x[i];
      syy += static_cast<long double>(y[i]) * y[i];
    }
    const long double ldn = static_cast<long double>(np);
    const double closed_form = static_cast<double>(
        (ldn * sxy - sx * sy) /
        std::sqrt((ldn * sxx - sx * sx) * (ldn * syy - sy * sy)));
    if (std::fabs(pearson(x, y) - closed_form) > 1e-12)
      return tag + ": pearson " + str(pearson(x, y)) + " vs closed form " +
             str(closed_form);
  }
  return "";
}

// ---------------------------------------------------------------------------
// 6. Dominant-share clustering at the documented boundary, and ownership
//    shares on a history with scripted line counts.
std::string criterion_clustering_and_ownership() {
  std::vector<GroupProfile> ps(3);
  ps[0].loc_shares = {{"a", 0.60}, {"b", 0.40}};
  ps[1].loc_shares = {{"a", 0.85}, {"b", 0.15}};
  ps[2].loc_shares = {{"a", 0.70}, {"b", 0.30}};
  cluster_groups(ps);
  if (ps[0].cluster != 0) return "(0.60,0.40) not in cluster 0";
  if (ps[1].cluster != 1) return "(0.85,0.15) not in cluster 1";
  if (ps[2].cluster != 0) return "(0.70,0.30) at the boundary not in cluster 0";

  FixtureRepo r;
  auto lines = [](const char* tag, int count) {
    std::string s;
    for (int i = 0; i < count; ++i)
      s += "// " + std::string(tag) + " " + std::to_string(i) + "\n";
    return s;
  };
  r.commit_file(kInstructor, kEpoch, "template.c", lines("boilerplate", 5));
  r.commit_file(kAlice, kEpoch + 3600, "alice.c", lines("driver", 6));
  r.commit_file(kBob, kEpoch + 7200, "bob.c", lines("board", 4));

  TemplatePolicy policy;
  policy.author_patterns = {"*staff*"};
  GitRepo repo(r.path(), AuthorMap{}, policy);
  std::map<std::string, double> shares = repo.loc_share();
  if (shares.count(kTemplateAuthor)) return "template lines not excluded";
  auto close = [](double got, double want) {
    return std::fabs(got - want) <= 1e-9;
  };
  if (!close(shares["alice@example.edu"], 0.6))
    return "alice share " + str(shares["alice@example.edu"]);
  if (!close(shares["bob@example.edu"], 0.4))
    return "bob share " + str(shares["bob@example.edu"]);
  return "";
}

// ---------------------------------------------------------------------------
// 7. A cohort scripted so critical issues get fixed promptly must report a
//    strictly lower mean commits-to-fix for the critical class, under the
//    default critical rule set.
void cohort_history(FixtureRepo& r, const Author& dev, const Author& partner) {
  std::int64_t t = kEpoch;
  FixtureRepo::Change c0;
  c0.files["crit.c"] = isr_flag_bug(0);
  c0.files["ext.c"] = "// calibration STUB_ZERODIV\n// boot table STUB_UNINIT\n";
  c0.files["slow.c"] = slow_isr_bug(0);
  c0.files["glob.c"] = "static int spare_cfg;\n";
  c0.message = "initial drop";
  r.commit(dev, t, c0);

  FixtureRepo::Change c1;
  c1.files["crit.c"] = isr_flag_fixed(0);
  c1.files["ext.c"] = "// calibration\n// boot table\n";
  c1.message = "hotfixes";
  r.commit(partner, t += 86400, c1);

  r.commit_file(dev, t += 86400, "log.c", "// bringup notes\n", "notes");
  r.commit_file(partner, t += 86400, "log.c", "// more notes\n", "notes");
  r.commit_file(dev, t += 86400, "slow.c", slow_isr_fixed(0), "trim isr");
  FixtureRepo::Change c5;
  c5.files["glob.c"] = std::nullopt;
  c5.message = "drop dead config";
  r.commit(partner, t += 86400, c5);
}

std::string criterion_critical_fix_ordering() {
  Author carol{"Carol Fox", "carol@example.edu"};
  Author dan{"Dan Poe", "dan@example.edu"};
  TempDir bin;
  const std::string analyzer = write_stub_analyzer(bin.path);

  CohortManifest manifest;
  std::vector<MineResult> mined;
  FixtureRepo repo1, repo2;
  cohort_history(repo1, kAlice, kBob);
  cohort_history(repo2, carol, dan);
  const FixtureRepo* repos[] = {&repo1, &repo2};
  const char* groups[] = {"g1", "g2"};
  for (int i = 0; i < 2; ++i) {
    MineOptions mo;
    mo.config.external.path = analyzer;
    mo.parallel = false;
    mined.push_back(mine_repository(repos[i]->path(), mo));
    RepoSpec spec;
    spec.path = repos[i]->path();
    spec.group_id = groups[i];
    spec.members = i == 0 ? std::vector<std::string>{kAlice.email, kBob.email}
                          : std::vector<std::string>{carol.email, dan.email};
    manifest.repos.push_back(std::move(spec));
  }

  CohortOptions co;
  co.critical_rules = RuleConfig{}.critical_rules;
  CohortReport rep =
      cohort_summary(manifest, mined, std::nullopt, std::nullopt, co);
  const json& r = rep.report;

  std::set<std::string> flagged;
  for (const auto& id : r["metadata"]["critical_rules"])
    flagged.insert(id.get<std::string>());
  const std::set<std::string> want = {"zerodivcond", "syntaxError",
                                      "uninitvar", "notVolatileVarIrs"};
  if (flagged != want) {
    std::string s = "critical set is {";
    for (const std::string& f : flagged) s += " " + f;
    return s + " }";
  }
  if (r["rules"]["notVolatileVarIrs"]["critical"] != true ||
      r["rules"]["zerodivcond"]["critical"] != true ||
      r["rules"]["slowIRS"]["critical"] != false)
    return "per-rule critical flags wrong";

  const json& by_crit = r["latency"]["by_criticality"];
  if (by_crit["critical"]["commits"]["n"].get<long>() == 0 ||
      by_crit["non_critical"]["commits"]["n"].get<long>() == 0)
    return "a criticality class has no fixed issues";
  const double crit_mean = by_crit["critical"]["commits"]["mean"].get<double>();
  const double noncrit_mean =
      by_crit["non_critical"]["commits"]["mean"].get<double>();
  if (!(crit_mean < noncrit_mean))
    return "critical mean " + str(crit_mean) + " not below non-critical " +
           str(noncrit_mean);
  return "";
}

// ---------------------------------------------------------------------------
// 8. Two consecutive cohort aggregations over identical inputs write
//    byte-identical report and figure files.
std::string criterion_report_determinism() {
  FixtureRepo repo1, repo2;
  small_history(repo1, kAlice, kBob);
  small_history(repo2, kBob, kAlice);

  TempDir work;
  json manifest;
  manifest["repos"] = json::array();
  manifest["repos"].push_back({{"path", repo1.path()}, {"group_id", "g1"}});
  manifest["repos"].push_back({{"path", repo2.path()}, {"group_id", "g2"}});
  const std::string manifest_path = work / "cohort.json";
  {
    std::ofstream out(manifest_path, std::ios::binary);
    out << manifest.dump(2) << "\n";
  }

  TempDir out;
  for (const FixtureRepo* r : {&repo1, &repo2}) {
    RunResult m = cli({"mine", r->path(), "--out", out.path, "--serial"});
    if (m.exit_code != 0) return "mine exit " + str((long)m.exit_code);
  }

  const char* files[] = {"report.json", "report.md", "fig_fix_latency.csv",
                         "fig_intro_removed.csv", "fig_day_hist.csv"};
  std::map<std::string, std::string> first;
  for (int round = 0; round < 2; ++round) {
    RunResult c = cli({"cohort", manifest_path, "--out", out.path});
    if (c.exit_code != 0)
      return "cohort run " + str((long)round) + " exit " + str((long)c.exit_code);
    for (const char* f : files) {
      std::string bytes = read_text_file(out / ("cohort/" + std::string(f)));
      if (round == 0)
        first[f] = std::move(bytes);
      else if (first[f] != bytes)
        return std::string(f) + " differs between consecutive runs";
    }
  }
  if (first["report.json"].empty()) return "report.json is empty";
  return "";
}

// ---------------------------------------------------------------------------
// 9. Normalized positions hit the interval endpoints exactly and clamp
//    against a configured project window.
IssueInstance make_instance(const std::string& rule, const std::string& file,
                            int line) {
  IssueInstance inst;
  inst.diag.rule_id = rule;
  inst.diag.path = file;
  inst.diag.line = line;
  inst.fp.rule_id = rule;
  inst.fp.path = file;
  inst.fp.context_hash = "ctx";
  return inst;
}

std::string criterion_normalization_endpoints() {
  const std::int64_t t0 = kEpoch, t1 = kEpoch + 43200, t2 = kEpoch + 86400;
  std::vector<CommitAnalysis> per_commit(3);
  std::vector<CommitRecord> commits(3);
  const std::int64_t ts[] = {t0, t1, t2};
  for (int i = 0; i < 3; ++i) {
    per_commit[i].index = i;
    per_commit[i].commit_hash = "c" + str((long)i);
    per_commit[i].timestamp = ts[i];
    commits[i].index = i;
    commits[i].hash = per_commit[i].commit_hash;
    commits[i].timestamp = ts[i];
  }
  IssueInstance x = make_instance("ruleA", "a.c", 1);
  IssueInstance y = make_instance("ruleB", "b.c", 1);
  per_commit[0].instances = {x};
  per_commit[1].instances = {x, y};
  per_commit[2].instances = {y};

  std::vector<IssueLifecycle> lcs = build_timelines(per_commit);
  if (lcs.size() != 2) return str((long)lcs.size()) + " lifecycles, want 2";
  normalize_lifecycles(lcs, commits, std::nullopt, std::nullopt);
  const IssueLifecycle& fixed_lc = lcs[0].fixed ? lcs[0] : lcs[1];
  const IssueLifecycle& open_lc = lcs[0].fixed ? lcs[1] : lcs[0];
  if (fixed_lc.norm_intro_commit != 0.0) return "first commit not 0.0";
  if (fixed_lc.norm_fix_commit != 1.0) return "last commit not 1.0";
  if (fixed_lc.norm_intro_day != 0.0 || fixed_lc.norm_fix_day != 1.0)
    return "day endpoints not 0.0/1.0";
  if (open_lc.norm_intro_commit != 0.5 || open_lc.norm_intro_day != 0.5)
    return "midpoint not 0.5";
  if (open_lc.norm_fix_commit != -1.0 || open_lc.norm_fix_day != -1.0)
    return "open issue fix position not -1";

  // A window inside the history clamps both ends: the introduction precedes
  // the start, the fix lands after the deadline.
  normalize_lifecycles(lcs, commits, std::optional<std::int64_t>(t0 + 30000),
                       std::optional<std::int64_t>(t0 + 60000));
  if (fixed_lc.norm_intro_day != 0.0)
    return "introduction before the window start not clamped to 0";
  if (fixed_lc.norm_fix_day != 1.0)
    return "fix after the deadline not clamped to 1";

  std::vector<CommitAnalysis> solo(1);
  solo[0].index = 0;
  solo[0].commit_hash = "c0";
  solo[0].timestamp = t0;
  solo[0].instances = {x};
  std::vector<CommitRecord> solo_commits(1);
  solo_commits[0].index = 0;
  solo_commits[0].hash = "c0";
  solo_commits[0].timestamp = t0;
  std::vector<IssueLifecycle> solo_lcs = build_timelines(solo);
  normalize_lifecycles(solo_lcs, solo_commits, std::nullopt, std::nullopt);
  if (solo_lcs.size() != 1) return "single-commit repo lifecycle count";
  if (solo_lcs[0].norm_intro_commit != 0.0 || solo_lcs[0].norm_intro_day != 0.0)
    return "single-commit positions not 0.0";
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::string (*run)();
  };
  const Criterion criteria[] = {
      {1, "embedded rules reproduce the reference snippet exactly",
       &criterion_snippet_exactness},
      {2, "external analyzer findings and explicit outage records",
       &criterion_external_analyzer},
      {3, "mined lifecycles match scripted ground truth",
       &criterion_lifecycle_ground_truth},
      {4, "occurrence and total metrics are conserved",
       &criterion_metric_conservation},
      {5, "rank and correlation statistics match oracles",
       &criterion_statistics_oracles},
      {6, "contribution clustering and ownership shares",
       &criterion_clustering_and_ownership},
      {7, "critical issues close faster in a scripted cohort",
       &criterion_critical_fix_ordering},
      {8, "repeated cohort runs are byte-identical",
       &criterion_report_determinism},
      {9, "normalized timeline endpoints and clamping",
       &criterion_normalization_endpoints},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string why;
    try {
      why = c.run();
    } catch (const std::exception& e) {
      why = std::string("unhandled exception: ") + e.what();
    }
    for (char& ch : why)
      if (ch == '\n') ch = ' ';
    if (why.empty()) {
      std::printf("PASS criterion %d: %s\n", c.id, c.name);
    } else {
      std::printf("FAIL criterion %d: %s (%s)\n", c.id, c.name, why.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
