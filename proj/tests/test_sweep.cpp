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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "embermine/gitrepo.hpp"
#include "embermine/lifecycle.hpp"
#include "embermine/sweep.hpp"
#include "support/fixture_repo.hpp"
#include "support/stub_analyzer.hpp"
#include "support/temp_dir.hpp"

using namespace embermine;
using namespace embermine::testing;

namespace {

// Sources with diagnostic sets known by construction.
const char kIsrBug[] =
    "int flag = 0;\n"
    "\n"
    "void GPIO_Handler(void) {\n"
    "  flag = 1;\n"
    "}\n"
    "\n"
    "int main(void) {\n"
    "  while (1) {\n"
    "    if (flag) {\n"
    "      flag = 0;\n"
    "    }\n"
    "  }\n"
    "  return 0;\n"
    "}\n";

const char kIsrFixed[] =
    "volatile int flag = 0;\n"
    "\n"
    "void GPIO_Handler(void) {\n"
    "  flag = 1;\n"
    "}\n"
    "\n"
    "int main(void) {\n"
    "  while (1) {\n"
    "    if (flag) {\n"
    "      flag = 0;\n"
    "    }\n"
    "  }\n"
    "  return 0;\n"
    "}\n";

const char kSlowIsr[] =
    "void TIMER_IRQHandler(void) {\n"
    "  sleep_ms(10);\n"
    "}\n";

void check_same_result(const SweepResult& a, const SweepResult& b) {
  CHECK(a.external_used == b.external_used);
  CHECK(a.analyzer_tool == b.analyzer_tool);
  CHECK(a.analyzer_version == b.analyzer_version);
  REQUIRE(a.repo_failures.size() == b.repo_failures.size());
  for (std::size_t i = 0; i < a.repo_failures.size(); ++i)
    CHECK(a.repo_failures[i].kind == b.repo_failures[i].kind);
  REQUIRE(a.per_commit.size() == b.per_commit.size());
  for (std::size_t i = 0; i < a.per_commit.size(); ++i) {
    const CommitAnalysis& ca = a.per_commit[i];
    const CommitAnalysis& cb = b.per_commit[i];
    CHECK(ca.index == cb.index);
    CHECK(ca.commit_hash == cb.commit_hash);
    CHECK(ca.timestamp == cb.timestamp);
    REQUIRE(ca.instances.size() == cb.instances.size());
    for (std::size_t k = 0; k < ca.instances.size(); ++k) {
      CHECK(ca.instances[k].fp == cb.instances[k].fp);
      CHECK(ca.instances[k].diag == cb.instances[k].diag);
    }
    REQUIRE(ca.failures.size() == cb.failures.size());
    for (std::size_t k = 0; k < ca.failures.size(); ++k) {
      CHECK(ca.failures[k].kind == cb.failures[k].kind);
      CHECK(ca.failures[k].commit_hash == cb.failures[k].commit_hash);
    }
  }
}

}  // namespace

TEST_CASE("embedded-only sweep reproduces per-commit rule findings") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "main.c", kIsrBug, "introduce");
  r.commit_file(kBob, kEpoch + 86400, "main.c", kIsrFixed, "make volatile");
  FixtureRepo::Change add;
  add.files["util.c"] = kSlowIsr;
  add.message = "busy wait";
  r.commit(kAlice, kEpoch + 2 * 86400, add);

  GitRepo repo(r.path());
  auto commits = repo.enumerate_commits();
  SweepOptions opts;
  opts.use_external = false;
  auto res = sweep_commits_serial(repo, commits, opts);

  CHECK_FALSE(res.external_used);
  CHECK(res.analyzer_tool.empty());
  CHECK(res.repo_failures.empty());
  REQUIRE(res.per_commit.size() == 3);
  for (const auto& ca : res.per_commit) CHECK(ca.failures.empty());

  REQUIRE(res.per_commit[0].instances.size() == 1);
  CHECK(res.per_commit[0].instances[0].diag.rule_id == "notVolatileVarIrs");
  CHECK(res.per_commit[0].instances[0].diag.line == 1);
  CHECK(res.per_commit[0].instances[0].diag.critical);
  CHECK_FALSE(res.per_commit[0].instances[0].fp.context_hash.empty());

  CHECK(res.per_commit[1].instances.empty());

  REQUIRE(res.per_commit[2].instances.size() == 1);
  CHECK(res.per_commit[2].instances[0].diag.rule_id == "slowIRS");
  CHECK(res.per_commit[2].instances[0].diag.path == "util.c");
}

TEST_CASE("fingerprints keep their identity across a rename") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "blinky.c", kSlowIsr, "introduce");
  FixtureRepo::Change mv;
  mv.moves.push_back({"blinky.c", "led.c"});
  mv.message = "rename";
  r.commit(kBob, kEpoch + 100, mv);
  FixtureRepo::Change fix;
  fix.files["led.c"] = "void TIMER_IRQHandler(void) {\n}\n";
  fix.message = "drop delay";
  r.commit(kAlice, kEpoch + 200, fix);

  GitRepo repo(r.path());
  auto commits = repo.enumerate_commits();
  SweepOptions opts;
  opts.use_external = false;
  auto res = sweep_commits_serial(repo, commits, opts);
  REQUIRE(res.per_commit.size() == 3);
  REQUIRE(res.per_commit[0].instances.size() == 1);
  REQUIRE(res.per_commit[1].instances.size() == 1);
  CHECK(res.per_commit[2].instances.empty());

  const auto& at0 = res.per_commit[0].instances[0];
  const auto& at1 = res.per_commit[1].instances[0];
  CHECK(at0.fp == at1.fp);  // identity survives the move
  CHECK(at0.fp.path == "blinky.c");
  CHECK(at0.diag.path == "blinky.c");
  CHECK(at1.diag.path == "led.c");  // diagnostics keep the live path

  auto lcs = build_timelines(res.per_commit);
  REQUIRE(lcs.size() == 1);
  CHECK(lcs[0].introduced_index == 0);
  CHECK(lcs[0].fixed);
  CHECK(lcs[0].fixed_index == 2);
}

TEST_CASE("serial and parallel sweeps return identical results") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "main.c", kIsrBug, "start");
  r.commit_file(kBob, kEpoch + 1000, "tone.c",
                "void tone(int f) {\n  int p = 1 / f; /* STUB_ZERODIV */\n  (void)p;\n}\n",
                "tone");
  FixtureRepo::Change mv;
  mv.moves.push_back({"tone.c", "buzzer.c"});
  r.commit(kAlice, kEpoch + 2000, mv);
  r.commit_file(kBob, kEpoch + 3000, "main.c", kIsrFixed, "volatile");
  r.commit_file(kAlice, kEpoch + 4000, "util.c", kSlowIsr, "busy wait");
  FixtureRepo::Change del;
  del.files["buzzer.c"] = std::nullopt;
  r.commit(kBob, kEpoch + 5000, del);
  r.commit_file(kAlice, kEpoch + 6000, "util.c",
                "void TIMER_IRQHandler(void) {\n}\n", "fix isr");
  r.commit_file(kBob, kEpoch + 7000, "extra.c", "int unused_thing;\n", "extra");

  TempDir bin;
  SweepOptions opts;
  opts.external.path = write_stub_analyzer(bin.path);
  opts.jobs = 4;

  GitRepo repo(r.path());
  auto commits = repo.enumerate_commits();
  auto serial = sweep_commits_serial(repo, commits, opts);
  auto parallel = sweep_commits_parallel(repo, commits, opts);
  check_same_result(serial, parallel);

  CHECK(serial.external_used);
  CHECK(serial.analyzer_tool == "cppcheck");
  CHECK(serial.analyzer_version == "stubcheck 2.0");
  // The marker file carries the external finding while it exists.
  bool saw_external = false;
  for (const auto& inst : serial.per_commit[1].instances)
    saw_external |= inst.diag.rule_id == "zerodivcond";
  CHECK(saw_external);
}

TEST_CASE("cached commits are reused instead of reanalyzed") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "a.c", "int x = 1; /* STUB_ZERODIV */\n");
  r.commit_file(kBob, kEpoch + 100, "a.c", "int x = 2;\n");

  TempDir bin;
  TempDir cache;
  SweepOptions opts;
  opts.external.path = write_stub_analyzer(bin.path);
  opts.cache_dir = cache.path;

  GitRepo repo(r.path());
  auto commits = repo.enumerate_commits();
  auto count_external = [](const CommitAnalysis& ca) {
    std::size_t n = 0;
    for (const auto& i : ca.instances) n += i.diag.rule_id == "zerodivcond";
    return n;
  };
  auto first = sweep_commits_serial(repo, commits, opts);
  REQUIRE(first.per_commit.size() == 2);
  // x is also a never-used global, so the external finding rides along with
  // one embedded diagnostic.
  CHECK(first.per_commit[0].instances.size() == 2);
  CHECK(count_external(first.per_commit[0]) == 1);

  std::size_t cached_files = 0;
  for (const auto& e : std::filesystem::directory_iterator(cache.path))
    cached_files += e.is_regular_file() ? 1 : 0;
  CHECK(cached_files == 2);

  // Neuter the analyzer: same version, no findings. A cache hit keeps the
  // original findings; a reanalysis would lose them.
  {
    std::ofstream out(opts.external.path, std::ios::trunc);
    out << "#!/bin/sh\n"
           "if [ \"$1\" = \"--version\" ]; then echo \"stubcheck 2.0\"; exit 0; fi\n"
           "printf '<?xml version=\"1.0\"?><results version=\"2\">"
           "<cppcheck version=\"stubcheck 2.0\"/><errors></errors></results>' 1>&2\n"
           "exit 0\n";
  }
  auto second = sweep_commits_serial(repo, commits, opts);
  check_same_result(first, second);
  CHECK(count_external(second.per_commit[0]) == 1);

  SUBCASE("disabling the cache reanalyzes") {
    SweepOptions no_cache = opts;
    no_cache.cache_dir.clear();
    auto fresh = sweep_commits_serial(repo, commits, no_cache);
    CHECK(count_external(fresh.per_commit[0]) == 0);
    CHECK(fresh.per_commit[0].instances.size() == 1);  // embedded one remains
  }
}

TEST_CASE("offline reports feed the sweep without running the analyzer") {
  FixtureRepo r;
  std::string c0 = r.commit_file(kAlice, kEpoch, "main.c", kIsrFixed);
  std::string c1 = r.commit_file(kBob, kEpoch + 100, "main.c", kIsrFixed,
                                 "touch nothing c-visible");

  TempDir reports;
  {
    std::ofstream out(reports / (c0 + ".xml"));
    out << "<results version=\"2\"><cppcheck version=\"offline 1.0\"/><errors>"
           "<error id=\"uninitvar\" severity=\"error\" msg=\"m\">"
           "<location file=\"main.c\" line=\"1\"/></error>"
           "</errors></results>";
  }

  SweepOptions opts;
  opts.external_reports_dir = reports.path;

  GitRepo repo(r.path());
  auto commits = repo.enumerate_commits();
  auto res = sweep_commits_serial(repo, commits, opts);
  CHECK(res.external_used);
  CHECK(res.analyzer_tool == "cppcheck");
  CHECK(res.analyzer_version == "offline 1.0");

  REQUIRE(res.per_commit.size() == 2);
  REQUIRE(res.per_commit[0].instances.size() == 1);
  const auto& inst = res.per_commit[0].instances[0];
  CHECK(inst.diag.rule_id == "uninitvar");
  CHECK(inst.diag.source == DiagSource::External);
  CHECK(inst.diag.critical);
  CHECK(inst.fp.path == "main.c");
  CHECK(res.per_commit[0].failures.empty());

  REQUIRE(res.per_commit[1].failures.size() == 1);
  CHECK(res.per_commit[1].failures[0].kind == "ReportMissing");
  CHECK(res.per_commit[1].instances.empty());  // embedded rules stay quiet here
}

TEST_CASE("an unavailable analyzer degrades to embedded-only with a repo failure") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "main.c", kIsrBug);

  SweepOptions opts;
  opts.external.path = "/nonexistent/analyzer";

  GitRepo repo(r.path());
  auto res = sweep_commits_serial(repo, repo.enumerate_commits(), opts);
  CHECK_FALSE(res.external_used);
  REQUIRE(res.repo_failures.size() == 1);
  CHECK(res.repo_failures[0].kind == "AnalyzerUnavailable");
  CHECK(res.repo_failures[0].commit_hash.empty());
  REQUIRE(res.per_commit.size() == 1);
  REQUIRE(res.per_commit[0].instances.size() == 1);
  CHECK(res.per_commit[0].instances[0].diag.rule_id == "notVolatileVarIrs");
}

TEST_CASE("a crash at one commit leaves the others intact") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "a.c", "int a; /* STUB_ZERODIV */\n");
  r.commit_file(kBob, kEpoch + 100, "b.c", "int b; /* STUB_CRASH */\n");
  r.commit_file(kAlice, kEpoch + 200, "b.c", "int b;\n", "calm down");

  TempDir bin;
  SweepOptions opts;
  opts.external.path = write_flaky_stub_analyzer(bin.path);

  GitRepo repo(r.path());
  auto res = sweep_commits_serial(repo, repo.enumerate_commits(), opts);
  REQUIRE(res.per_commit.size() == 3);

  CHECK(res.per_commit[0].failures.empty());
  bool saw_zerodiv = false;
  for (const auto& i : res.per_commit[0].instances)
    saw_zerodiv |= i.diag.rule_id == "zerodivcond";
  CHECK(saw_zerodiv);

  REQUIRE(res.per_commit[1].failures.size() == 1);
  CHECK(res.per_commit[1].failures[0].kind == "AnalyzerFailed");
  CHECK(res.per_commit[1].failures[0].commit_hash ==
        res.per_commit[1].commit_hash);
  // Embedded findings survive the analyzer crash: both files still carry
  // their never-used globals.
  CHECK(res.per_commit[1].instances.size() == 2);

  CHECK(res.per_commit[2].failures.empty());
}

TEST_CASE("a hang at one commit becomes a timeout failure") {
  FixtureRepo r;
  r.commit_file(kAlice, kEpoch, "a.c", "int a;\n");
  r.commit_file(kBob, kEpoch + 100, "a.c", "int a; /* STUB_SLOW */\n");

  TempDir bin;
  SweepOptions opts;
  opts.external.path = write_slow_stub_analyzer(bin.path, 30);
  opts.external.timeout_s = 1;

  GitRepo repo(r.path());
  auto res = sweep_commits_serial(repo, repo.enumerate_commits(), opts);
  REQUIRE(res.per_commit.size() == 2);
  CHECK(res.per_commit[0].failures.empty());
  REQUIRE(res.per_commit[1].failures.size() == 1);
  CHECK(res.per_commit[1].failures[0].kind == "AnalyzerTimeout");
  CHECK(res.per_commit[1].failures[0].detail.find("/tmp") == std::string::npos);
}
