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

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "embermine/errors.hpp"
#include "embermine/gitrepo.hpp"
#include "embermine/sweep.hpp"

using namespace embermine;

namespace {

bool results_match(const SweepResult& a, const SweepResult& b) {
  if (a.per_commit.size() != b.per_commit.size()) return false;
  for (std::size_t i = 0; i < a.per_commit.size(); ++i) {
    const CommitAnalysis& x = a.per_commit[i];
    const CommitAnalysis& y = b.per_commit[i];
    if (x.commit_hash != y.commit_hash) return false;
    if (x.instances.size() != y.instances.size()) return false;
    for (std::size_t k = 0; k < x.instances.size(); ++k) {
      if (!(x.instances[k].fp == y.instances[k].fp)) return false;
      if (!(x.instances[k].diag == y.instances[k].diag)) return false;
    }
    if (x.failures.size() != y.failures.size()) return false;
    for (std::size_t k = 0; k < x.failures.size(); ++k)
      if (x.failures[k].kind != y.failures[k].kind) return false;
  }
  return true;
}

double run_timed(SweepResult (*sweep)(const GitRepo&,
                                      const std::vector<CommitRecord>&,
                                      const SweepOptions&),
                 const GitRepo& repo, const std::vector<CommitRecord>& commits,
                 const SweepOptions& opts, SweepResult& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = sweep(repo, commits, opts);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compare the serial and parallel commit-sweep kernels"};
  std::string repo_path;
  int repeats = 3;
  int jobs = 0;
  bool with_external = false;
  app.add_option("repo", repo_path, "path to a git repository")->required();
  app.add_option("--repeats", repeats, "timed repetitions per kernel")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "parallel worker cap")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--external", with_external,
               "include the external analyzer in the sweep");
  CLI11_PARSE(app, argc, argv);

  try {
    GitRepo repo(repo_path);
    std::vector<CommitRecord> commits = repo.enumerate_commits();
    if (commits.empty()) {
      std::cerr << "bench_sweep: repository has no commits\n";
      return 2;
    }

    SweepOptions opts;
    opts.use_external = with_external;
    opts.jobs = jobs;
    // No cache: both kernels must do the full work every round.

    SweepResult serial, parallel;
    double serial_best = 0, parallel_best = 0;
    for (int r = 0; r < repeats; ++r) {
      double ms = run_timed(sweep_commits_serial, repo, commits, opts, serial);
      if (r == 0 || ms < serial_best) serial_best = ms;
    }
    for (int r = 0; r < repeats; ++r) {
      double ms =
          run_timed(sweep_commits_parallel, repo, commits, opts, parallel);
      if (r == 0 || ms < parallel_best) parallel_best = ms;
    }

    if (!results_match(serial, parallel)) {
      std::cerr << "bench_sweep: kernel results differ\n";
      return 1;
    }

    long instances = 0;
    for (const CommitAnalysis& ca : serial.per_commit)
      instances += static_cast<long>(ca.instances.size());

    std::cout << "commits:          " << commits.size() << "\n";
    std::cout << "issue instances:  " << instances << "\n";
    std::cout << "serial (best):    " << serial_best << " ms\n";
    std::cout << "parallel (best):  " << parallel_best << " ms\n";
    if (parallel_best > 0)
      std::cout << "speedup:          " << serial_best / parallel_best
                << "x\n";
    std::cout << "results identical: yes\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "bench_sweep: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  }
}
