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

#include "embermine/lifecycle.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "embermine/errors.hpp"

namespace embermine {

namespace {

constexpr double kSecondsPerDay = 86400.0;

struct OpenState {
  std::size_t lifecycle;    // index into the result vector
  int gap_run = 0;          // consecutive absent commits so far
  int first_absent = -1;
};

}  // namespace

std::vector<IssueLifecycle> build_timelines(
    const std::vector<CommitAnalysis>& per_commit, int gap) {
  std::vector<IssueLifecycle> out;
  std::unordered_map<std::string, OpenState> open;

  auto close = [&](const std::string& key, OpenState& st) {
    IssueLifecycle& lc = out[st.lifecycle];
    lc.fixed = true;
    lc.fixed_index = st.first_absent;
    lc.fixed_hash = per_commit[static_cast<std::size_t>(st.first_absent)].commit_hash;
    (void)key;
  };

  for (const CommitAnalysis& ca : per_commit) {
    std::set<std::string> present;
    for (const IssueInstance& inst : ca.instances) {
      std::string key = inst.fp.key();
      if (!present.insert(key).second) continue;  // defensive dedup
      auto it = open.find(key);
      if (it != open.end()) {
        out[it->second.lifecycle].present_in.push_back(ca.index);
        it->second.gap_run = 0;
        it->second.first_absent = -1;
      } else {
        IssueLifecycle lc;
        lc.fp = inst.fp;
        lc.sample = inst.diag;
        lc.introduced_index = ca.index;
        lc.introduced_hash = ca.commit_hash;
        lc.present_in.push_back(ca.index);
        open[key] = OpenState{out.size(), 0, -1};
        out.push_back(std::move(lc));
      }
    }
    std::vector<std::string> to_close;
    for (auto& [key, st] : open) {
      if (present.count(key)) continue;
      if (st.gap_run == 0) st.first_absent = ca.index;
      ++st.gap_run;
      if (st.gap_run > gap) {
        close(key, st);
        to_close.push_back(key);
      }
    }
    for (const std::string& key : to_close) open.erase(key);
  }
  // Issues absent at the end of history are fixed even when the absence run
  // never exceeded the gap tolerance.
  for (auto& [key, st] : open) {
    if (st.gap_run > 0) close(key, st);
  }

  const std::size_t n = per_commit.size();
  for (IssueLifecycle& lc : out) {
    std::int64_t t_intro =
        per_commit[static_cast<std::size_t>(lc.introduced_index)].timestamp;
    if (lc.fixed) {
      lc.alive_commit_count = lc.fixed_index - lc.introduced_index;
      std::int64_t t_fix =
          per_commit[static_cast<std::size_t>(lc.fixed_index)].timestamp;
      lc.alive_days = static_cast<double>(t_fix - t_intro) / kSecondsPerDay;
    } else {
      lc.alive_commit_count = static_cast<long>(lc.present_in.size());
      std::int64_t t_end = n > 0 ? per_commit[n - 1].timestamp : t_intro;
      lc.alive_days = static_cast<double>(t_end - t_intro) / kSecondsPerDay;
    }
  }

  std::sort(out.begin(), out.end(),
            [](const IssueLifecycle& a, const IssueLifecycle& b) {
              if (a.introduced_index != b.introduced_index)
                return a.introduced_index < b.introduced_index;
              return a.fp < b.fp;
            });
  return out;
}

void attribute_lifecycles(std::vector<IssueLifecycle>& lifecycles,
                          const GitRepo& repo,
                          const std::vector<CommitRecord>& commits) {
  for (IssueLifecycle& lc : lifecycles) {
    try {
      BlameInfo bi =
          repo.blame_line(lc.introduced_hash, lc.sample.path, lc.sample.line);
      lc.introduced_by = bi.author_id;
      lc.introduced_origin = bi.origin_commit;
      lc.attribution_status = "ok";
    } catch (const Error&) {
      lc.introduced_by = kUnknownAuthor;
      lc.introduced_origin.clear();
      lc.attribution_status = "unknown";
    }
    if (lc.fixed) {
      const CommitRecord& fc = commits[static_cast<std::size_t>(lc.fixed_index)];
      lc.fixed_by = fc.is_template ? kTemplateAuthor : fc.author_id;
      lc.same_fixer = lc.introduced_by == lc.fixed_by &&
                      lc.introduced_by != kTemplateAuthor &&
                      lc.introduced_by != kUnknownAuthor;
    }
  }

  // direct_fix: replay renames so the fix commit's touched paths can be
  // compared against the fingerprint's canonical path.
  std::map<int, std::vector<std::size_t>> by_fix_index;
  for (std::size_t i = 0; i < lifecycles.size(); ++i) {
    if (lifecycles[i].fixed) by_fix_index[lifecycles[i].fixed_index].push_back(i);
  }
  PathCanonicalizer canon;
  for (const CommitRecord& c : commits) {
    canon.advance(c.renames);
    auto it = by_fix_index.find(c.index);
    if (it == by_fix_index.end()) continue;
    for (std::size_t li : it->second) {
      IssueLifecycle& lc = lifecycles[li];
      bool touched = false;
      for (const std::string& p : c.changed_paths) {
        if (p == lc.sample.path || canon.lookup(p) == lc.fp.path ||
            path_basename(p) == lc.fp.path) {
          touched = true;
          break;
        }
      }
      lc.direct_fix = touched;
    }
  }
}

void normalize_lifecycles(std::vector<IssueLifecycle>& lifecycles,
                          const std::vector<CommitRecord>& commits,
                          std::optional<std::int64_t> start_epoch,
                          std::optional<std::int64_t> deadline_epoch) {
  if (commits.empty()) return;
  const std::size_t n = commits.size();
  const std::int64_t t0 = commits.front().timestamp;
  const std::int64_t t_last = commits.back().timestamp;
  const std::int64_t start = start_epoch.value_or(t0);
  const std::int64_t deadline = deadline_epoch.value_or(t_last);
  const bool configured = start_epoch.has_value() || deadline_epoch.has_value();
  if (deadline <= start && configured)
    throw ConfigError("project deadline must be after the start date");
  const double span = static_cast<double>(deadline - start);

  auto norm_commit = [n](int idx) {
    return n > 1 ? static_cast<double>(idx) / static_cast<double>(n - 1) : 0.0;
  };
  auto norm_day = [&](std::int64_t t) {
    if (span <= 0.0) return 0.0;
    double v = static_cast<double>(t - start) / span;
    return std::clamp(v, 0.0, 1.0);
  };

  for (IssueLifecycle& lc : lifecycles) {
    lc.norm_intro_commit = norm_commit(lc.introduced_index);
    lc.norm_intro_day = norm_day(
        commits[static_cast<std::size_t>(lc.introduced_index)].timestamp);
    if (lc.fixed) {
      lc.norm_fix_commit = norm_commit(lc.fixed_index);
      lc.norm_fix_day =
          norm_day(commits[static_cast<std::size_t>(lc.fixed_index)].timestamp);
    } else {
      lc.norm_fix_commit = -1.0;
      lc.norm_fix_day = -1.0;
    }
  }
}

IssueMetrics compute_metrics(const std::vector<IssueLifecycle>& lifecycles,
                             const std::vector<CommitAnalysis>& per_commit) {
  IssueMetrics m;
  std::map<std::string, std::set<std::string>> distinct;
  std::map<std::string, long> from_presence;
  for (const IssueLifecycle& lc : lifecycles) {
    distinct[lc.fp.rule_id].insert(lc.fp.key());
    from_presence[lc.fp.rule_id] +=
        static_cast<long>(lc.present_in.size());
  }
  for (const auto& [rule, keys] : distinct)
    m.occurrence[rule] = static_cast<long>(keys.size());

  for (const CommitAnalysis& ca : per_commit)
    for (const IssueInstance& inst : ca.instances) ++m.total[inst.fp.rule_id];

  for (const auto& [rule, total] : m.total) {
    long presence = from_presence.count(rule) ? from_presence[rule] : 0;
    if (presence != total)
      throw ShapeError("issue count conservation violated for rule '" + rule +
                       "': " + std::to_string(total) + " instances vs " +
                       std::to_string(presence) + " from presence sets");
  }
  for (const auto& [rule, presence] : from_presence) {
    if (!m.total.count(rule) && presence != 0)
      throw ShapeError("issue count conservation violated for rule '" + rule +
                       "': 0 instances vs " + std::to_string(presence) +
                       " from presence sets");
  }
  return m;
}

}  // namespace embermine
