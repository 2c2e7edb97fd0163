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

#ifndef EMBERMINE_STATS_HPP
#define EMBERMINE_STATS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace embermine {

enum class UMethod { automatic, exact, approx };

struct TestResult {
  double statistic = 0.0;  // U of the first sample
  double p_value = 1.0;    // two-sided
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::string method;  // "exact" | "normal-approximation"
};

// Mann-Whitney U via midrank sums. Exact p by permutation enumeration when
// n1+n2 <= 12 and tie-free (or when forced); otherwise normal approximation
// with tie and continuity corrections. Throws EmptySampleError.
TestResult mann_whitney_u(const std::vector<double>& a,
                          const std::vector<double>& b,
                          UMethod method = UMethod::automatic);

// Pearson r over centered two-pass sums. Throws ShapeError on length
// mismatch, DegenerateInput on n < 2 or zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Sample standard deviation (ddof = 1); 0.0 when n < 2.
double sample_sd(const std::vector<double>& v);
double mean(const std::vector<double>& v);

struct GroupProfile {
  std::string group_id;
  std::vector<std::string> members;       // exactly 2 when well-formed
  std::map<std::string, double> loc_shares;
  int cluster = -1;                       // set by cluster_groups
  double issue_occurrence_count = 0.0;
  std::map<std::string, double> lab_counts;  // author_id -> lab issue count
  std::optional<double> grade;
};

// Labels every profile: max share > boundary selects cluster 1, else 0.
// Shares must sum to 1 within 1e-6 (ShareError otherwise).
void cluster_groups(std::vector<GroupProfile>& profiles, double boundary = 0.70);

}  // namespace embermine

#endif  // EMBERMINE_STATS_HPP
