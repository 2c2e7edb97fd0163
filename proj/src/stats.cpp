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

#include "embermine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embermine/errors.hpp"

namespace embermine {

namespace {

// Midranks of the pooled sample, 1-based.
std::vector<double> midranks(const std::vector<double>& pooled, bool* has_ties) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n, 0.0);
  *has_ties = false;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    if (j > i) *has_ties = true;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double u_from_rank_sum(double r1, std::size_t n1) {
  return r1 - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
}

// Exact two-sided p over all C(N, n1) assignments of pooled ranks.
double exact_p(const std::vector<double>& ranks, std::size_t n1, double u_obs) {
  const std::size_t n = ranks.size();
  std::vector<std::size_t> idx(n1);
  std::iota(idx.begin(), idx.end(), 0);
  unsigned long long count_le = 0, count_ge = 0, count_all = 0;
  const double eps = 1e-9;
  for (;;) {
    double r1 = 0.0;
    for (std::size_t k : idx) r1 += ranks[k];
    double u = u_from_rank_sum(r1, n1);
    ++count_all;
    if (u <= u_obs + eps) ++count_le;
    if (u >= u_obs - eps) ++count_ge;
    // Advance to the next combination in lexicographic order.
    std::size_t pos = n1;
    while (pos > 0 && idx[pos - 1] == n - n1 + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < n1; ++k) idx[k] = idx[k - 1] + 1;
  }
  double tail = static_cast<double>(std::min(count_le, count_ge)) /
                static_cast<double>(count_all);
  return std::min(1.0, 2.0 * tail);
}

}  // namespace

TestResult mann_whitney_u(const std::vector<double>& a,
                          const std::vector<double>& b, UMethod method) {
  if (a.empty() || b.empty())
    throw EmptySampleError("mann_whitney_u requires two non-empty samples");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  bool ties = false;
  std::vector<double> ranks = midranks(pooled, &ties);

  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  double u = u_from_rank_sum(r1, n1);

  TestResult res;
  res.statistic = u;
  res.n1 = n1;
  res.n2 = n2;

  bool use_exact = method == UMethod::exact ||
                   (method == UMethod::automatic && n <= 12 && !ties);
  if (use_exact) {
    if (n > 22)
      throw DegenerateInput("exact enumeration infeasible for n1+n2 = " +
                            std::to_string(n));
    res.method = "exact";
    res.p_value = exact_p(ranks, n1, u);
    return res;
  }

  res.method = "normal-approximation";
  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2),
               dn = static_cast<double>(n);
  double mu = dn1 * dn2 / 2.0;
  double tie_sum = 0.0;
  std::size_t i = 0;
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
  if (var <= 0.0 || u == mu) {
    res.p_value = 1.0;
    return res;
  }
  double z = (std::fabs(u - mu) - 0.5) / std::sqrt(var);
  if (z < 0.0) z = 0.0;
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ShapeError("pearson: samples have different lengths (" +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  if (x.size() < 2)
    throw DegenerateInput("pearson requires at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInput("pearson: zero variance in a sample");
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void cluster_groups(std::vector<GroupProfile>& profiles, double boundary) {
  for (GroupProfile& g : profiles) {
    double sum = 0.0, max_share = 0.0;
    for (const auto& [who, share] : g.loc_shares) {
      sum += share;
      max_share = std::max(max_share, share);
    }
    if (std::fabs(sum - 1.0) > 1e-6)
      throw ShareError("group '" + g.group_id + "' shares sum to " +
                       std::to_string(sum) + ", expected 1");
    g.cluster = max_share > boundary ? 1 : 0;
  }
}

}  // namespace embermine
