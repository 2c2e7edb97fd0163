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

#include "embermine/fingerprint.hpp"

#include <algorithm>

#include "embermine/hash.hpp"

namespace embermine {

std::string path_basename(const std::string& path) {
  std::size_t slash = path.rfind('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string context_hash_for_line(const std::vector<Token>& tokens, int line) {
  std::string window;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Comment || t.kind == TokenKind::Directive)
      continue;
    if (t.line < line - 2 || t.line > line + 2) continue;
    if (!window.empty()) window.push_back(' ');
    window += t.text;
  }
  return sha1_hex(window);
}

std::vector<FingerprintedDiag> fingerprint_file(
    const std::vector<Diagnostic>& diags, const std::vector<Token>* tokens,
    const std::string& canonical_path) {
  std::vector<FingerprintedDiag> out;
  out.reserve(diags.size());
  static const std::vector<Token> kNoTokens;
  const std::vector<Token>& toks = tokens ? *tokens : kNoTokens;

  for (const Diagnostic& d : diags) {
    FingerprintedDiag fd;
    fd.diag = d;
    fd.fp.rule_id = d.rule_id;
    fd.fp.path = canonical_path;
    fd.fp.symbol = d.symbol;
    fd.fp.context_hash = context_hash_for_line(toks, d.line);
    out.push_back(std::move(fd));
  }

  // Ordinals in line order within each identical identity.
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out[a].diag.line < out[b].diag.line;
  });
  std::map<std::tuple<std::string, std::string, std::string>, int> seen;
  for (std::size_t i : order) {
    auto key = std::make_tuple(out[i].fp.rule_id, out[i].fp.symbol,
                               out[i].fp.context_hash);
    out[i].fp.ordinal = seen[key]++;
  }
  std::sort(out.begin(), out.end(),
            [](const FingerprintedDiag& a, const FingerprintedDiag& b) {
              if (!(a.fp == b.fp)) return a.fp < b.fp;
              return diag_less(a.diag, b.diag);
            });
  return out;
}

void PathCanonicalizer::advance(
    const std::vector<std::pair<std::string, std::string>>& renames) {
  if (renames.empty()) return;
  std::vector<std::pair<std::string, std::string>> resolved;  // new -> first
  resolved.reserve(renames.size());
  for (const auto& [oldp, newp] : renames) {
    auto it = first_name_.find(oldp);
    resolved.emplace_back(newp, it == first_name_.end() ? oldp : it->second);
  }
  for (const auto& [oldp, newp] : renames) first_name_.erase(oldp);
  for (auto& [newp, first] : resolved) first_name_[newp] = std::move(first);
}

std::string PathCanonicalizer::lookup(const std::string& live_path) const {
  auto it = first_name_.find(live_path);
  return it == first_name_.end() ? live_path : it->second;
}

std::map<std::string, std::string> PathCanonicalizer::canonical_map(
    const std::vector<std::string>& live_paths) const {
  std::map<std::string, std::string> canon;
  std::map<std::string, int> uses;
  for (const std::string& p : live_paths) {
    canon[p] = lookup(p);
    ++uses[canon[p]];
  }
  for (auto& [live, c] : canon) {
    if (uses[c] > 1) c = path_basename(live);
  }
  return canon;
}

}  // namespace embermine
