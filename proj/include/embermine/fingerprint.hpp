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

#ifndef EMBERMINE_FINGERPRINT_HPP
#define EMBERMINE_FINGERPRINT_HPP

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "embermine/diagnostic.hpp"
#include "embermine/token.hpp"

namespace embermine {

// Commit-stable identity of one diagnostic. Equal fingerprints across
// commits mean "the same issue on the same code"; the identity survives
// line shifts because the context hash ignores line numbers, comments, and
// preprocessor directives.
struct Fingerprint {
  std::string rule_id;
  std::string path;  // canonical (rename-followed) path
  std::string symbol;
  std::string context_hash;
  int ordinal = 0;

  std::string key() const {
    return rule_id + '|' + path + '|' + symbol + '|' + context_hash + '|' +
           std::to_string(ordinal);
  }
  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return std::tie(a.rule_id, a.path, a.symbol, a.context_hash, a.ordinal) ==
           std::tie(b.rule_id, b.path, b.symbol, b.context_hash, b.ordinal);
  }
  friend bool operator<(const Fingerprint& a, const Fingerprint& b) {
    return std::tie(a.rule_id, a.path, a.symbol, a.context_hash, a.ordinal) <
           std::tie(b.rule_id, b.path, b.symbol, b.context_hash, b.ordinal);
  }
};

// SHA-1 of the code tokens (comments and directives excluded) within two
// lines of `line`, joined by single spaces.
std::string context_hash_for_line(const std::vector<Token>& tokens, int line);

struct FingerprintedDiag {
  Diagnostic diag;
  Fingerprint fp;
};

// Fingerprints all diagnostics of one file. `tokens` may be null for
// diagnostics that do not map to a parsed file (the window hashes empty).
// Ordinals disambiguate identical (rule, symbol, context) identities in
// line order.
std::vector<FingerprintedDiag> fingerprint_file(
    const std::vector<Diagnostic>& diags, const std::vector<Token>* tokens,
    const std::string& canonical_path);

// Tracks each live path's first historical name across renames, so
// fingerprints keep their identity when files move.
class PathCanonicalizer {
 public:
  // Applies one commit's rename pairs (old -> new), resolving all olds
  // against the pre-commit state.
  void advance(const std::vector<std::pair<std::string, std::string>>& renames);

  // First historical name of a live path (the path itself when unrenamed).
  std::string lookup(const std::string& live_path) const;

  // Canonical names for a full set of live paths; when two live paths share
  // a first name, both fall back to their basenames.
  std::map<std::string, std::string> canonical_map(
      const std::vector<std::string>& live_paths) const;

  const std::map<std::string, std::string>& state() const { return first_name_; }
  void restore(std::map<std::string, std::string> state) {
    first_name_ = std::move(state);
  }

 private:
  std::map<std::string, std::string> first_name_;
};

std::string path_basename(const std::string& path);

}  // namespace embermine

#endif  // EMBERMINE_FINGERPRINT_HPP
