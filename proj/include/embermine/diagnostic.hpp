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

#ifndef EMBERMINE_DIAGNOSTIC_HPP
#define EMBERMINE_DIAGNOSTIC_HPP

#include <string>
#include <tuple>

namespace embermine {

enum class DiagSource { Embedded, External };

// One rule violation at a source location. `severity` is only populated for
// external-analyzer findings; embedded rules leave it empty.
struct Diagnostic {
  std::string rule_id;
  std::string path;
  int line = 0;
  std::string symbol;
  std::string message;
  DiagSource source = DiagSource::Embedded;
  bool critical = false;
  std::string severity;

  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.rule_id == b.rule_id && a.path == b.path && a.line == b.line &&
           a.symbol == b.symbol && a.message == b.message &&
           a.source == b.source && a.critical == b.critical &&
           a.severity == b.severity;
  }
};

// Canonical report order: (path, line, rule_id), then symbol as tie-break.
inline bool diag_less(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.path, a.line, a.rule_id, a.symbol) <
         std::tie(b.path, b.line, b.rule_id, b.symbol);
}

inline const char* diag_source_name(DiagSource s) {
  return s == DiagSource::Embedded ? "embedded" : "external";
}

}  // namespace embermine

#endif  // EMBERMINE_DIAGNOSTIC_HPP
