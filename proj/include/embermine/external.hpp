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

#ifndef EMBERMINE_EXTERNAL_HPP
#define EMBERMINE_EXTERNAL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embermine/diagnostic.hpp"
#include "embermine/rules.hpp"

namespace embermine {

struct ExternalConfig {
  std::string path;  // explicit executable; empty means discover
  std::vector<std::string> extra_args;
  int timeout_s = 120;
};

struct ExternalEntry {
  std::string rule_id;
  std::string path;
  int line = 0;
  std::string severity;
  std::string message;
};

struct ExternalReport {
  std::string tool;
  std::string version;
  std::vector<ExternalEntry> entries;
};

// Discovery order: cfg.path, then $EMBERMINE_EXTERNAL_PATH, then `cppcheck`
// on $PATH. Empty optional when nothing executable is found.
std::optional<std::string> resolve_external_path(const ExternalConfig& cfg);

// Parses the analyzer's version-2 XML results format. Throws
// ReportParseError naming a byte offset on malformed input.
ExternalReport parse_external_report(std::string_view xml_text);

// Runs the analyzer over every .c/.h file under tree_path (recursively,
// sorted relative paths). Throws AnalyzerUnavailable, AnalyzerTimeout,
// AnalyzerFailed, or ReportParseError.
ExternalReport run_external_analyzer(const std::string& tree_path,
                                     const ExternalConfig& cfg);

// One Diagnostic per entry, source=external, critical per cfg.
std::vector<Diagnostic> external_to_diagnostics(const ExternalReport& report,
                                                const RuleConfig& cfg);

}  // namespace embermine

#endif  // EMBERMINE_EXTERNAL_HPP
