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

#ifndef EMBERMINE_RULES_HPP
#define EMBERMINE_RULES_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "embermine/diagnostic.hpp"
#include "embermine/parser.hpp"
#include "embermine/source_model.hpp"

namespace embermine {

struct RuleConfig {
  std::set<std::string> slow_call_names = {"sleep_ms", "delay_ms", "delay_us",
                                           "printf",   "sprintf",  "snprintf",
                                           "scanf"};
  IsrConfig isr;
  bool allow_static_inline_in_headers = false;
  bool accept_pragma_once_as_guard = true;
  std::set<std::string> global_var_allowlist;
  // Rule ids whose diagnostics carry the critical flag. Mixes embedded and
  // external ids on purpose; external reports are normalized through the
  // same set.
  std::set<std::string> critical_rules = {"zerodivcond", "syntaxError",
                                          "uninitvar", "notVolatileVarIrs"};
};

struct RuleInfo {
  std::string id;
  std::string description;
  bool critical_default = false;
};

// The six embedded checks, in catalog order.
const std::vector<RuleInfo>& embedded_rule_catalog();

std::vector<Diagnostic> check_noIncludeGuard(const SourceModel& model,
                                             const RuleConfig& cfg);
std::vector<Diagnostic> check_cInHeadFile(const SourceModel& model,
                                          const RuleConfig& cfg);
std::vector<Diagnostic> check_slowIRS(const SourceModel& model,
                                      const std::set<std::string>& isrs,
                                      const RuleConfig& cfg);
std::vector<Diagnostic> check_notVolatileVarIrs(const SourceModel& model,
                                                const std::set<std::string>& isrs);
std::vector<Diagnostic> check_wrongUseOfVolatile(const SourceModel& model);
std::vector<Diagnostic> check_wrongUseGlobalVar(const SourceModel& model,
                                                const std::set<std::string>& isrs,
                                                const RuleConfig& cfg);

// Union of all applicable checks, sorted by (path, line, rule_id, symbol).
// Header-only checks fire only when model.path names a header.
std::vector<Diagnostic> run_embedded_rules(const SourceModel& model,
                                           const RuleConfig& cfg);

// Sets d.critical from cfg.critical_rules for every diagnostic.
void apply_critical_flags(std::vector<Diagnostic>& diags, const RuleConfig& cfg);

// Tokenize + parse + rules for one file; lexer and parser diagnostics are
// merged into the result. Never throws on malformed source.
std::vector<Diagnostic> analyze_source(std::string_view text,
                                       const std::string& path,
                                       const RuleConfig& cfg);

}  // namespace embermine

#endif  // EMBERMINE_RULES_HPP
