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

#include "embermine/rules.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "embermine/lexer.hpp"

namespace embermine {

namespace {

Diagnostic make_diag(std::string rule, const std::string& path, int line,
                     std::string symbol, std::string message) {
  Diagnostic d;
  d.rule_id = std::move(rule);
  d.path = path;
  d.line = line;
  d.symbol = std::move(symbol);
  d.message = std::move(message);
  d.source = DiagSource::Embedded;
  return d;
}

// Names a function body touches that are not its own locals or parameters.
std::unordered_set<std::string> outer_accesses(const FunctionModel& fn) {
  std::unordered_set<std::string> own;
  for (const VarModel& v : fn.locals) own.insert(v.name);
  for (const VarModel& v : fn.params) own.insert(v.name);
  std::unordered_set<std::string> out;
  for (const AccessSite& a : fn.reads)
    if (!own.count(a.name)) out.insert(a.name);
  for (const AccessSite& a : fn.writes)
    if (!own.count(a.name)) out.insert(a.name);
  return out;
}

}  // namespace

const std::vector<RuleInfo>& embedded_rule_catalog() {
  static const std::vector<RuleInfo> catalog = {
      {"noIncludeGuard", "header file lacks an include guard", false},
      {"cInHeadFile", "function or variable definition inside a header file",
       false},
      {"slowIRS",
       "interrupt service routine performs slow work (delay, formatting, or a "
       "loop)",
       false},
      {"notVolatileVarIrs",
       "file-scope variable accessed from an interrupt handler is not "
       "declared volatile",
       true},
      {"wrongUseOfVolatile",
       "local variable or parameter needlessly declared volatile", false},
      {"wrongUseGlobalVar",
       "file-scope variable used by at most one function; scope can be "
       "narrowed",
       false},
  };
  return catalog;
}

std::vector<Diagnostic> check_noIncludeGuard(const SourceModel& model,
                                             const RuleConfig& cfg) {
  std::vector<Diagnostic> out;
  if (!model.is_header()) return out;
  bool guarded = model.guard.has_ifndef_define_pair ||
                 (cfg.accept_pragma_once_as_guard && model.guard.has_pragma_once);
  if (!guarded) {
    out.push_back(make_diag("noIncludeGuard", model.path, 1, "",
                            "header file has no include guard"));
  }
  return out;
}

std::vector<Diagnostic> check_cInHeadFile(const SourceModel& model,
                                          const RuleConfig& cfg) {
  std::vector<Diagnostic> out;
  if (!model.is_header()) return out;
  for (const FunctionModel& fn : model.functions) {
    if (!fn.is_definition) continue;
    if (cfg.allow_static_inline_in_headers && fn.is_static && fn.is_inline)
      continue;
    out.push_back(make_diag("cInHeadFile", model.path, fn.line, fn.name,
                            "function '" + fn.name + "' defined in header file"));
  }
  for (const VarModel& v : model.global_vars) {
    if (v.is_extern) continue;
    out.push_back(make_diag("cInHeadFile", model.path, v.line, v.name,
                            "variable '" + v.name + "' defined in header file"));
  }
  return out;
}

std::vector<Diagnostic> check_slowIRS(const SourceModel& model,
                                      const std::set<std::string>& isrs,
                                      const RuleConfig& cfg) {
  std::vector<Diagnostic> out;
  for (const FunctionModel& fn : model.functions) {
    if (!fn.is_definition || !isrs.count(fn.name)) continue;
    for (const CallSite& c : fn.calls) {
      if (!cfg.slow_call_names.count(c.callee)) continue;
      out.push_back(make_diag("slowIRS", model.path, c.line, c.callee,
                              "slow call '" + c.callee + "' inside interrupt "
                              "handler '" + fn.name + "'"));
    }
    for (const LoopSite& l : fn.loops) {
      out.push_back(make_diag("slowIRS", model.path, l.line, l.kind,
                              l.kind + " loop inside interrupt handler '" +
                                  fn.name + "'"));
    }
  }
  return out;
}

std::vector<Diagnostic> check_notVolatileVarIrs(const SourceModel& model,
                                                const std::set<std::string>& isrs) {
  std::unordered_set<std::string> touched;
  for (const FunctionModel& fn : model.functions) {
    if (!fn.is_definition || !isrs.count(fn.name)) continue;
    for (const std::string& name : outer_accesses(fn)) touched.insert(name);
  }
  std::vector<Diagnostic> out;
  std::unordered_set<std::string> flagged;
  for (const VarModel& v : model.global_vars) {
    if (v.is_volatile || !touched.count(v.name) || flagged.count(v.name))
      continue;
    flagged.insert(v.name);
    out.push_back(make_diag("notVolatileVarIrs", model.path, v.line, v.name,
                            "variable '" + v.name + "' is accessed from an "
                            "interrupt handler but is not volatile"));
  }
  return out;
}

std::vector<Diagnostic> check_wrongUseOfVolatile(const SourceModel& model) {
  std::vector<Diagnostic> out;
  auto flag = [&](const VarModel& v, const char* what) {
    out.push_back(make_diag("wrongUseOfVolatile", model.path, v.line, v.name,
                            std::string(what) + " '" + v.name +
                                "' declared volatile"));
  };
  for (const FunctionModel& fn : model.functions) {
    for (const VarModel& v : fn.params)
      if (v.is_volatile) flag(v, "parameter");
    for (const VarModel& v : fn.locals)
      if (v.is_volatile) flag(v, "local variable");
  }
  return out;
}

std::vector<Diagnostic> check_wrongUseGlobalVar(const SourceModel& model,
                                                const std::set<std::string>& isrs,
                                                const RuleConfig& cfg) {
  std::map<std::string, std::set<std::string>> users;  // var -> functions
  std::unordered_set<std::string> isr_touched;
  std::unordered_set<std::string> globals;
  for (const VarModel& v : model.global_vars) globals.insert(v.name);
  for (const FunctionModel& fn : model.functions) {
    if (!fn.is_definition) continue;
    for (const std::string& name : outer_accesses(fn)) {
      if (!globals.count(name)) continue;
      users[name].insert(fn.name);
      if (isrs.count(fn.name)) isr_touched.insert(name);
    }
  }
  std::vector<Diagnostic> out;
  std::unordered_set<std::string> flagged;
  for (const VarModel& v : model.global_vars) {
    if (v.is_const || v.is_extern) continue;
    if (cfg.global_var_allowlist.count(v.name)) continue;
    if (isr_touched.count(v.name)) continue;
    if (flagged.count(v.name)) continue;
    auto it = users.find(v.name);
    std::size_t n = it == users.end() ? 0 : it->second.size();
    if (n > 1) continue;
    flagged.insert(v.name);
    std::string msg =
        n == 0 ? "file-scope variable '" + v.name + "' is never used"
               : "file-scope variable '" + v.name + "' is only used in '" +
                     *it->second.begin() + "'; narrow its scope";
    out.push_back(
        make_diag("wrongUseGlobalVar", model.path, v.line, v.name, msg));
  }
  return out;
}

std::vector<Diagnostic> run_embedded_rules(const SourceModel& model,
                                           const RuleConfig& cfg) {
  std::set<std::string> isrs = classify_isr(model, cfg.isr);
  std::vector<Diagnostic> out;
  auto append = [&](std::vector<Diagnostic> v) {
    for (Diagnostic& d : v) out.push_back(std::move(d));
  };
  append(check_noIncludeGuard(model, cfg));
  append(check_cInHeadFile(model, cfg));
  append(check_slowIRS(model, isrs, cfg));
  append(check_notVolatileVarIrs(model, isrs));
  append(check_wrongUseOfVolatile(model));
  append(check_wrongUseGlobalVar(model, isrs, cfg));
  std::sort(out.begin(), out.end(), diag_less);
  return out;
}

void apply_critical_flags(std::vector<Diagnostic>& diags, const RuleConfig& cfg) {
  for (Diagnostic& d : diags)
    d.critical = cfg.critical_rules.count(d.rule_id) > 0;
}

std::vector<Diagnostic> analyze_source(std::string_view text,
                                       const std::string& path,
                                       const RuleConfig& cfg) {
  LexResult lexed = tokenize(text, path);
  ParseResult parsed = parse_translation_unit(lexed.tokens, path);
  std::vector<Diagnostic> out = run_embedded_rules(parsed.model, cfg);
  for (Diagnostic& d : lexed.diagnostics) out.push_back(std::move(d));
  for (Diagnostic& d : parsed.diagnostics) out.push_back(std::move(d));
  apply_critical_flags(out, cfg);
  std::sort(out.begin(), out.end(), diag_less);
  return out;
}

}  // namespace embermine
