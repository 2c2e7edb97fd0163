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

#ifndef EMBERMINE_SOURCE_MODEL_HPP
#define EMBERMINE_SOURCE_MODEL_HPP

#include <string>
#include <vector>

namespace embermine {

enum class VarScope { File, Param, Local };

struct VarModel {
  std::string name;
  int line = 0;
  VarScope scope = VarScope::Local;
  bool is_volatile = false;
  bool is_static = false;
  bool is_extern = false;
  bool is_const = false;
  bool initialized_at_decl = false;
};

struct CallSite {
  std::string callee;
  int line = 0;
  // Identifier tokens appearing inside the argument list. Used to spot
  // function names handed to ISR registration calls.
  std::vector<std::string> arg_idents;
};

struct LoopSite {
  std::string kind;  // "for" | "while" | "do"
  int line = 0;
};

struct AccessSite {
  std::string name;
  int line = 0;
};

struct FunctionModel {
  std::string name;
  int line = 0;
  bool is_definition = false;
  bool is_static = false;
  bool is_inline = false;
  std::vector<VarModel> params;
  std::vector<VarModel> locals;
  std::vector<CallSite> calls;
  std::vector<LoopSite> loops;
  std::vector<AccessSite> writes;
  std::vector<AccessSite> reads;
  int body_begin_line = 0;
  int body_end_line = 0;
};

struct GuardFacts {
  bool has_ifndef_define_pair = false;
  bool has_pragma_once = false;
};

struct DirectiveInfo {
  std::string kind;  // "include", "define", "ifndef", "pragma", ...
  std::string text;  // full directive line
  int line = 0;
};

// Structural facts about one translation unit. Built best-effort: any input
// produces a model, possibly alongside parse diagnostics.
struct SourceModel {
  std::string path;
  std::vector<std::string> includes;
  GuardFacts guard;
  std::vector<FunctionModel> functions;
  std::vector<VarModel> global_vars;
  std::vector<DirectiveInfo> directives;

  bool is_header() const {
    return path.size() >= 2 && path.compare(path.size() - 2, 2, ".h") == 0;
  }
};

}  // namespace embermine

#endif  // EMBERMINE_SOURCE_MODEL_HPP
