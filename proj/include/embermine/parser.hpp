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

#ifndef EMBERMINE_PARSER_HPP
#define EMBERMINE_PARSER_HPP

#include <set>
#include <string>
#include <vector>

#include "embermine/diagnostic.hpp"
#include "embermine/source_model.hpp"
#include "embermine/token.hpp"

namespace embermine {

struct IsrConfig {
  // Glob patterns matched against function names.
  std::vector<std::string> patterns = {"*_Handler", "*_IRQHandler", "*_callback"};
  // Calls whose identifier arguments name interrupt callbacks.
  std::vector<std::string> registration_calls = {
      "pio_handler_set", "gpio_set_irq_enabled_with_callback",
      "irq_set_exclusive_handler"};
};

struct ParseResult {
  SourceModel model;
  std::vector<Diagnostic> diagnostics;
};

// Best-effort structural parse: function definitions/declarations with their
// locals, calls, loops and identifier accesses, file-scope variables, include
// directives and include-guard facts. Total over arbitrary input; unbalanced
// regions yield `parseError` diagnostics plus a partial model.
ParseResult parse_translation_unit(const std::vector<Token>& tokens, std::string path);

// A function is an ISR iff its name matches a configured glob or it is passed
// by name to a configured registration call anywhere in the model. Monotone
// in the configuration: adding patterns or calls only grows the set.
std::set<std::string> classify_isr(const SourceModel& model, const IsrConfig& cfg);

}  // namespace embermine

#endif  // EMBERMINE_PARSER_HPP
