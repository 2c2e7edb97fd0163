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

#ifndef EMBERMINE_LEXER_HPP
#define EMBERMINE_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "embermine/diagnostic.hpp"
#include "embermine/token.hpp"

namespace embermine {

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

// Lossless tokenization of C source. Comments and preprocessor directives are
// preserved as tokens. Never throws on malformed input: unterminated string,
// character or block-comment constructs emit a `lexError` diagnostic and
// lexing resumes at the next line.
LexResult tokenize(std::string_view text, const std::string& path = "");

// Rebuilds the input from the token stream plus the gap bytes of `original`.
// Token texts are taken from the tokens themselves, so a token whose text
// disagrees with the original produces a mismatching reconstruction.
std::string reconstruct(std::string_view original, const std::vector<Token>& tokens);

bool is_c_keyword(std::string_view word);

}  // namespace embermine

#endif  // EMBERMINE_LEXER_HPP
