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

#ifndef EMBERMINE_TOKEN_HPP
#define EMBERMINE_TOKEN_HPP

#include <cstddef>
#include <string>

namespace embermine {

enum class TokenKind {
  Identifier,
  Keyword,
  Literal,
  Punctuator,
  Directive,
  Comment,
};

// `text` holds the exact source bytes of the token; `offset` is its byte
// position in the input. Interleaving token texts with the inter-token gap
// bytes reproduces the input exactly.
struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  int line = 1;     // 1-based
  int column = 1;   // 1-based, in bytes
  std::size_t offset = 0;
};

inline const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Punctuator: return "punctuator";
    case TokenKind::Directive: return "directive";
    case TokenKind::Comment: return "comment";
  }
  return "?";
}

}  // namespace embermine

#endif  // EMBERMINE_TOKEN_HPP
