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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "embermine/fsutil.hpp"
#include "embermine/lexer.hpp"

using namespace embermine;

namespace {

std::string fixture(const std::string& name) {
  return std::string(EMBERMINE_FIXTURES_DIR) + "/" + name;
}

std::vector<TokenKind> kinds_of(const std::vector<Token>& ts) {
  std::vector<TokenKind> out;
  for (const auto& t : ts) out.push_back(t.kind);
  return out;
}

std::vector<std::string> texts_of(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.text);
  return out;
}

bool has_token(const LexResult& r, TokenKind kind, const std::string& text, int line) {
  for (const auto& t : r.tokens) {
    if (t.kind == kind && t.text == text && t.line == line) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("declaration tokens carry kind, text and position") {
  auto r = tokenize("int flag = 0;\n");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.tokens.size() == 5);
  CHECK(kinds_of(r.tokens) ==
        std::vector<TokenKind>{TokenKind::Keyword, TokenKind::Identifier,
                               TokenKind::Punctuator, TokenKind::Literal,
                               TokenKind::Punctuator});
  CHECK(texts_of(r.tokens) ==
        std::vector<std::string>{"int", "flag", "=", "0", ";"});
  CHECK(r.tokens[0].column == 1);
  CHECK(r.tokens[1].column == 5);
  CHECK(r.tokens[2].column == 10);
  CHECK(r.tokens[3].column == 12);
  CHECK(r.tokens[4].column == 13);
  for (const auto& t : r.tokens) CHECK(t.line == 1);
}

TEST_CASE("round trip reproduces fixture files byte for byte") {
  for (const char* name : {"snippet_gpio.c", "snippet_gpio_clean.c", "tone.c",
                           "guarded.h", "pragma_once.h", "unguarded.h"}) {
    CAPTURE(name);
    std::string text = read_text_file(fixture(name));
    auto r = tokenize(text, name);
    CHECK(r.diagnostics.empty());
    CHECK(reconstruct(text, r.tokens) == text);
  }
}

TEST_CASE("round trip survives splices, CRLF and dense punctuation") {
  const std::string samples[] = {
      "",
      "\r\n",
      "int a;\r\nint b;\r\n",
      "#define MAX \\\n  10\nint x = MAX;\n",
      "#define CR \\\r\n 2\n",
      "const char *s = \"a\\\"b\\\\\";\nchar c = '\\'';\n",
      "// comment with \\\ncontinuation\nint y;\n",
      "/* nested /* looking */ int z;\n",
      "a+++++b;\n",
      "int tab\t=\t1;   \n\n\n",
      "no trailing newline",
  };
  for (const auto& s : samples) {
    CAPTURE(s);
    auto r = tokenize(s);
    CHECK(r.diagnostics.empty());
    CHECK(reconstruct(s, r.tokens) == s);
  }
}

TEST_CASE("unterminated string emits lexError and lexing resumes") {
  std::string src = "char *s = \"abc;\nint x = 1;\n";
  auto r = tokenize(src, "f.c");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].rule_id == "lexError");
  CHECK(r.diagnostics[0].path == "f.c");
  CHECK(r.diagnostics[0].line == 1);
  CHECK(has_token(r, TokenKind::Keyword, "int", 2));
  CHECK(reconstruct(src, r.tokens) == src);
}

TEST_CASE("unterminated block comment emits lexError") {
  std::string src = "int a;\n/* no end\nint b;\n";
  auto r = tokenize(src, "f.c");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].rule_id == "lexError");
  CHECK(r.diagnostics[0].line == 2);
  CHECK(reconstruct(src, r.tokens) == src);
}

TEST_CASE("unterminated char literal emits lexError") {
  std::string src = "char c = 'a;\nint k;\n";
  auto r = tokenize(src, "f.c");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].line == 1);
  CHECK(has_token(r, TokenKind::Keyword, "int", 2));
  CHECK(reconstruct(src, r.tokens) == src);
}

TEST_CASE("empty input yields no tokens and no diagnostics") {
  auto r = tokenize("");
  CHECK(r.tokens.empty());
  CHECK(r.diagnostics.empty());
  CHECK(reconstruct("", r.tokens) == "");
}

TEST_CASE("comments and directives are single tokens") {
  std::string src = "// note\n#include <stdio.h>\n/* b */ int x;\n";
  auto r = tokenize(src);
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.tokens.size() == 6);
  CHECK(r.tokens[0].kind == TokenKind::Comment);
  CHECK(r.tokens[0].text == "// note");
  CHECK(r.tokens[1].kind == TokenKind::Directive);
  CHECK(r.tokens[1].text == "#include <stdio.h>");
  CHECK(r.tokens[2].kind == TokenKind::Comment);
  CHECK(r.tokens[3].kind == TokenKind::Keyword);
  CHECK(r.tokens[4].kind == TokenKind::Identifier);
  CHECK(r.tokens[5].kind == TokenKind::Punctuator);
  CHECK(reconstruct(src, r.tokens) == src);
}

TEST_CASE("directive token excludes the CRLF terminator") {
  std::string src = "#define A 1\r\nint x;\r\n";
  auto r = tokenize(src);
  REQUIRE(!r.tokens.empty());
  CHECK(r.tokens[0].kind == TokenKind::Directive);
  CHECK(r.tokens[0].text == "#define A 1");
  CHECK(reconstruct(src, r.tokens) == src);
}

TEST_CASE("keyword table distinguishes keywords from identifiers") {
  CHECK(is_c_keyword("int"));
  CHECK(is_c_keyword("volatile"));
  CHECK(is_c_keyword("while"));
  CHECK(is_c_keyword("return"));
  CHECK_FALSE(is_c_keyword("flag"));
  CHECK_FALSE(is_c_keyword("printf"));
  CHECK_FALSE(is_c_keyword(""));
}
