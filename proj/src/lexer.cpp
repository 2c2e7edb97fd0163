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

#include "embermine/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace embermine {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while", "_Bool", "_Complex",
    "_Imaginary", "_Alignas", "_Alignof", "_Atomic", "_Generic", "_Noreturn",
    "_Static_assert", "_Thread_local",
};

// Multi-char punctuators, longest first so greedy matching works.
constexpr std::array<std::string_view, 22> kPunct3 = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=", "&=",
    "^=",  "|=",
};

constexpr std::string_view kPunct1 = "[](){}.&*+-~!/%<>^|?:;=,#";

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string path)
      : src_(src), path_(std::move(path)) {}

  LexResult run() {
    while (!at_end()) {
      char c = src_[pos_];
      if (is_space_char(c)) {
        advance();
        continue;
      }
      // Line splice outside of any token: treat as gap bytes.
      if (c == '\\' && is_splice(pos_)) {
        advance();  // backslash
        if (!at_end() && src_[pos_] == '\r') advance();
        if (!at_end() && src_[pos_] == '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        lex_line_comment();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        lex_block_comment();
        continue;
      }
      if (c == '#' && !line_has_code_) {
        lex_directive();
        continue;
      }
      if (c == '"' || c == '\'') {
        lex_quoted(c);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number();
        continue;
      }
      if (is_ident_start(c)) {
        lex_identifier();
        continue;
      }
      lex_punctuator();
    }
    return std::move(result_);
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  // Backslash directly followed by a newline (optionally \r\n).
  bool is_splice(std::size_t at) const {
    if (at >= src_.size() || src_[at] != '\\') return false;
    std::size_t n = at + 1;
    if (n < src_.size() && src_[n] == '\r') ++n;
    return n < src_.size() && src_[n] == '\n';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
      line_has_code_ = false;
    } else {
      ++col_;
    }
    ++pos_;
  }

  struct Mark {
    std::size_t offset;
    int line, column;
  };
  Mark mark() const { return {pos_, line_, col_}; }

  void emit(TokenKind kind, const Mark& m) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(m.offset, pos_ - m.offset));
    t.line = m.line;
    t.column = m.column;
    t.offset = m.offset;
    if (kind != TokenKind::Comment) line_has_code_ = true;
    result_.tokens.push_back(std::move(t));
  }

  void lex_error(const Mark& m, const std::string& what) {
    Diagnostic d;
    d.rule_id = "lexError";
    d.path = path_;
    d.line = m.line;
    d.message = what;
    d.source = DiagSource::Embedded;
    result_.diagnostics.push_back(std::move(d));
  }

  void lex_line_comment() {
    Mark m = mark();
    while (!at_end() && src_[pos_] != '\n') {
      if (is_splice(pos_)) {
        advance();
        if (!at_end() && src_[pos_] == '\r') advance();
        advance();  // newline, comment continues
        continue;
      }
      advance();
    }
    emit(TokenKind::Comment, m);
  }

  void lex_block_comment() {
    Mark m = mark();
    advance();  // '/'
    advance();  // '*'
    while (!at_end()) {
      if (src_[pos_] == '*' && peek(1) == '/') {
        advance();
        advance();
        emit(TokenKind::Comment, m);
        return;
      }
      advance();
    }
    emit(TokenKind::Comment, m);
    lex_error(m, "unterminated block comment");
  }

  // Whole preprocessor line, continuations included, newline excluded.
  void lex_directive() {
    Mark m = mark();
    while (!at_end() && src_[pos_] != '\n') {
      if (is_splice(pos_)) {
        advance();
        if (!at_end() && src_[pos_] == '\r') advance();
        advance();
        continue;
      }
      advance();
    }
    // Drop one trailing \r so CRLF sources keep it in the gap.
    if (pos_ > m.offset && src_[pos_ - 1] == '\r') {
      emit_trimmed(TokenKind::Directive, m, 1);
    } else {
      emit(TokenKind::Directive, m);
    }
  }

  void emit_trimmed(TokenKind kind, const Mark& m, std::size_t drop_back) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(m.offset, pos_ - m.offset - drop_back));
    t.line = m.line;
    t.column = m.column;
    t.offset = m.offset;
    line_has_code_ = true;
    result_.tokens.push_back(std::move(t));
  }

  void lex_quoted(char quote) {
    Mark m = mark();
    advance();  // opening quote
    while (!at_end()) {
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();  // backslash
        if (src_[pos_] == '\r' && peek(1) == '\n') advance();  // spliced CRLF
        advance();  // escaped char (covers \" \' \\ and spliced newlines)
        continue;
      }
      if (c == quote) {
        advance();
        emit(TokenKind::Literal, m);
        return;
      }
      if (c == '\n') break;  // unterminated; resume on next line
      advance();
    }
    emit(TokenKind::Literal, m);
    lex_error(m, quote == '"' ? "unterminated string literal"
                              : "unterminated character literal");
  }

  // pp-number: digits, letters, '.', '_' and exponent signs.
  void lex_number() {
    Mark m = mark();
    advance();
    while (!at_end()) {
      char c = src_[pos_];
      if ((c == '+' || c == '-') && pos_ > m.offset) {
        char prev = src_[pos_ - 1];
        if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
          advance();
          continue;
        }
        break;
      }
      if (is_ident_char(c) || c == '.') {
        advance();
        continue;
      }
      break;
    }
    emit(TokenKind::Literal, m);
  }

  void lex_identifier() {
    Mark m = mark();
    while (!at_end() && is_ident_char(src_[pos_])) advance();
    std::string_view word = src_.substr(m.offset, pos_ - m.offset);
    emit(kKeywords.count(word) ? TokenKind::Keyword : TokenKind::Identifier, m);
  }

  void lex_punctuator() {
    Mark m = mark();
    std::string_view rest = src_.substr(pos_);
    for (std::string_view p : kPunct3) {
      if (rest.substr(0, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        emit(TokenKind::Punctuator, m);
        return;
      }
    }
    if (kPunct1.find(src_[pos_]) != std::string_view::npos) {
      advance();
      emit(TokenKind::Punctuator, m);
      return;
    }
    // Unknown byte (stray '@', '$', non-ASCII...): keep it as a punctuator
    // token so the stream stays lossless.
    advance();
    emit(TokenKind::Punctuator, m);
  }

  std::string_view src_;
  std::string path_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool line_has_code_ = false;
  LexResult result_;
};

}  // namespace

bool is_c_keyword(std::string_view word) { return kKeywords.count(word) > 0; }

LexResult tokenize(std::string_view text, const std::string& path) {
  return Lexer(text, path).run();
}

std::string reconstruct(std::string_view original, const std::vector<Token>& tokens) {
  std::string out;
  out.reserve(original.size());
  std::size_t cursor = 0;
  for (const Token& t : tokens) {
    if (t.offset < cursor || t.offset > original.size()) return out;  // inconsistent stream
    out.append(original.substr(cursor, t.offset - cursor));
    out.append(t.text);
    cursor = t.offset + t.text.size();
  }
  if (cursor <= original.size()) out.append(original.substr(cursor));
  return out;
}

}  // namespace embermine
