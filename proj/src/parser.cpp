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

#include "embermine/parser.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace embermine {

namespace {

const std::unordered_set<std::string_view> kTypeKeywords = {
    "void", "char", "short", "int",   "long",    "float",
    "double", "signed", "unsigned", "_Bool", "_Complex", "_Atomic",
};

const std::unordered_set<std::string_view> kQualifiers = {
    "const",  "volatile", "static",   "extern",        "register",
    "inline", "restrict", "auto",     "_Noreturn",     "_Thread_local",
    "_Alignas",
};

bool is_assign_op(std::string_view s) {
  static const std::unordered_set<std::string_view> ops = {
      "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
  return ops.count(s) > 0;
}

struct DeclParse {
  std::vector<VarModel> vars;
  std::vector<std::string> func_decl_names;  // declarators that turned out to be functions
  std::vector<std::size_t> consumed;         // positions (relative to span) of type/name tokens
  bool recognized = false;
  std::size_t end = 0;  // first unconsumed position
};

// Splits a directive line into whitespace-separated words, the leading '#'
// removed (handles "#  define X" spacing and line splices).
std::vector<std::string> directive_words(const std::string& text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size() &&
        (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      cleaned.push_back(' ');
      continue;
    }
    cleaned.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : c);
  }
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < cleaned.size() && (cleaned[i] == ' ' || cleaned[i] == '#')) ++i;
  while (i < cleaned.size()) {
    std::size_t j = cleaned.find(' ', i);
    if (j == std::string::npos) j = cleaned.size();
    if (j > i) words.push_back(cleaned.substr(i, j - i));
    i = j + 1;
  }
  return words;
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string path) : all_(tokens) {
    model_.path = std::move(path);
    for (const Token& t : tokens) {
      if (t.kind == TokenKind::Comment) continue;
      ordered_.push_back(&t);
      if (t.kind == TokenKind::Directive) continue;
      code_.push_back(&t);
    }
  }

  ParseResult run() {
    parse_directives();
    detect_guard();
    parse_top_level();
    dedup();
    return {std::move(model_), std::move(diags_)};
  }

 private:
  const std::vector<Token>& all_;
  std::vector<const Token*> ordered_;  // non-comment tokens in stream order
  std::vector<const Token*> code_;     // ordered_ minus directives
  SourceModel model_;
  std::vector<Diagnostic> diags_;

  bool is_punct(std::size_t i, std::string_view s) const {
    return i < code_.size() && code_[i]->kind == TokenKind::Punctuator &&
           code_[i]->text == s;
  }
  bool is_kw(std::size_t i, std::string_view s) const {
    return i < code_.size() && code_[i]->kind == TokenKind::Keyword &&
           code_[i]->text == s;
  }
  bool is_ident(std::size_t i) const {
    return i < code_.size() && code_[i]->kind == TokenKind::Identifier;
  }

  void parse_error(int line, const std::string& what) {
    Diagnostic d;
    d.rule_id = "parseError";
    d.path = model_.path;
    d.line = line;
    d.message = what;
    diags_.push_back(std::move(d));
  }

  // --- directives -----------------------------------------------------------

  void parse_directives() {
    for (const Token& t : all_) {
      if (t.kind != TokenKind::Directive) continue;
      auto words = directive_words(t.text);
      DirectiveInfo info;
      info.kind = words.empty() ? "" : words[0];
      info.text = t.text;
      info.line = t.line;
      if (info.kind == "include") {
        auto lt = t.text.find_first_of("<\"");
        if (lt != std::string::npos) {
          char close = t.text[lt] == '<' ? '>' : '"';
          auto rt = t.text.find(close, lt + 1);
          if (rt != std::string::npos)
            model_.includes.push_back(t.text.substr(lt + 1, rt - lt - 1));
        }
      }
      model_.directives.push_back(std::move(info));
    }
  }

  void detect_guard() {
    for (const DirectiveInfo& d : model_.directives) {
      if (d.kind == "pragma") {
        auto words = directive_words(d.text);
        if (words.size() >= 2 && words[1] == "once")
          model_.guard.has_pragma_once = true;
      }
    }
    // #ifndef/#define pair wrapping the whole file: first two meaningful
    // tokens open the guard, the matching #endif is the last one.
    if (ordered_.size() < 3) return;
    const Token* first = ordered_[0];
    const Token* second = ordered_[1];
    if (first->kind != TokenKind::Directive || second->kind != TokenKind::Directive)
      return;
    auto w1 = directive_words(first->text);
    auto w2 = directive_words(second->text);
    if (w1.size() < 2 || w1[0] != "ifndef") return;
    if (w2.size() < 2 || w2[0] != "define" || w2[1] != w1[1]) return;
    int depth = 1;
    for (std::size_t i = 2; i < ordered_.size(); ++i) {
      const Token* t = ordered_[i];
      if (t->kind != TokenKind::Directive) {
        if (depth == 0) return;  // code after the closing #endif
        continue;
      }
      auto words = directive_words(t->text);
      const std::string& kind = words.empty() ? "" : words[0];
      if (kind == "if" || kind == "ifdef" || kind == "ifndef") {
        ++depth;
      } else if (kind == "endif") {
        --depth;
        if (depth == 0 && i + 1 != ordered_.size()) return;
      } else if ((kind == "else" || kind == "elif") && depth == 1) {
        return;  // guard conditional has an alternate branch
      }
    }
    model_.guard.has_ifndef_define_pair = (depth == 0);
  }

  // --- group skipping -------------------------------------------------------

  // `i` indexes an opening token; returns the index one past its match.
  std::size_t skip_group(std::size_t i, std::string_view open, std::string_view close) {
    int depth = 0;
    std::size_t j = i;
    for (; j < code_.size(); ++j) {
      if (is_punct(j, open)) ++depth;
      else if (is_punct(j, close)) {
        if (--depth == 0) return j + 1;
      }
    }
    if (open == "{")
      parse_error(code_[i]->line, "unbalanced braces");
    return code_.size();
  }

  // --- declarations ---------------------------------------------------------

  // Parses `specifiers declarator [, declarator]*` starting at `b`, never
  // reading past `e`. Positions in `consumed` are absolute code_ indices.
  DeclParse parse_declaration(std::size_t b, std::size_t e, VarScope scope) {
    DeclParse out;
    std::size_t pos = b;
    bool saw_type = false;
    bool saw_qual = false;
    VarModel proto;  // qualifier flags shared by all declarators
    proto.scope = scope;

    auto consume = [&](std::size_t i) { out.consumed.push_back(i); };

    while (pos < e) {
      const Token* t = code_[pos];
      if (t->kind == TokenKind::Keyword) {
        std::string_view w = t->text;
        if (w == "typedef") return out;  // not a variable/function object
        if (kQualifiers.count(w)) {
          if (w == "const") proto.is_const = true;
          if (w == "volatile") proto.is_volatile = true;
          if (w == "static") proto.is_static = true;
          if (w == "extern") proto.is_extern = true;
          saw_qual = true;
          consume(pos++);
          continue;
        }
        if (kTypeKeywords.count(w)) {
          saw_type = true;
          consume(pos++);
          continue;
        }
        if (w == "struct" || w == "union" || w == "enum") {
          saw_type = true;
          consume(pos++);
          if (pos < e && is_ident(pos)) consume(pos++);
          if (pos < e && is_punct(pos, "{")) {
            std::size_t after = std::min(skip_group(pos, "{", "}"), e);
            for (std::size_t k = pos; k < after; ++k) consume(k);
            pos = after;
          }
          continue;
        }
        break;
      }
      if (t->kind == TokenKind::Identifier && !saw_type) {
        // Typedef-name heuristic: identifier acting as a type iff a
        // declarator plausibly follows (`uint32_t i`, `uint8_t *p`).
        bool next_ident = is_ident(pos + 1);
        bool next_ptr_decl = is_punct(pos + 1, "*") &&
                             (is_ident(pos + 2) || is_punct(pos + 2, "*"));
        if (next_ident || next_ptr_decl) {
          saw_type = true;
          consume(pos++);
          continue;
        }
        break;
      }
      break;
    }

    if (!saw_type && !saw_qual) return out;

    // Declarator list.
    while (pos < e) {
      while (pos < e && (is_punct(pos, "*") ||
                         (code_[pos]->kind == TokenKind::Keyword &&
                          kQualifiers.count(code_[pos]->text)))) {
        consume(pos++);
      }
      std::string name;
      int name_line = 0;
      if (is_punct(pos, "(")) {
        // Function-pointer declarator: first identifier inside names it.
        std::size_t after = std::min(skip_group(pos, "(", ")"), e);
        for (std::size_t k = pos; k < after; ++k) {
          if (name.empty() && is_ident(k)) {
            name = code_[k]->text;
            name_line = code_[k]->line;
          }
          consume(k);
        }
        pos = after;
      } else if (is_ident(pos)) {
        name = code_[pos]->text;
        name_line = code_[pos]->line;
        consume(pos++);
      } else {
        break;  // no declarator (bare `struct X {...};`)
      }

      bool is_func = false;
      while (pos < e) {
        if (is_punct(pos, "[")) {
          pos = std::min(skip_group(pos, "[", "]"), e);  // sizes stay visible as reads
        } else if (is_punct(pos, "(")) {
          std::size_t after = std::min(skip_group(pos, "(", ")"), e);
          for (std::size_t k = pos; k < after; ++k) consume(k);
          pos = after;
          is_func = true;
        } else {
          break;
        }
      }

      bool initialized = false;
      if (pos < e && is_punct(pos, "=")) {
        initialized = true;
        consume(pos++);
        int nest = 0;
        while (pos < e) {
          if (is_punct(pos, "(") || is_punct(pos, "[") || is_punct(pos, "{")) ++nest;
          else if (is_punct(pos, ")") || is_punct(pos, "]") || is_punct(pos, "}")) --nest;
          else if (nest == 0 && (is_punct(pos, ",") || is_punct(pos, ";"))) break;
          ++pos;
        }
      }

      if (!name.empty()) {
        if (is_func) {
          out.func_decl_names.push_back(name);
        } else {
          VarModel v = proto;
          v.name = name;
          v.line = name_line;
          v.initialized_at_decl = initialized;
          out.vars.push_back(std::move(v));
        }
      }
      out.recognized = true;
      if (pos < e && is_punct(pos, ",")) {
        consume(pos++);
        continue;
      }
      break;
    }
    out.recognized = out.recognized || saw_type;
    out.end = pos;
    return out;
  }

  std::vector<VarModel> parse_params(std::size_t open_paren, std::size_t close_after) {
    std::vector<VarModel> params;
    std::size_t b = open_paren + 1;
    std::size_t e = close_after > 0 ? close_after - 1 : b;  // exclude ')'
    std::size_t frag = b;
    int nest = 0;
    for (std::size_t i = b; i <= e; ++i) {
      bool at_end = (i == e);
      if (!at_end) {
        if (is_punct(i, "(") || is_punct(i, "[") || is_punct(i, "{")) { ++nest; continue; }
        if (is_punct(i, ")") || is_punct(i, "]") || is_punct(i, "}")) { --nest; continue; }
        if (!(nest == 0 && is_punct(i, ","))) continue;
      }
      if (i > frag) {
        DeclParse d = parse_declaration(frag, i, VarScope::Param);
        for (VarModel& v : d.vars) params.push_back(std::move(v));
      }
      frag = i + 1;
    }
    return params;
  }

  // --- top level ------------------------------------------------------------

  void parse_top_level() {
    std::size_t i = 0;
    const std::size_t n = code_.size();
    while (i < n) {
      if (is_punct(i, ";")) { ++i; continue; }
      if (is_punct(i, "}")) {
        parse_error(code_[i]->line, "unexpected '}' at file scope");
        ++i;
        continue;
      }
      // Collect one external declaration.
      std::size_t j = i;
      int paren = 0;
      std::size_t body_open = n;
      std::size_t end = n;
      const Token* prev = nullptr;
      while (j < n) {
        if (is_punct(j, "(")) { ++paren; }
        else if (is_punct(j, ")")) { if (paren > 0) --paren; }
        else if (is_punct(j, "{")) {
          if (paren == 0 && prev && prev->kind == TokenKind::Punctuator &&
              prev->text == ")") {
            body_open = j;
            break;
          }
          std::size_t after = skip_group(j, "{", "}");
          prev = after > 0 && after <= n && after - 1 < n ? code_[after - 1] : nullptr;
          j = after;
          continue;
        }
        else if (is_punct(j, ";") && paren == 0) { end = j; break; }
        else if (is_punct(j, "}")) { end = j; break; }  // stray close, reprocessed
        prev = code_[j];
        ++j;
      }

      if (body_open < n) {
        std::size_t body_close_after = skip_group(body_open, "{", "}");
        handle_function(i, body_open, body_close_after);
        i = body_close_after;
      } else if (end < n) {
        if (end > i) handle_declaration(i, end);
        i = is_punct(end, ";") ? end + 1 : end;
      } else {
        if (j > i) handle_declaration(i, j);
        i = j;
      }
    }
  }

  // Returns index of the '(' opening the parameter list when head
  // [b, e) looks like `... name ( params )`, else npos.
  std::size_t match_function_head(std::size_t b, std::size_t e, std::string* name, int* line) {
    if (e <= b + 1) return npos();
    // A top-level '=' means this is an initialized variable, not a function.
    int nest = 0;
    for (std::size_t k = b; k < e; ++k) {
      if (is_punct(k, "(") || is_punct(k, "[") || is_punct(k, "{")) ++nest;
      else if (is_punct(k, ")") || is_punct(k, "]") || is_punct(k, "}")) --nest;
      else if (nest == 0 && is_punct(k, "=")) return npos();
      else if (code_[k]->kind == TokenKind::Keyword && code_[k]->text == "typedef")
        return npos();
    }
    if (!is_punct(e - 1, ")")) return npos();
    int depth = 0;
    std::size_t open = npos();
    for (std::size_t k = e; k-- > b;) {
      if (is_punct(k, ")")) ++depth;
      else if (is_punct(k, "(")) {
        if (--depth == 0) { open = k; break; }
      }
    }
    if (open == npos() || open == b || !is_ident(open - 1)) return npos();
    *name = code_[open - 1]->text;
    *line = code_[open - 1]->line;
    return open;
  }

  static std::size_t npos() { return static_cast<std::size_t>(-1); }

  void scan_function_qualifiers(std::size_t b, std::size_t open, FunctionModel* fn) {
    for (std::size_t k = b; k < open; ++k) {
      if (code_[k]->kind != TokenKind::Keyword) continue;
      if (code_[k]->text == "static") fn->is_static = true;
      if (code_[k]->text == "inline") fn->is_inline = true;
    }
  }

  void handle_function(std::size_t head_b, std::size_t body_open, std::size_t body_close_after) {
    std::string name;
    int line = 0;
    std::size_t open = match_function_head(head_b, body_open, &name, &line);
    if (open == npos()) return;  // unknown construct; body already skipped
    FunctionModel fn;
    fn.name = name;
    fn.line = line;
    fn.is_definition = true;
    scan_function_qualifiers(head_b, open, &fn);
    fn.params = parse_params(open, body_open);
    fn.body_begin_line = code_[body_open]->line;
    std::size_t body_e = body_close_after > body_open + 1 ? body_close_after - 1 : body_open + 1;
    fn.body_end_line = body_e < code_.size() ? code_[body_e]->line
                                             : (code_.empty() ? 0 : code_.back()->line);
    analyze_body(fn, body_open + 1, body_e);
    model_.functions.push_back(std::move(fn));
  }

  void handle_declaration(std::size_t b, std::size_t e) {
    std::string name;
    int line = 0;
    std::size_t open = match_function_head(b, e, &name, &line);
    if (open != npos()) {
      FunctionModel fn;
      fn.name = name;
      fn.line = line;
      fn.is_definition = false;
      scan_function_qualifiers(b, open, &fn);
      fn.params = parse_params(open, e);
      model_.functions.push_back(std::move(fn));
      return;
    }
    DeclParse d = parse_declaration(b, e, VarScope::File);
    for (VarModel& v : d.vars) model_.global_vars.push_back(std::move(v));
    for (std::string& fname : d.func_decl_names) {
      FunctionModel fn;
      fn.name = std::move(fname);
      fn.line = code_[b]->line;
      model_.functions.push_back(std::move(fn));
    }
  }

  // --- function bodies ------------------------------------------------------

  void analyze_body(FunctionModel& fn, std::size_t b, std::size_t e) {
    if (b >= e) return;
    std::vector<bool> skip(e - b, false);
    auto mark = [&](std::size_t abs) {
      if (abs >= b && abs < e) skip[abs - b] = true;
    };

    // Mark the `while` that closes each do-while so it is not double-counted.
    std::vector<bool> dowhile_tail(e - b, false);
    for (std::size_t i = b; i < e; ++i) {
      if (!is_kw(i, "do")) continue;
      std::size_t after;
      if (is_punct(i + 1, "{")) {
        after = skip_group(i + 1, "{", "}");
      } else {
        after = i + 1;
        int nest = 0;
        while (after < e) {
          if (is_punct(after, "(") || is_punct(after, "{") || is_punct(after, "[")) ++nest;
          else if (is_punct(after, ")") || is_punct(after, "}") || is_punct(after, "]")) --nest;
          else if (nest == 0 && is_punct(after, ";")) { ++after; break; }
          ++after;
        }
      }
      if (after < e && is_kw(after, "while")) dowhile_tail[after - b] = true;
    }

    bool stmt_start = true;
    for (std::size_t i = b; i < e; ++i) {
      bool at_stmt_start = stmt_start;
      const Token* t = code_[i];
      // Next token starts a statement after these.
      stmt_start = t->kind == TokenKind::Punctuator &&
                   (t->text == ";" || t->text == "{" || t->text == "}");
      if (is_punct(i, "(") && i > b && is_kw(i - 1, "for")) stmt_start = true;

      if (skip[i - b]) continue;

      if (at_stmt_start) {
        DeclParse d = parse_declaration(i, e, VarScope::Local);
        if (d.recognized && (!d.vars.empty() || !d.func_decl_names.empty())) {
          for (std::size_t abs : d.consumed) mark(abs);
          for (VarModel& v : d.vars) fn.locals.push_back(std::move(v));
          if (skip[i - b]) continue;
        }
      }

      if (t->kind == TokenKind::Keyword) {
        if (t->text == "for" || t->text == "do" ||
            (t->text == "while" && !dowhile_tail[i - b])) {
          fn.loops.push_back({t->text, t->line});
        }
        continue;
      }
      if (t->kind != TokenKind::Identifier) continue;

      if (is_punct(i + 1, "(") && i + 1 < e) {
        CallSite call;
        call.callee = t->text;
        call.line = t->line;
        std::size_t after = std::min(skip_group(i + 1, "(", ")"), e);
        for (std::size_t k = i + 2; k + 1 < after + 1 && k < e; ++k) {
          if (is_ident(k) && !skip[k - b]) call.arg_idents.push_back(code_[k]->text);
        }
        fn.calls.push_back(std::move(call));
        continue;  // callee is not a variable access
      }
      if (i > b) {
        const Token* p = code_[i - 1];
        if (p->kind == TokenKind::Punctuator && (p->text == "." || p->text == "->"))
          continue;  // member name
        if (p->kind == TokenKind::Keyword && p->text == "goto") continue;
      }
      if (at_stmt_start && is_punct(i + 1, ":")) continue;  // label

      bool write = false;
      if (i > b && code_[i - 1]->kind == TokenKind::Punctuator &&
          (code_[i - 1]->text == "++" || code_[i - 1]->text == "--")) {
        write = true;
      } else {
        std::size_t j = i + 1;
        while (j < e) {
          if (is_punct(j, "[")) { j = std::min(skip_group(j, "[", "]"), e); continue; }
          if ((is_punct(j, ".") || is_punct(j, "->")) && is_ident(j + 1)) { j += 2; continue; }
          break;
        }
        if (j < e && code_[j]->kind == TokenKind::Punctuator &&
            (is_assign_op(code_[j]->text) || code_[j]->text == "++" ||
             code_[j]->text == "--")) {
          write = true;
        }
      }
      if (write) fn.writes.push_back({t->text, t->line});
      else fn.reads.push_back({t->text, t->line});
    }
  }

  void dedup() {
    auto fn_key = [](const FunctionModel& f) { return std::pair(f.name, f.line); };
    std::sort(model_.functions.begin(), model_.functions.end(),
              [&](const FunctionModel& a, const FunctionModel& b) {
                return std::pair(a.line, a.name) < std::pair(b.line, b.name);
              });
    model_.functions.erase(
        std::unique(model_.functions.begin(), model_.functions.end(),
                    [&](const FunctionModel& a, const FunctionModel& b) {
                      return fn_key(a) == fn_key(b);
                    }),
        model_.functions.end());
    std::sort(model_.global_vars.begin(), model_.global_vars.end(),
              [](const VarModel& a, const VarModel& b) {
                return std::pair(a.line, a.name) < std::pair(b.line, b.name);
              });
    model_.global_vars.erase(
        std::unique(model_.global_vars.begin(), model_.global_vars.end(),
                    [](const VarModel& a, const VarModel& b) {
                      return a.name == b.name && a.line == b.line;
                    }),
        model_.global_vars.end());
  }
};

}  // namespace

ParseResult parse_translation_unit(const std::vector<Token>& tokens, std::string path) {
  return Parser(tokens, std::move(path)).run();
}

std::set<std::string> classify_isr(const SourceModel& model, const IsrConfig& cfg) {
  std::set<std::string> isrs;
  std::unordered_set<std::string> known;
  for (const FunctionModel& f : model.functions) known.insert(f.name);

  for (const FunctionModel& f : model.functions) {
    for (const std::string& pat : cfg.patterns) {
      if (fnmatch(pat.c_str(), f.name.c_str(), 0) == 0) {
        isrs.insert(f.name);
        break;
      }
    }
  }
  std::unordered_set<std::string> reg(cfg.registration_calls.begin(),
                                      cfg.registration_calls.end());
  for (const FunctionModel& f : model.functions) {
    for (const CallSite& c : f.calls) {
      if (!reg.count(c.callee)) continue;
      for (const std::string& arg : c.arg_idents) {
        if (known.count(arg)) isrs.insert(arg);
      }
    }
  }
  return isrs;
}

}  // namespace embermine
