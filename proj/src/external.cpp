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

#include "embermine/external.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <vector>

#include "embermine/errors.hpp"
#include "embermine/process.hpp"

namespace fs = std::filesystem;

namespace embermine {

namespace {

[[noreturn]] void malformed(std::size_t at, const std::string& why) {
  throw ReportParseError("malformed analyzer report at byte " +
                         std::to_string(at) + ": " + why);
}

std::string decode_entities(std::string_view raw, std::size_t base) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out.push_back(raw[i]);
      continue;
    }
    std::size_t semi = raw.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 32)
      malformed(base + i, "unterminated entity reference");
    std::string_view name = raw.substr(i + 1, semi - i - 1);
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
      long code = 0;
      if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X'))
        code = std::strtol(std::string(name.substr(2)).c_str(), nullptr, 16);
      else
        code = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
      if (code > 0 && code < 128) out.push_back(static_cast<char>(code));
      // wider code points are dropped; report text is informational
    } else {
      out.append("&").append(name).append(";");
    }
    i = semi;
  }
  return out;
}

using AttrMap = std::map<std::string, std::string, std::less<>>;

// Minimal scanner for the analyzer's XML: enough structure to pull out
// <cppcheck>, <error>, and <location> elements and to reject truncation
// with a byte position, which is all the ingest path needs.
class XmlScanner {
 public:
  explicit XmlScanner(std::string_view s) : s_(s) {}

  template <typename OnOpen, typename OnClose>
  void scan(OnOpen on_open, OnClose on_close) {
    std::vector<std::string> stack;
    while (true) {
      std::size_t lt = s_.find('<', i_);
      if (lt == std::string_view::npos) break;
      i_ = lt;
      if (try_skip("<?", "?>", "unterminated processing instruction")) continue;
      if (try_skip("<!--", "-->", "unterminated comment")) continue;
      if (try_skip("<![CDATA[", "]]>", "unterminated CDATA section")) continue;
      if (starts_with("<!")) {
        std::size_t gt = s_.find('>', i_);
        if (gt == std::string_view::npos) malformed(i_, "unterminated declaration");
        i_ = gt + 1;
        continue;
      }
      if (starts_with("</")) {
        std::size_t start = i_;
        i_ += 2;
        std::string name = read_name();
        skip_ws();
        if (i_ >= s_.size() || s_[i_] != '>')
          malformed(i_, "malformed closing tag");
        ++i_;
        if (stack.empty() || stack.back() != name)
          malformed(start, "mismatched closing tag '" + name + "'");
        stack.pop_back();
        on_close(name);
        continue;
      }
      // Opening tag.
      std::size_t start = i_;
      ++i_;
      std::string name = read_name();
      AttrMap attrs;
      bool self_closed = false;
      while (true) {
        skip_ws();
        if (i_ >= s_.size()) malformed(start, "unexpected end of input inside tag");
        if (s_[i_] == '>') { ++i_; break; }
        if (s_[i_] == '/') {
          if (i_ + 1 >= s_.size() || s_[i_ + 1] != '>')
            malformed(i_, "malformed self-closing tag");
          i_ += 2;
          self_closed = true;
          break;
        }
        std::string attr = read_name();
        skip_ws();
        if (i_ >= s_.size() || s_[i_] != '=')
          malformed(i_, "attribute '" + attr + "' lacks a value");
        ++i_;
        skip_ws();
        if (i_ >= s_.size() || (s_[i_] != '"' && s_[i_] != '\''))
          malformed(i_, "attribute value must be quoted");
        char quote = s_[i_];
        std::size_t vstart = ++i_;
        std::size_t vend = s_.find(quote, vstart);
        if (vend == std::string_view::npos)
          malformed(vstart - 1, "unterminated attribute value");
        attrs[attr] = decode_entities(s_.substr(vstart, vend - vstart), vstart);
        i_ = vend + 1;
      }
      if (!self_closed) stack.push_back(name);
      on_open(name, attrs, self_closed);
      if (self_closed) on_close(name);
    }
    if (!stack.empty())
      malformed(s_.size(), "unexpected end of input: element '" + stack.back() +
                               "' is not closed");
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  bool starts_with(std::string_view p) const {
    return s_.substr(i_).substr(0, p.size()) == p;
  }
  bool try_skip(std::string_view open, std::string_view close, const char* err) {
    if (!starts_with(open)) return false;
    std::size_t end = s_.find(close, i_ + open.size());
    if (end == std::string_view::npos) malformed(i_, err);
    i_ = end + close.size();
    return true;
  }
  void skip_ws() {
    while (i_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }
  std::string read_name() {
    std::size_t start = i_;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == ':' || c == '.') {
        ++i_;
        continue;
      }
      break;
    }
    if (i_ == start) malformed(start, "expected a tag or attribute name");
    return std::string(s_.substr(start, i_ - start));
  }
};

bool executable(const std::string& p) {
  return !p.empty() && access(p.c_str(), X_OK) == 0 &&
         fs::is_regular_file(fs::status(p));
}

std::string search_path(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return "";
  std::string_view sv(path);
  std::size_t i = 0;
  while (i <= sv.size()) {
    std::size_t j = sv.find(':', i);
    if (j == std::string_view::npos) j = sv.size();
    std::string dir(sv.substr(i, j - i));
    if (!dir.empty()) {
      std::string cand = dir + "/" + name;
      if (executable(cand)) return cand;
    }
    i = j + 1;
  }
  return "";
}

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && issp(s[b])) ++b;
  return s.substr(b);
}

}  // namespace

std::optional<std::string> resolve_external_path(const ExternalConfig& cfg) {
  auto resolve_one = [](const std::string& p) -> std::optional<std::string> {
    if (p.find('/') == std::string::npos) {
      std::string found = search_path(p);
      if (!found.empty()) return found;
      return std::nullopt;
    }
    return executable(p) ? std::optional(p) : std::nullopt;
  };
  if (!cfg.path.empty()) return resolve_one(cfg.path);
  if (const char* env = std::getenv("EMBERMINE_EXTERNAL_PATH");
      env && *env != '\0')
    return resolve_one(env);
  return resolve_one("cppcheck");
}

ExternalReport parse_external_report(std::string_view xml_text) {
  ExternalReport rep;
  rep.tool = "unknown";
  bool in_error = false;
  bool have_location = false;
  bool saw_results = false;
  ExternalEntry pending;

  XmlScanner scanner(xml_text);
  scanner.scan(
      [&](const std::string& name, const AttrMap& attrs, bool) {
        auto attr = [&](const char* key) -> std::string {
          auto it = attrs.find(key);
          return it == attrs.end() ? std::string() : it->second;
        };
        if (name == "results") {
          saw_results = true;
        } else if (name == "cppcheck") {
          rep.tool = "cppcheck";
          rep.version = attr("version");
        } else if (name == "error") {
          pending = ExternalEntry{};
          pending.rule_id = attr("id");
          pending.severity = attr("severity");
          pending.message = attr("msg");
          pending.path = attr("file");  // version-1 style fallback
          pending.line = std::atoi(attr("line").c_str());
          in_error = true;
          have_location = false;
        } else if (name == "location" && in_error && !have_location) {
          pending.path = attr("file");
          pending.line = std::atoi(attr("line").c_str());
          have_location = true;
        }
      },
      [&](const std::string& name) {
        if (name == "error" && in_error) {
          rep.entries.push_back(std::move(pending));
          in_error = false;
        }
      });
  // Tagless or unrelated output must not pass for a clean empty report; a
  // crashed analyzer often prints plain text.
  if (!saw_results) malformed(0, "no results element found");
  return rep;
}

ExternalReport run_external_analyzer(const std::string& tree_path,
                                     const ExternalConfig& cfg) {
  std::optional<std::string> exe = resolve_external_path(cfg);
  if (!exe) {
    throw AnalyzerUnavailable(
        "external analyzer not found (checked config path, "
        "EMBERMINE_EXTERNAL_PATH, and PATH)");
  }

  RunOptions vopts;
  vopts.timeout_ms = cfg.timeout_s * 1000;
  RunResult ver = run_process({*exe, "--version"}, vopts);
  if (ver.timed_out)
    throw AnalyzerTimeout("external analyzer timed out answering --version");
  if (ver.exit_code != 0)
    throw AnalyzerFailed("external analyzer --version failed (exit " +
                         std::to_string(ver.exit_code) + "): " + trim(ver.err));

  std::vector<std::string> files;
  std::error_code ec;
  for (fs::recursive_directory_iterator it(tree_path, ec), end;
       !ec && it != end; it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    std::string ext = it->path().extension().string();
    if (ext != ".c" && ext != ".h") continue;
    files.push_back(fs::relative(it->path(), tree_path).generic_string());
  }
  std::sort(files.begin(), files.end());

  ExternalReport rep;
  rep.tool = "cppcheck";
  rep.version = trim(ver.out.empty() ? ver.err : ver.out);
  if (files.empty()) return rep;

  std::vector<std::string> argv = {*exe, "--xml", "--xml-version=2",
                                   "--enable=all"};
  for (const std::string& a : cfg.extra_args) argv.push_back(a);
  for (const std::string& f : files) argv.push_back(f);

  RunOptions opts;
  opts.cwd = tree_path;
  opts.timeout_ms = cfg.timeout_s * 1000;
  RunResult run = run_process(argv, opts);
  if (run.timed_out)
    throw AnalyzerTimeout("external analyzer exceeded " +
                          std::to_string(cfg.timeout_s) + "s on " + tree_path);

  // The analyzer emits the XML document on stderr.
  try {
    ExternalReport parsed = parse_external_report(run.err);
    parsed.tool = rep.tool;
    if (parsed.version.empty()) parsed.version = rep.version;
    return parsed;
  } catch (const ReportParseError&) {
    if (run.exit_code != 0) {
      std::string tail = run.err.size() > 400
                             ? run.err.substr(run.err.size() - 400)
                             : run.err;
      throw AnalyzerFailed("external analyzer exit " +
                           std::to_string(run.exit_code) +
                           " with unparsable output: " + trim(tail));
    }
    throw;
  }
}

std::vector<Diagnostic> external_to_diagnostics(const ExternalReport& report,
                                                const RuleConfig& cfg) {
  std::vector<Diagnostic> out;
  out.reserve(report.entries.size());
  for (const ExternalEntry& e : report.entries) {
    Diagnostic d;
    d.rule_id = e.rule_id;
    d.path = e.path;
    d.line = e.line;
    d.message = e.message;
    d.severity = e.severity;
    d.source = DiagSource::External;
    d.critical = cfg.critical_rules.count(e.rule_id) > 0;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace embermine
