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

#include "embermine/authors.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "embermine/errors.hpp"

namespace embermine {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

AuthorMap AuthorMap::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open author map '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

AuthorMap AuthorMap::parse(const std::string& text, const std::string& origin) {
  AuthorMap map;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    auto hash = stripped.find('#');
    if (hash != std::string::npos) stripped.resize(hash);
    std::vector<std::string> words = split_ws(stripped);
    if (words.empty()) continue;
    if (words.size() < 2)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'canonical [name...] email'");
    std::string canonical = words.front();
    std::string email = words.back();
    std::string name;
    for (std::size_t i = 1; i + 1 < words.size(); ++i) {
      if (!name.empty()) name += ' ';
      name += words[i];
    }
    map.add(canonical, name, email);
  }
  return map;
}

void AuthorMap::add(const std::string& canonical, const std::string& name,
                    const std::string& email) {
  std::string em = lower(email);
  if (!name.empty()) by_pair_[{name, em}] = canonical;
  // The bare email maps too unless a more specific pair claims it first.
  if (!by_email_.count(em)) by_email_[em] = canonical;
}

std::string AuthorMap::canonical(const std::string& name,
                                 const std::string& email) const {
  std::string em = lower(email);
  if (auto it = by_pair_.find({name, em}); it != by_pair_.end())
    return it->second;
  if (auto it = by_email_.find(em); it != by_email_.end()) return it->second;
  if (!em.empty()) return em;
  return name;
}

bool TemplatePolicy::is_template(const std::string& author_id,
                                 const std::string& raw_name,
                                 const std::string& raw_email,
                                 std::int64_t author_time) const {
  if (start_epoch >= 0 && author_time < start_epoch) return true;
  for (const std::string& pat : author_patterns) {
    if (fnmatch(pat.c_str(), author_id.c_str(), 0) == 0) return true;
    if (!raw_name.empty() && fnmatch(pat.c_str(), raw_name.c_str(), 0) == 0)
      return true;
    if (!raw_email.empty() && fnmatch(pat.c_str(), raw_email.c_str(), 0) == 0)
      return true;
  }
  return false;
}

}  // namespace embermine
