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

#ifndef EMBERMINE_AUTHORS_HPP
#define EMBERMINE_AUTHORS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace embermine {

inline constexpr const char* kTemplateAuthor = "TEMPLATE";
inline constexpr const char* kUnknownAuthor = "UNKNOWN";

// Mailmap-style identity folding. Map lines read `canonical [name...] email`;
// the email is the last whitespace-separated token. Unknown identities fall
// back to the lowercased email (or name when the email is empty).
class AuthorMap {
 public:
  AuthorMap() = default;

  // Throws ConfigError naming the offending line.
  static AuthorMap load_file(const std::string& path);
  static AuthorMap parse(const std::string& text, const std::string& origin);

  void add(const std::string& canonical, const std::string& name,
           const std::string& email);
  std::string canonical(const std::string& name, const std::string& email) const;
  bool empty() const { return by_pair_.empty() && by_email_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string> by_pair_;
  std::map<std::string, std::string> by_email_;
};

// Instructor-provided code: commits authored before the project start or by
// an author matching one of the glob patterns belong to TEMPLATE.
struct TemplatePolicy {
  std::int64_t start_epoch = -1;  // < 0 disables the date rule
  std::vector<std::string> author_patterns;

  bool is_template(const std::string& author_id, const std::string& raw_name,
                   const std::string& raw_email, std::int64_t author_time) const;
};

}  // namespace embermine

#endif  // EMBERMINE_AUTHORS_HPP
