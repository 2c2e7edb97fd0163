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

#ifndef EMBERMINE_HASH_HPP
#define EMBERMINE_HASH_HPP

#include <string>
#include <string_view>

namespace embermine {

// Lowercase hex SHA-1 of the bytes.
std::string sha1_hex(std::string_view data);

// Hash git assigns a blob with this content ("blob <len>\0" + content).
// Used to cross-check extracted snapshots against ls-tree object ids.
std::string git_blob_sha1(std::string_view content);

}  // namespace embermine

#endif  // EMBERMINE_HASH_HPP
