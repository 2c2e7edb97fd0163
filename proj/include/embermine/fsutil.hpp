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

#ifndef EMBERMINE_FSUTIL_HPP
#define EMBERMINE_FSUTIL_HPP

#include <string>

namespace embermine {

// Whole-file read; throws IoError when the file cannot be opened.
std::string read_text_file(const std::string& path);

// Writes via a sibling temp file plus rename, so readers never observe a
// truncated file. Throws IoError.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace embermine

#endif  // EMBERMINE_FSUTIL_HPP
