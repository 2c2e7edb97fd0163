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

#ifndef EMBERMINE_ERRORS_HPP
#define EMBERMINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace embermine {

// Base for all tool errors. `kind()` is the machine-readable tag that ends
// up in failure manifests and CLI error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define EMBERMINE_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

EMBERMINE_DEFINE_ERROR(ConfigError);
EMBERMINE_DEFINE_ERROR(RepoOpenError);
EMBERMINE_DEFINE_ERROR(ObjectMissing);
EMBERMINE_DEFINE_ERROR(BlameRangeError);
EMBERMINE_DEFINE_ERROR(AnalyzerUnavailable);
EMBERMINE_DEFINE_ERROR(AnalyzerFailed);
EMBERMINE_DEFINE_ERROR(AnalyzerTimeout);
EMBERMINE_DEFINE_ERROR(ReportParseError);
EMBERMINE_DEFINE_ERROR(EmptySampleError);
EMBERMINE_DEFINE_ERROR(DegenerateInput);
EMBERMINE_DEFINE_ERROR(ShapeError);
EMBERMINE_DEFINE_ERROR(ShareError);
EMBERMINE_DEFINE_ERROR(IoError);

#undef EMBERMINE_DEFINE_ERROR

}  // namespace embermine

#endif  // EMBERMINE_ERRORS_HPP
