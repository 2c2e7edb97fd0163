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

#include "stub_analyzer.hpp"

#include <sys/stat.h>

#include <filesystem>
#include <fstream>

#include "embermine/errors.hpp"

namespace fs = std::filesystem;

namespace embermine::testing {

namespace {

// Shared scanning body: emits one <error> element per marker hit, in file
// then line order, XML on stderr like the real analyzer.
const char* kScanBody = R"SH(
emit() {
  printf '<?xml version="1.0" encoding="UTF-8"?>\n'
  printf '<results version="2">\n'
  printf '  <cppcheck version="stubcheck 2.0"/>\n'
  printf '  <errors>\n'
  for f in "$@"; do
    case "$f" in
      --*) continue ;;
    esac
    [ -f "$f" ] || continue
    awk -v FILE="$f" '
      /STUB_ZERODIV/ { printf "    <error id=\"zerodivcond\" severity=\"warning\" msg=\"possible division by zero\"><location file=\"%s\" line=\"%d\"/></error>\n", FILE, NR }
      /STUB_UNINIT/  { printf "    <error id=\"uninitvar\" severity=\"error\" msg=\"uninitialized variable\"><location file=\"%s\" line=\"%d\"/></error>\n", FILE, NR }
      /STUB_STYLE/   { printf "    <error id=\"constParameter\" severity=\"style\" msg=\"parameter can be declared const\"><location file=\"%s\" line=\"%d\"/></error>\n", FILE, NR }
    ' "$f"
  done
  printf '  </errors>\n'
  printf '</results>\n'
}
emit "$@" 1>&2
exit 0
)SH";

std::string write_script(const std::string& dir, const std::string& name,
                         const std::string& body) {
  fs::create_directories(dir);
  fs::path script = fs::path(dir) / name;
  {
    std::ofstream out(script, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + script.string());
    out << body;
  }
  if (chmod(script.c_str(), 0755) != 0)
    throw IoError("cannot chmod " + script.string());
  return script.string();
}

}  // namespace

std::string write_stub_analyzer(const std::string& dir) {
  std::string body = "#!/bin/sh\n"
                     "if [ \"$1\" = \"--version\" ]; then\n"
                     "  echo \"stubcheck 2.0\"\n"
                     "  exit 0\n"
                     "fi\n";
  body += kScanBody;
  return write_script(dir, "stubcheck", body);
}

std::string write_slow_stub_analyzer(const std::string& dir, int delay_s) {
  std::string body = "#!/bin/sh\n"
                     "if [ \"$1\" = \"--version\" ]; then\n"
                     "  echo \"stubcheck 2.0\"\n"
                     "  exit 0\n"
                     "fi\n"
                     "for f in \"$@\"; do\n"
                     "  case \"$f\" in --*) continue ;; esac\n"
                     "  [ -f \"$f\" ] || continue\n"
                     "  if grep -q STUB_SLOW \"$f\" 2>/dev/null; then\n"
                     "    sleep " +
                     std::to_string(delay_s) +
                     "\n"
                     "    break\n"
                     "  fi\n"
                     "done\n";
  body += kScanBody;
  return write_script(dir, "stubcheck-slow", body);
}

std::string write_flaky_stub_analyzer(const std::string& dir) {
  std::string body = "#!/bin/sh\n"
                     "if [ \"$1\" = \"--version\" ]; then\n"
                     "  echo \"stubcheck 2.0\"\n"
                     "  exit 0\n"
                     "fi\n"
                     "for f in \"$@\"; do\n"
                     "  case \"$f\" in --*) continue ;; esac\n"
                     "  [ -f \"$f\" ] || continue\n"
                     "  if grep -q STUB_CRASH \"$f\" 2>/dev/null; then\n"
                     "    echo \"internal error: exploded\" 1>&2\n"
                     "    exit 3\n"
                     "  fi\n"
                     "done\n";
  body += kScanBody;
  return write_script(dir, "stubcheck-flaky", body);
}

}  // namespace embermine::testing
