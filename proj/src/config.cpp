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

#include "embermine/config.hpp"

#include <time.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "embermine/errors.hpp"
#include "embermine/hash.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace embermine {

namespace {

json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " '" + path + "': " + e.what());
  }
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(where + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::set<std::string> string_set(const json& v, const std::string& where) {
  auto list = string_list(v, where);
  return {list.begin(), list.end()};
}

std::string resolve_against(const std::string& base_file, const std::string& p) {
  fs::path cand(p);
  if (cand.is_absolute()) return cand.string();
  return (fs::path(base_file).parent_path() / cand).string();
}

void require_exists(const std::string& p, const std::string& what) {
  if (!fs::exists(p))
    throw ConfigError(what + " '" + p + "' does not exist");
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::size_t min_cols,
                                               const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t i = 0;
    for (;;) {
      std::size_t j = line.find(',', i);
      std::string cell = j == std::string::npos ? line.substr(i)
                                                : line.substr(i, j - i);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.erase(cell.begin());
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
        cell.pop_back();
      cols.push_back(cell);
      if (j == std::string::npos) break;
      i = j + 1;
    }
    if (cols.size() < min_cols)
      throw ConfigError(std::string(what) + " '" + path + "' line " +
                        std::to_string(lineno) + ": expected at least " +
                        std::to_string(min_cols) + " columns");
    rows.push_back(std::move(cols));
  }
  return rows;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end != nullptr && *end == '\0';
}

}  // namespace

std::int64_t parse_iso_date(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
  if (n != 3 && n != 6)
    throw ConfigError("invalid date '" + text + "' (expected YYYY-MM-DD or "
                      "YYYY-MM-DDTHH:MM:SS)");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0 || s > 60)
    throw ConfigError("invalid date '" + text + "'");
  struct tm tm = {};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  time_t t = timegm(&tm);
  if (t == static_cast<time_t>(-1))
    throw ConfigError("invalid date '" + text + "'");
  return static_cast<std::int64_t>(t);
}

RunConfig load_run_config(const std::string& path) {
  json doc = load_json_file(path, "config");
  expect_keys(doc, "config",
              {"rules", "external", "authors_map", "project",
               "template_authors", "out_dir", "cluster_boundary"});
  RunConfig cfg;

  if (doc.contains("rules")) {
    const json& r = doc["rules"];
    expect_keys(r, "config.rules",
                {"slow_call_names", "isr_patterns", "isr_registration_calls",
                 "allow_static_inline_in_headers", "accept_pragma_once_as_guard",
                 "global_var_allowlist", "critical_rules"});
    if (r.contains("slow_call_names"))
      cfg.rules.slow_call_names =
          string_set(r["slow_call_names"], "config.rules.slow_call_names");
    if (r.contains("isr_patterns"))
      cfg.rules.isr.patterns =
          string_list(r["isr_patterns"], "config.rules.isr_patterns");
    if (r.contains("isr_registration_calls"))
      cfg.rules.isr.registration_calls = string_list(
          r["isr_registration_calls"], "config.rules.isr_registration_calls");
    if (r.contains("allow_static_inline_in_headers"))
      cfg.rules.allow_static_inline_in_headers =
          r["allow_static_inline_in_headers"].get<bool>();
    if (r.contains("accept_pragma_once_as_guard"))
      cfg.rules.accept_pragma_once_as_guard =
          r["accept_pragma_once_as_guard"].get<bool>();
    if (r.contains("global_var_allowlist"))
      cfg.rules.global_var_allowlist = string_set(
          r["global_var_allowlist"], "config.rules.global_var_allowlist");
    if (r.contains("critical_rules"))
      cfg.rules.critical_rules =
          string_set(r["critical_rules"], "config.rules.critical_rules");
  }

  if (doc.contains("external")) {
    const json& e = doc["external"];
    expect_keys(e, "config.external", {"path", "extra_args", "timeout_s"});
    if (e.contains("path")) {
      // A bare command name is looked up on PATH at run time; only values
      // naming a file are anchored to the config and checked here.
      std::string exe = e["path"].get<std::string>();
      if (exe.find('/') == std::string::npos) {
        cfg.external.path = exe;
      } else {
        cfg.external.path = resolve_against(path, exe);
        require_exists(cfg.external.path, "config.external.path");
      }
    }
    if (e.contains("extra_args"))
      cfg.external.extra_args =
          string_list(e["extra_args"], "config.external.extra_args");
    if (e.contains("timeout_s")) {
      cfg.external.timeout_s = e["timeout_s"].get<int>();
      if (cfg.external.timeout_s <= 0)
        throw ConfigError("config.external.timeout_s must be positive");
    }
  }

  if (doc.contains("authors_map")) {
    cfg.authors_map_path =
        resolve_against(path, doc["authors_map"].get<std::string>());
    require_exists(cfg.authors_map_path, "config.authors_map");
    cfg.authors = AuthorMap::load_file(cfg.authors_map_path);
  }

  if (doc.contains("project")) {
    const json& p = doc["project"];
    expect_keys(p, "config.project", {"start", "deadline"});
    if (p.contains("start"))
      cfg.project_start = parse_iso_date(p["start"].get<std::string>());
    if (p.contains("deadline"))
      cfg.project_deadline = parse_iso_date(p["deadline"].get<std::string>());
    if (cfg.project_start && cfg.project_deadline &&
        *cfg.project_deadline <= *cfg.project_start)
      throw ConfigError("project deadline must be after the start date");
  }

  if (doc.contains("template_authors"))
    cfg.template_authors =
        string_list(doc["template_authors"], "config.template_authors");
  if (doc.contains("out_dir"))
    cfg.out_dir = resolve_against(path, doc["out_dir"].get<std::string>());
  if (doc.contains("cluster_boundary")) {
    cfg.cluster_boundary = doc["cluster_boundary"].get<double>();
    if (cfg.cluster_boundary <= 0.5 || cfg.cluster_boundary >= 1.0)
      throw ConfigError("config.cluster_boundary must lie in (0.5, 1.0)");
  }
  return cfg;
}

CohortManifest load_manifest(const std::string& path) {
  json doc = load_json_file(path, "manifest");
  expect_keys(doc, "manifest", {"repos", "labs_csv", "grades_csv"});
  CohortManifest m;
  if (!doc.contains("repos") || !doc["repos"].is_array() || doc["repos"].empty())
    throw ConfigError("manifest '" + path + "' must list at least one repo");
  for (const json& r : doc["repos"]) {
    expect_keys(r, "manifest.repos entry",
                {"path", "group_id", "members", "kind", "project"});
    RepoSpec spec;
    if (!r.contains("path"))
      throw ConfigError("manifest repo entry lacks 'path'");
    spec.path = resolve_against(path, r["path"].get<std::string>());
    if (r.contains("group_id")) spec.group_id = r["group_id"].get<std::string>();
    if (r.contains("members"))
      spec.members = string_list(r["members"], "manifest repo members");
    if (r.contains("kind")) {
      spec.kind = r["kind"].get<std::string>();
      if (spec.kind != "project" && spec.kind != "lab")
        throw ConfigError("manifest repo kind must be 'project' or 'lab', got '" +
                          spec.kind + "'");
    }
    if (r.contains("project")) spec.project_tag = r["project"].get<std::string>();
    m.repos.push_back(std::move(spec));
  }
  if (doc.contains("labs_csv")) {
    m.labs_csv = resolve_against(path, doc["labs_csv"].get<std::string>());
    require_exists(m.labs_csv, "manifest.labs_csv");
  }
  if (doc.contains("grades_csv")) {
    m.grades_csv = resolve_against(path, doc["grades_csv"].get<std::string>());
    require_exists(m.grades_csv, "manifest.grades_csv");
  }
  return m;
}

std::vector<LabRow> load_labs_csv(const std::string& path) {
  auto rows = read_csv(path, 3, "labs csv");
  std::vector<LabRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && !is_number(rows[i][2])) continue;  // header row
    LabRow row;
    row.author_id = rows[i][0];
    row.assessment_id = rows[i][1];
    if (!is_number(rows[i][2]))
      throw ConfigError("labs csv '" + path + "': occurrence_count '" +
                        rows[i][2] + "' is not a number");
    row.occurrence_count = std::strtol(rows[i][2].c_str(), nullptr, 10);
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::string, double> load_grades_csv(const std::string& path) {
  auto rows = read_csv(path, 2, "grades csv");
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && !is_number(rows[i][1])) continue;  // header row
    if (!is_number(rows[i][1]))
      throw ConfigError("grades csv '" + path + "': grade '" + rows[i][1] +
                        "' is not a number");
    out[rows[i][0]] = std::strtod(rows[i][1].c_str(), nullptr);
  }
  return out;
}

std::string rule_config_digest(const RuleConfig& rules) {
  json j;
  j["slow_call_names"] = rules.slow_call_names;
  j["isr_patterns"] = rules.isr.patterns;
  j["isr_registration_calls"] = rules.isr.registration_calls;
  j["allow_static_inline_in_headers"] = rules.allow_static_inline_in_headers;
  j["accept_pragma_once_as_guard"] = rules.accept_pragma_once_as_guard;
  j["global_var_allowlist"] = rules.global_var_allowlist;
  j["critical_rules"] = rules.critical_rules;
  return sha1_hex(j.dump());
}

}  // namespace embermine
