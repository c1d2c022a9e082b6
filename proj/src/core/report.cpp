// Copyright 2026 The eitk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eitk/report.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "eitk/params.hpp"
#include "json.hpp"

namespace eitk {
namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string JsonNumber(double v) {
  return std::isfinite(v) ? FormatNumber(v) : "null";
}

std::string Hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

}  // namespace

double ExperimentReport::Get(const std::string& key) const {
  const auto it = statistics.find(key);
  if (it == statistics.end()) {
    throw InvalidArgument("report has no statistic " + key);
  }
  return it->second;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string FormatLabel(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string ReportToJson(const ExperimentReport& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << Quote(r.name) << ",\n";
  os << "  \"params_hash\": " << Quote(Hex64(r.params_hash)) << ",\n";
  os << "  \"seed\": " << r.seed << ",\n";
  os << "  \"n\": " << r.n << ",\n";
  os << "  \"statistics\": {";
  bool first = true;
  for (const auto& [k, v] : r.statistics) {
    os << (first ? "\n" : ",\n") << "    " << Quote(k) << ": " << JsonNumber(v);
    first = false;
  }
  os << (first ? "},\n" : "\n  },\n");
  os << "  \"labels\": {";
  first = true;
  for (const auto& [k, v] : r.labels) {
    os << (first ? "\n" : ",\n") << "    " << Quote(k) << ": " << Quote(v);
    first = false;
  }
  os << (first ? "},\n" : "\n  },\n");
  os << "  \"notes\": [";
  first = true;
  for (const auto& note : r.notes) {
    os << (first ? "\n" : ",\n") << "    " << Quote(note);
    first = false;
  }
  os << (first ? "],\n" : "\n  ],\n");
  os << "  \"verdict\": " << (r.verdict ? "true" : "false") << "\n";
  os << "}\n";
  return os.str();
}

std::string TableToCsv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += FormatNumber(row[i]);
    }
    out += '\n';
  }
  return out;
}

ExperimentReport ReportFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("verdict") ||
      !j["name"].is_string() || !j["verdict"].is_boolean()) {
    throw InvalidArgument("report lacks name or verdict");
  }
  ExperimentReport r;
  r.name = j["name"].get<std::string>();
  r.verdict = j["verdict"].get<bool>();
  if (j.contains("params_hash") && j["params_hash"].is_string()) {
    r.params_hash = std::stoull(j["params_hash"].get<std::string>(), nullptr, 16);
  }
  if (j.contains("seed") && j["seed"].is_number_unsigned()) {
    r.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("n") && j["n"].is_number_unsigned()) {
    r.n = j["n"].get<std::size_t>();
  }
  if (j.contains("statistics") && j["statistics"].is_object()) {
    for (const auto& [k, v] : j["statistics"].items()) {
      r.statistics[k] = v.is_number() ? v.get<double>() : std::nan("");
    }
  }
  if (j.contains("labels") && j["labels"].is_object()) {
    for (const auto& [k, v] : j["labels"].items()) {
      if (v.is_string()) r.labels[k] = v.get<std::string>();
    }
  }
  if (j.contains("notes") && j["notes"].is_array()) {
    for (const auto& v : j["notes"]) {
      if (v.is_string()) r.notes.push_back(v.get<std::string>());
    }
  }
  return r;
}

bool Aggregate::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const AggregateRow& r) { return r.verdict; });
}

std::string Aggregate::ToCsv() const {
  std::string out = "file,name,verdict,key,value\n";
  for (const auto& r : rows) {
    out += r.file + "," + r.name + "," + (r.verdict ? "PASS" : "FAIL") + "," +
           r.key + "," + FormatNumber(r.value) + "\n";
  }
  return out;
}

Aggregate AggregateReports(const std::string& dir) {
  namespace fs = std::filesystem;
  Aggregate agg;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw InvalidArgument("not a directory: " + dir);
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(dir, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file() && it->path().filename() == "report.json") {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      const ExperimentReport r = ReportFromJson(ss.str());
      AggregateRow row;
      row.file = fs::relative(f, dir, ec).generic_string();
      row.name = r.name;
      row.verdict = r.verdict;
      const auto key = r.labels.find("key_statistic");
      if (key != r.labels.end() && r.Has(key->second)) {
        row.key = key->second;
      } else if (!r.statistics.empty()) {
        row.key = r.statistics.begin()->first;
      }
      row.value = row.key.empty() ? std::nan("") : r.Get(row.key);
      agg.rows.push_back(std::move(row));
    } catch (const InvalidArgument& e) {
      agg.warnings.push_back(f.generic_string() + ": " + e.what());
    }
  }
  return agg;
}

int ResolveWorkers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace eitk
