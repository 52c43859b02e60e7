// SPDX-License-Identifier: Apache-2.0
#include "edgeqed/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef EDGEQED_VERSION
#define EDGEQED_VERSION "unknown"
#endif

namespace edgeqed {

void Table::add(const std::string& column, std::vector<double> values) {
  if (!columns.empty() && values.size() != rows())
    throw std::invalid_argument("column " + column + " has " + std::to_string(values.size()) + " rows, table has " +
                                std::to_string(rows()));
  names.push_back(column);
  columns.push_back(std::move(values));
}

Table table_from_series(const std::string& name, const TimeSeries& ts) {
  Table t;
  t.name = name;
  for (const auto& [k, v] : ts.metadata) t.header.emplace_back(k, v);
  t.header.emplace_back("t_unit", "1/J");
  t.add("t", ts.times);
  for (std::size_t i = 0; i < ts.names.size(); ++i) t.add(ts.names[i], ts.columns[i]);
  return t;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.header) os << "# " << k << '=' << v << '\n';
  for (std::size_t c = 0; c < t.names.size(); ++c) os << (c ? "," : "") << t.names[c];
  os << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << format_number(t.columns[c][r]);
    os << '\n';
  }
}

Json table_to_json(const Table& t) {
  Json header = Json::object();
  for (const auto& [k, v] : t.header) header[k] = v;
  Json cols = Json::object();
  for (std::size_t c = 0; c < t.names.size(); ++c) cols[t.names[c]] = t.columns[c];
  return Json{{"header", header}, {"columns", cols}};
}

std::string write_artifact(const std::string& dir, const std::string& file, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path p = fs::path(dir) / file;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
  if (!out) throw ConfigError("write failed: " + p.string());
  return p.string();
}

Json make_manifest(const std::vector<std::string>& command, const Json& resolved_config, int threads,
                   const std::vector<std::string>& artifacts) {
  return Json{{"tool", "edgeqed"},
              {"version", code_version()},
              {"command", command},
              {"threads", threads},
              {"config", resolved_config},
              {"artifacts", artifacts}};
}

const char* code_version() { return EDGEQED_VERSION; }

}  // namespace edgeqed
