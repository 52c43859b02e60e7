// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "edgeqed/config.hpp"
#include "edgeqed/dynamics.hpp"

namespace edgeqed {

// Column table with a "# key=value" header block (units, parameters).
struct Table {
  std::string name;  // file stem
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void add(const std::string& column, std::vector<double> values);
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

// Time series as a table with the time grid in the first column "t".
Table table_from_series(const std::string& name, const TimeSeries& ts);

// Shortest decimal form that reads back to the same double ("%.17g" trimmed).
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);
Json table_to_json(const Table& t);

// Writes `content` to dir/file, creating dir. Throws ConfigError when not writable.
std::string write_artifact(const std::string& dir, const std::string& file, const std::string& content);

// Manifest recording everything needed to re-run: command line, resolved config, thread
// count, code version and the list of artifacts. No timestamps, so reruns match bytewise.
Json make_manifest(const std::vector<std::string>& command, const Json& resolved_config, int threads,
                   const std::vector<std::string>& artifacts);

const char* code_version();

}  // namespace edgeqed
