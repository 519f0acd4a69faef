// Copyright 2026 The corrgraph Authors.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrgraph/core.hpp"
#include "corrgraph/procedures.hpp"
#include "corrgraph/simulation.hpp"
#include "corrgraph/statistics.hpp"

namespace corrgraph {

/// Numeric CSV body with its column names.
struct DataTable {
  std::vector<std::string> names;
  Matrix values;
};

/// Reads comma-separated numbers. With `header`, the first record holds the
/// column names; otherwise names are "V1", "V2", ... A UTF-8 byte order mark
/// and CRLF line ends are accepted, trailing blank lines ignored. Throws
/// ParseError with the 1-based line number.
DataTable read_csv(std::istream& in, bool header = true);
DataTable read_csv_file(const std::string& path, bool header = true);

/// Square matrix file; a header row is detected when its first field is not
/// a number.
DataTable read_matrix_csv_file(const std::string& path);

/// Shortest decimal form that round-trips exactly, so files are byte-stable.
std::string format_double(double value);

struct EdgeRecord {
  int i = 0;  // 1-based, i < j
  int j = 0;
  std::string name_i;
  std::string name_j;
  double statistic = 0.0;
  double p_value = 0.0;
  /// Threshold of the round that rejected the pair, or of the last round.
  /// p-value scale for Bonferroni and BH, |T| scale otherwise.
  double threshold = 0.0;
  bool rejected = false;
};

std::vector<EdgeRecord> edge_records(const std::vector<std::string>& names,
                                     const StatVector& stats, const RejectionSet& rejection);

void write_edges_csv(std::ostream& out, const std::vector<EdgeRecord>& records);
/// Undirected graph of the rejected pairs; every variable is a node.
void write_edges_dot(std::ostream& out, const std::vector<std::string>& names,
                     const std::vector<EdgeRecord>& records);
void write_matrix_csv(std::ostream& out, const Matrix& values,
                      const std::vector<std::string>& names);
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_histograms_csv(std::ostream& out, const std::vector<CorrelationHistogram>& histograms);

/// Opens `path` for writing or throws Error.
void write_file(const std::string& path, const std::string& contents);

}  // namespace corrgraph
