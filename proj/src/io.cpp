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

#include "corrgraph/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "corrgraph/error.hpp"

namespace corrgraph {

namespace {

// Splits one record; fields may be double-quoted with "" as escape.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& text, double& value) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

struct Lines {
  std::vector<std::string> text;
  std::vector<std::size_t> number;
};

Lines read_lines(std::istream& in) {
  Lines lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.text.push_back(line);
    lines.number.push_back(line_no);
  }
  while (!lines.text.empty() && trim(lines.text.back()).empty()) {
    lines.text.pop_back();
    lines.number.pop_back();
  }
  return lines;
}

DataTable parse_table(const Lines& lines, bool header) {
  DataTable table;
  std::size_t first = 0;
  std::size_t width = 0;
  if (header) {
    if (lines.text.empty()) throw ParseError("missing header row", 1);
    for (auto& name : split_record(lines.text[0], lines.number[0])) table.names.push_back(trim(name));
    width = table.names.size();
    first = 1;
  } else if (!lines.text.empty()) {
    width = split_record(lines.text[0], lines.number[0]).size();
    for (std::size_t c = 0; c < width; ++c) table.names.push_back("V" + std::to_string(c + 1));
  }
  const std::size_t rows = lines.text.size() - first;
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = lines.number[first + r];
    const auto fields = split_record(lines.text[first + r], line_no);
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v) || !std::isfinite(v)) {
        throw ParseError("field " + std::to_string(c + 1) + " is not a finite number: '" +
                             fields[c] + "'",
                         line_no);
      }
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return table;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace

DataTable read_csv(std::istream& in, bool header) { return parse_table(read_lines(in), header); }

DataTable read_csv_file(const std::string& path, bool header) {
  auto in = open_input(path);
  return read_csv(in, header);
}

DataTable read_matrix_csv_file(const std::string& path) {
  auto in = open_input(path);
  const Lines lines = read_lines(in);
  bool header = false;
  if (!lines.text.empty()) {
    double v = 0.0;
    header = !parse_number(split_record(lines.text[0], lines.number[0]).front(), v);
  }
  DataTable table = parse_table(lines, header);
  if (table.values.rows() != table.values.cols()) {
    throw ParseError("matrix is " + std::to_string(table.values.rows()) + " x " +
                         std::to_string(table.values.cols()) + ", expected square",
                     lines.number.empty() ? 1 : lines.number.back());
  }
  return table;
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::vector<EdgeRecord> edge_records(const std::vector<std::string>& names,
                                     const StatVector& stats, const RejectionSet& rejection) {
  const int p = static_cast<int>(names.size());
  if (pair_count(p) != stats.size()) throw ConfigError("names do not match the statistics");
  const PValueVector pv = rejection.pvalues ? *rejection.pvalues : p_values(stats);
  const Method method = rejection.procedure.method;
  const bool p_scale = method == Method::Bonferroni || method == Method::BH;

  std::vector<EdgeRecord> out;
  out.reserve(stats.size());
  std::size_t h = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j, ++h) {
      EdgeRecord rec;
      rec.i = i + 1;
      rec.j = j + 1;
      rec.name_i = names[static_cast<std::size_t>(i)];
      rec.name_j = names[static_cast<std::size_t>(j)];
      rec.statistic = stats.values[h];
      rec.p_value = pv.values[h];
      rec.rejected = rejection.contains(static_cast<std::uint32_t>(h));
      rec.threshold = rejection.thresholds.empty() ? 0.0 : rejection.thresholds.back();
      if (rec.rejected) {
        // Thresholds loosen from round to round; the first one passed is
        // the round of rejection.
        for (double t : rejection.thresholds) {
          const bool pass = p_scale ? rec.p_value <= t : std::fabs(rec.statistic) > t;
          if (pass) {
            rec.threshold = t;
            break;
          }
        }
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string dot_id(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void write_edges_csv(std::ostream& out, const std::vector<EdgeRecord>& records) {
  out << "i,j,name_i,name_j,statistic,p_value,threshold,rejected\n";
  for (const auto& r : records) {
    out << r.i << ',' << r.j << ',' << csv_field(r.name_i) << ',' << csv_field(r.name_j) << ','
        << format_double(r.statistic) << ',' << format_double(r.p_value) << ','
        << format_double(r.threshold) << ',' << (r.rejected ? 1 : 0) << '\n';
  }
}

void write_edges_dot(std::ostream& out, const std::vector<std::string>& names,
                     const std::vector<EdgeRecord>& records) {
  out << "graph corrgraph {\n";
  for (std::size_t k = 0; k < names.size(); ++k)
    out << "  n" << k + 1 << " [label=" << dot_id(names[k]) << "];\n";
  for (const auto& r : records)
    if (r.rejected) out << "  n" << r.i << " -- n" << r.j << ";\n";
  out << "}\n";
}

void write_matrix_csv(std::ostream& out, const Matrix& values,
                      const std::vector<std::string>& names) {
  for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << csv_field(names[k]);
  if (!names.empty()) out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      out << (c ? "," : "") << format_double(values(r, c));
    out << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "stat,method,stepdown,n,p_inter,rho,replicates,fwer,fwer_se,power,power_se,fdp,fdp_se\n";
  const auto na = [](bool ok, double v) { return ok ? format_double(v) : std::string("NA"); };
  for (const auto& r : rows) {
    const bool ok = !r.failed && r.replicates > 0;
    out << to_string(r.stat) << ',' << to_string(r.procedure.method) << ','
        << (r.procedure.stepdown ? 1 : 0) << ',' << r.n << ',' << format_double(r.p_inter) << ','
        << format_double(r.rho) << ',' << r.replicates << ',' << na(ok, r.fwer) << ','
        << na(ok, r.fwer_se) << ',' << na(ok && r.power.has_value(), r.power.value_or(0.0)) << ','
        << na(ok && r.power_se.has_value(), r.power_se.value_or(0.0)) << ',' << na(ok, r.fdp)
        << ',' << na(ok, r.fdp_se) << '\n';
  }
}

void write_histograms_csv(std::ostream& out, const std::vector<CorrelationHistogram>& histograms) {
  out << "n,p_inter,rho,bin_lower,bin_upper,null_count,alternative_count\n";
  for (const auto& h : histograms) {
    const std::size_t bins = h.null_counts.size();
    for (std::size_t b = 0; b < bins; ++b) {
      const double lo = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
      const double hi = -1.0 + 2.0 * static_cast<double>(b + 1) / static_cast<double>(bins);
      out << h.n << ',' << format_double(h.p_inter) << ',' << format_double(h.rho) << ','
          << format_double(lo) << ',' << format_double(hi) << ',' << h.null_counts[b] << ','
          << h.alternative_counts[b] << '\n';
    }
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace corrgraph
