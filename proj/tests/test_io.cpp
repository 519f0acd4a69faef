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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "corrgraph/config.hpp"
#include "corrgraph/error.hpp"
#include "corrgraph/io.hpp"

using namespace corrgraph;
using nlohmann::json;

namespace {

DataTable parse(const std::string& text, bool header = true) {
  std::istringstream in(text);
  return read_csv(in, header);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::string config_error(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json minimal() { return json{{"schema", kRunConfigSchema}}; }

}  // namespace

TEST_CASE("CSV reader", "[io]") {
  const DataTable t = parse("\xEF\xBB\xBF" "a,\"b,c\",d\r\n1,2.5,-3e2\r\n+4, 5 ,6\r\n\r\n");
  CHECK(t.names == std::vector<std::string>{"a", "b,c", "d"});
  REQUIRE(t.values.rows() == 2);
  CHECK(t.values(0, 2) == -300.0);
  CHECK(t.values(1, 0) == 4.0);
  CHECK(t.values(1, 1) == 5.0);

  const DataTable plain = parse("1,2\n3,4\n", false);
  CHECK(plain.names == std::vector<std::string>{"V1", "V2"});
  CHECK(plain.values(1, 1) == 4.0);
}

TEST_CASE("CSV errors carry the line number", "[io]") {
  CHECK(parse_error_line("a,b\n1,2\n3\n") == 3);
  CHECK(parse_error_line("a,b\n1,2\n3,x\n") == 3);
  CHECK(parse_error_line("a,b\n1,nan\n") == 2);
  CHECK(parse_error_line("a,b\n1,2\n\n3,4\n") == 3);
  CHECK(parse_error_line("a,b\n1,2,\n") == 2);
  CHECK(parse_error_line("") == 1);
}

TEST_CASE("number formatting round-trips", "[io]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.05) == "0.05");
}

TEST_CASE("edge records report the rejecting round", "[io]") {
  const std::vector<std::string> names = {"x", "y", "z"};
  const StatVector stats{StatKind::Empirical, {5.0, 2.3, 0.1}, 100};
  const RejectionSet r = step_down(Method::Sidak, stats, {}, 0.05);
  REQUIRE(r.thresholds.size() == 3);
  const auto rec = edge_records(names, stats, r);
  REQUIRE(rec.size() == 3);
  CHECK(rec[0].i == 1);
  CHECK(rec[0].j == 2);
  CHECK(rec[1].name_j == "z");
  CHECK(rec[0].rejected);
  CHECK(rec[0].threshold == r.thresholds[0]);
  CHECK(rec[1].rejected);
  CHECK(rec[1].threshold == r.thresholds[1]);
  CHECK_FALSE(rec[2].rejected);
  CHECK(rec[2].threshold == r.thresholds.back());

  std::ostringstream csv, dot;
  write_edges_csv(csv, rec);
  CHECK(csv.str().rfind("i,j,name_i,name_j,statistic,p_value,threshold,rejected\n1,2,x,y,5,", 0) == 0);
  write_edges_dot(dot, names, rec);
  CHECK(dot.str().find("n1 -- n2;") != std::string::npos);
  CHECK(dot.str().find("n2 -- n3;") == std::string::npos);
}

TEST_CASE("metrics CSV writes NA for undefined power", "[io]") {
  MetricsRow row;
  row.stat = StatKind::Fisher;
  row.procedure = {Method::Sidak, true};
  row.n = 300;
  row.p_inter = 0.4;
  row.rho = 0.2;
  row.replicates = 10;
  row.fwer = 0.1;
  std::ostringstream out;
  write_metrics_csv(out, {row});
  CHECK(out.str() ==
        "stat,method,stepdown,n,p_inter,rho,replicates,fwer,fwer_se,power,power_se,fdp,fdp_se\n"
        "fisher,sidak,1,300,0.4,0.2,10,0.1,0,NA,NA,0,0\n");
}

TEST_CASE("run config parsing", "[io][config]") {
  json doc = minimal();
  doc["p_inter"] = {0.01, 0.4};
  doc["stats"] = {"fisher", "student"};
  doc["procedures"] = {"sidak", "sidak:stepdown", json{{"method", "maxt"}, {"stepdown", true}}};
  doc["replicates"] = 10;
  doc["seed"] = 99;
  const RunConfig c = parse_run_config(doc);
  CHECK(c.experiment.p_inter == std::vector<double>{0.01, 0.4});
  CHECK(c.experiment.stats == std::vector<StatKind>{StatKind::Fisher, StatKind::Student});
  REQUIRE(c.experiment.procedures.size() == 3);
  CHECK(c.experiment.procedures[1] == ProcedureKind{Method::Sidak, true});
  CHECK(c.experiment.procedures[2] == ProcedureKind{Method::MaxT, true});
  CHECK(c.experiment.seed == 99);

  const RunConfig back = parse_run_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("run config errors name the key path", "[io][config]") {
  CHECK(config_error(json::object()).find("$.schema") != std::string::npos);
  CHECK(config_error(json{{"schema", "other/9"}}).find("$.schema") != std::string::npos);
  json doc = minimal();
  doc["replicate"] = 3;
  CHECK(config_error(doc).find("$.replicate: unknown key") != std::string::npos);
  doc = minimal();
  doc["procedures"] = {"sidak", json{{"method", "holm"}}};
  CHECK(config_error(doc).find("$.procedures[1]") != std::string::npos);
  doc = minimal();
  doc["procedures"] = {json{{"method", "sidak"}, {"step", true}}};
  CHECK(config_error(doc).find("$.procedures[0].step") != std::string::npos);
  doc = minimal();
  doc["p_inter"] = {0.1, 2.0};
  CHECK(config_error(doc).find("$.p_inter[1]") != std::string::npos);
  doc = minimal();
  doc["n"] = "100";
  CHECK(config_error(doc).find("$.n") != std::string::npos);
  doc = minimal();
  doc["alpha"] = 0.0;
  CHECK(config_error(doc).find("$.alpha") != std::string::npos);
  doc = minimal();
  doc["stats"] = {"spearman"};
  CHECK(config_error(doc).find("$.stats[0]") != std::string::npos);
}
