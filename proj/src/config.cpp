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

#include "corrgraph/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "corrgraph/error.hpp"

namespace corrgraph {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
  }

  std::string key(const std::string& name) const { return path_ + "." + name; }

  const json* find(const std::string& name) {
    seen_.insert(name);
    const auto it = doc_.find(name);
    return it == doc_.end() ? nullptr : &*it;
  }

  template <typename T, typename Check>
  void scalar(const std::string& name, T& target, Check check) {
    const json* v = find(name);
    if (!v) return;
    target = convert<T>(*v, key(name));
    check(target, key(name));
  }

  template <typename T, typename Check>
  void list(const std::string& name, std::vector<T>& target, Check check) {
    const json* v = find(name);
    if (!v) return;
    if (!v->is_array()) fail(key(name), "expected an array");
    target.clear();
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string path = key(name) + "[" + std::to_string(k) + "]";
      target.push_back(convert<T>((*v)[k], path));
      check(target.back(), path);
    }
    if (target.empty()) fail(key(name), "must not be empty");
  }

  void reject_unknown() const {
    for (const auto& item : doc_.items())
      if (!seen_.count(item.key())) fail(key(item.key()), "unknown key");
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(path, "expected a number");
      return v.get<T>();
    } else {
      if (!v.is_number_integer()) fail(path, "expected an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() &&
          v.get<std::int64_t>() < 0)
        fail(path, "must be non-negative");
      return v.get<T>();
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void probability(double v, const std::string& path) {
  if (!(v >= 0.0 && v <= 1.0)) Reader::fail(path, "must lie in [0, 1]");
}

constexpr auto any = [](const auto&, const std::string&) {};

ProcedureKind parse_procedure(const json& v, const std::string& path) {
  std::string method_name;
  ProcedureKind kind;
  if (v.is_string()) {
    // "sidak" or "sidak:stepdown"
    method_name = v.get<std::string>();
    const auto colon = method_name.find(':');
    if (colon != std::string::npos) {
      if (method_name.substr(colon + 1) != "stepdown")
        Reader::fail(path, "unknown modifier '" + method_name.substr(colon + 1) + "'");
      kind.stepdown = true;
      method_name.resize(colon);
    }
  } else {
    Reader r(v, path);
    r.scalar("method", method_name, any);
    r.scalar("stepdown", kind.stepdown, any);
    r.reject_unknown();
    if (method_name.empty()) Reader::fail(path + ".method", "required");
  }
  const auto method = parse_method(method_name);
  if (!method) Reader::fail(path, "unknown method '" + method_name + "'");
  kind.method = *method;
  if (kind.method == Method::BH && kind.stepdown) Reader::fail(path, "bh has no step-down variant");
  return kind;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  Reader r(doc, "$");
  RunConfig config;
  ExperimentConfig& e = config.experiment;

  std::string schema;
  r.scalar("schema", schema, any);
  if (schema.empty()) Reader::fail("$.schema", std::string("required, expected \"") + kRunConfigSchema + "\"");
  if (schema != kRunConfigSchema)
    Reader::fail("$.schema", "unsupported schema '" + schema + "', expected '" + kRunConfigSchema + "'");

  r.scalar("p", e.p, [](int v, const std::string& path) {
    if (v < 2 || v % 2 != 0) Reader::fail(path, "must be even and at least 2");
  });
  r.scalar("p_intra", e.p_intra, probability);
  r.list("p_inter", e.p_inter, probability);
  r.list("rho", e.rho, [](double v, const std::string& path) {
    if (!(std::abs(v) < 1.0)) Reader::fail(path, "must lie in (-1, 1)");
  });
  r.list("n", e.n, [](int v, const std::string& path) {
    if (v < kMinObservations) Reader::fail(path, "must be at least " + std::to_string(kMinObservations));
  });

  if (const json* stats = r.find("stats")) {
    if (!stats->is_array() || stats->empty()) Reader::fail("$.stats", "expected a non-empty array");
    e.stats.clear();
    for (std::size_t k = 0; k < stats->size(); ++k) {
      const std::string path = "$.stats[" + std::to_string(k) + "]";
      const auto kind = parse_stat_kind(Reader::convert<std::string>((*stats)[k], path));
      if (!kind) Reader::fail(path, "unknown statistic '" + (*stats)[k].get<std::string>() + "'");
      e.stats.push_back(*kind);
    }
  }
  if (const json* procs = r.find("procedures")) {
    if (!procs->is_array() || procs->empty()) Reader::fail("$.procedures", "expected a non-empty array");
    e.procedures.clear();
    for (std::size_t k = 0; k < procs->size(); ++k)
      e.procedures.push_back(parse_procedure((*procs)[k], "$.procedures[" + std::to_string(k) + "]"));
  }

  r.scalar("alpha", e.alpha, [](double v, const std::string& path) {
    if (!(v > 0.0 && v < 1.0)) Reader::fail(path, "must lie in (0, 1)");
  });
  r.scalar("replicates", e.replicates, [](int v, const std::string& path) {
    if (v < 1) Reader::fail(path, "must be at least 1");
  });
  r.scalar("bootrw_draws", e.bootrw_draws, [](std::size_t v, const std::string& path) {
    if (v < 50) Reader::fail(path, "must be at least 50");
  });
  r.scalar("maxt_draws", e.maxt_draws, [](std::size_t v, const std::string& path) {
    if (v < 100) Reader::fail(path, "must be at least 100");
  });
  r.scalar("seed", e.seed, any);
  r.scalar("threads", e.threads, [](int v, const std::string& path) {
    if (v < 0) Reader::fail(path, "must be non-negative");
  });
  r.scalar("redraw_adjacency", e.redraw_adjacency, any);
  r.scalar("fourth_moment_plugin", e.fourth_moment_plugin, any);
  r.scalar("adjacency_attempts", e.adjacency_attempts, [](int v, const std::string& path) {
    if (v < 1) Reader::fail(path, "must be at least 1");
  });
  r.scalar("histogram_bins", e.histogram_bins, [](int v, const std::string& path) {
    if (v < 0) Reader::fail(path, "must be non-negative");
  });
  std::string histogram_output;
  r.scalar("histogram_output", histogram_output, any);
  if (!histogram_output.empty()) config.histogram_output = histogram_output;
  r.reject_unknown();

  if (config.histogram_output && e.histogram_bins == 0) e.histogram_bins = 40;
  e.validate();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$: invalid JSON in '" + path + "': " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& config) {
  const ExperimentConfig& e = config.experiment;
  json doc;
  doc["schema"] = kRunConfigSchema;
  doc["p"] = e.p;
  doc["p_intra"] = e.p_intra;
  doc["p_inter"] = e.p_inter;
  doc["rho"] = e.rho;
  doc["n"] = e.n;
  doc["stats"] = json::array();
  for (StatKind k : e.stats) doc["stats"].push_back(std::string(to_string(k)));
  doc["procedures"] = json::array();
  for (const auto& proc : e.procedures)
    doc["procedures"].push_back(json{{"method", std::string(to_string(proc.method))},
                                     {"stepdown", proc.stepdown}});
  doc["alpha"] = e.alpha;
  doc["replicates"] = e.replicates;
  doc["bootrw_draws"] = e.bootrw_draws;
  doc["maxt_draws"] = e.maxt_draws;
  doc["seed"] = e.seed;
  doc["threads"] = e.threads;
  doc["redraw_adjacency"] = e.redraw_adjacency;
  doc["fourth_moment_plugin"] = e.fourth_moment_plugin;
  doc["adjacency_attempts"] = e.adjacency_attempts;
  doc["histogram_bins"] = e.histogram_bins;
  if (config.histogram_output) doc["histogram_output"] = *config.histogram_output;
  return doc;
}

}  // namespace corrgraph
