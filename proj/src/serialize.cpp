/*
 * Copyright 2026 The wshap authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wshap/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace wshap {

using nlohmann::json;

namespace {

void check_schema(const json& j, const char* what) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::runtime_error(std::string(what) + ": missing or unsupported schema_version");
  }
}

}  // namespace

json to_json(const Attribution& a) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "attribution"},
              {"method", a.method},
              {"n", a.n},
              {"alpha", a.alpha},
              {"beta", a.beta},
              {"seed", a.seed},
              {"n_samples", a.n_samples},
              {"values", a.values},
              {"std_err", a.std_err}};
}

Attribution attribution_from_json(const json& j) {
  check_schema(j, "attribution");
  Attribution a;
  a.method = j.at("method").get<std::string>();
  a.n = j.at("n").get<int>();
  a.alpha = j.at("alpha").get<double>();
  a.beta = j.at("beta").get<double>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.n_samples = j.at("n_samples").get<std::uint64_t>();
  a.values = j.at("values").get<std::vector<double>>();
  a.std_err = j.at("std_err").get<std::vector<double>>();
  a.validate();
  return a;
}

json to_json(const EvalReport& r) {
  json curve = json::array();
  for (const auto& p : r.curve) curve.push_back(json{{"x", p.x}, {"y", p.y}});
  return json{{"schema_version", kSchemaVersion},
              {"kind", "eval_report"},
              {"task", r.task},
              {"auc", r.auc},
              {"curve", curve},
              {"config", r.config}};
}

EvalReport eval_report_from_json(const json& j) {
  check_schema(j, "eval_report");
  EvalReport r;
  r.task = j.at("task").get<std::string>();
  r.auc = j.at("auc").get<double>();
  for (const auto& p : j.at("curve")) {
    r.curve.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
  }
  r.config = j.at("config").get<std::map<std::string, double>>();
  return r;
}

json to_json(const HessianReport& r) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "hessian_report"},
              {"n", r.n},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"a", r.a_diag},
              {"b", r.b_offdiag},
              {"lambda_numeric", r.lambda_min_numeric},
              {"lambda_paper", r.lambda_min_paper},
              {"lambda_derived", r.lambda_min_derived},
              {"mu", r.mu},
              {"sigma", r.sigma}};
}

HessianReport hessian_report_from_json(const json& j) {
  check_schema(j, "hessian_report");
  HessianReport r;
  r.n = j.at("n").get<int>();
  r.alpha = j.at("alpha").get<double>();
  r.beta = j.at("beta").get<double>();
  r.a_diag = j.at("a").get<double>();
  r.b_offdiag = j.at("b").get<double>();
  r.lambda_min_numeric = j.at("lambda_numeric").get<double>();
  r.lambda_min_paper = j.at("lambda_paper").get<double>();
  r.lambda_min_derived = j.at("lambda_derived").get<double>();
  r.mu = j.at("mu").get<double>();
  r.sigma = j.at("sigma").get<double>();
  return r;
}

json to_json(const Mlp& net) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "mlp"},
              {"dims", net.dims()},
              {"weights", net.flatten()}};
}

Mlp mlp_from_json(const json& j) {
  check_schema(j, "mlp");
  if (j.at("kind").get<std::string>() != "mlp") throw std::runtime_error("not an mlp document");
  Mlp net(j.at("dims").get<std::vector<int>>());
  net.load_flat(j.at("weights").get<std::vector<double>>());
  return net;
}

json to_json(const AttentionValuator& net) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "attention"},
              {"query", to_json(net.f_query())},
              {"key", to_json(net.f_key())},
              {"out", to_json(net.f_out())}};
}

AttentionValuator attention_from_json(const json& j) {
  check_schema(j, "attention");
  if (j.at("kind").get<std::string>() != "attention") {
    throw std::runtime_error("not an attention document");
  }
  Mlp query = mlp_from_json(j.at("query"));
  Mlp key = mlp_from_json(j.at("key"));
  Mlp out = mlp_from_json(j.at("out"));
  AttentionValuator v(query.input_dim(), query.dims()[1], query.output_dim());
  v.f_query() = std::move(query);
  v.f_key() = std::move(key);
  v.f_out() = std::move(out);
  return v;
}

json to_json(const BoundAudit& audit) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "bound_audit"},
              {"lhs", audit.lhs},
              {"loss_theta", audit.loss_theta},
              {"loss_star", audit.loss_star},
              {"sigma", audit.sigma},
              {"rhs", audit.rhs},
              {"violated", audit.violated}};
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace wshap
