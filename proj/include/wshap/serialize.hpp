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

#ifndef WSHAP_SERIALIZE_HPP
#define WSHAP_SERIALIZE_HPP

#include <json.hpp>
#include <string>

#include "wshap/amortized.hpp"
#include "wshap/evaluation.hpp"
#include "wshap/nn.hpp"
#include "wshap/oracle.hpp"

namespace wshap {

inline constexpr int kSchemaVersion = 1;

// Every document carries a `schema_version` field and round-trips
// losslessly (doubles serialize at full precision).
nlohmann::json to_json(const Attribution& a);
Attribution attribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& r);
EvalReport eval_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HessianReport& r);
HessianReport hessian_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AttentionValuator& net);
AttentionValuator attention_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundAudit& audit);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace wshap

#endif  // WSHAP_SERIALIZE_HPP
