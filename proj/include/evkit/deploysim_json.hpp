// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evkit/deploysim.hpp"

// JSON (de)serialization for the simulator profiles. Field names mirror the
// struct members; quant schemes are spelled "fp16" or "q4_block(N)".
namespace evkit::deploysim {

DeviceProfile device_from_json(const nlohmann::json& j, const std::string& ctx = "device");
ModelProfile model_from_json(const nlohmann::json& j, const std::string& ctx = "model");
DeployConfig config_from_json(const nlohmann::json& j, const std::string& ctx = "config");
std::vector<DeployConfig> space_from_json(const nlohmann::json& j,
                                          const std::string& ctx = "space");

quant::MemoryScheme scheme_from_string(const std::string& s, const std::string& ctx);
std::string scheme_to_string(const quant::MemoryScheme& scheme);

nlohmann::ordered_json to_json(const DeployConfig& config);
nlohmann::ordered_json to_json(const SimMetrics& metrics);

} // namespace evkit::deploysim
