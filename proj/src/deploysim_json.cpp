// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/deploysim_json.hpp"

#include <cstdio>

namespace evkit::deploysim {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object())
        throw InvalidArgument(ctx + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw InvalidArgument(ctx + "." + key + ": missing");
    return *it;
}

double real_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_number())
        throw InvalidArgument(ctx + "." + key + ": expected a number");
    return v.get<double>();
}

std::uint64_t uint_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw InvalidArgument(ctx + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

int int_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_number_integer())
        throw InvalidArgument(ctx + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string string_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_string())
        throw InvalidArgument(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

} // namespace

DeviceProfile device_from_json(const nlohmann::json& j, const std::string& ctx) {
    DeviceProfile d;
    d.cores = int_field(j, "cores", ctx);
    d.flops_per_core = real_field(j, "flops_per_core", ctx);
    d.memory_bytes = uint_field(j, "memory_bytes", ctx);
    d.load_bandwidth = real_field(j, "load_bandwidth", ctx);
    d.paging_penalty = real_field(j, "paging_penalty", ctx);
    if (j.contains("contention"))
        d.contention = real_field(j, "contention", ctx);
    d.validate();
    return d;
}

ModelProfile model_from_json(const nlohmann::json& j, const std::string& ctx) {
    ModelProfile m;
    m.vit_mem_bytes = uint_field(j, "vit_mem_bytes", ctx);
    m.llm_param_count = uint_field(j, "llm_param_count", ctx);
    m.vit_flops_per_image = real_field(j, "vit_flops_per_image", ctx);
    m.llm_prefill_flops_per_token = real_field(j, "llm_prefill_flops_per_token", ctx);
    m.llm_decode_flops_per_token = real_field(j, "llm_decode_flops_per_token", ctx);
    m.prompt_tokens = static_cast<std::int64_t>(uint_field(j, "prompt_tokens", ctx));
    m.validate();
    return m;
}

quant::MemoryScheme scheme_from_string(const std::string& s, const std::string& ctx) {
    if (s == "fp16")
        return quant::MemoryScheme::fp16();
    unsigned block = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "q4_block(%u)%n", &block, &consumed) == 1 &&
        static_cast<std::size_t>(consumed) == s.size() && block >= 1)
        return quant::MemoryScheme::q4_block(block);
    throw InvalidArgument(ctx + ": unknown quant scheme \"" + s +
                          "\", expected fp16 or q4_block(N)");
}

std::string scheme_to_string(const quant::MemoryScheme& scheme) {
    if (scheme.kind == quant::MemoryScheme::Kind::Fp16)
        return "fp16";
    return "q4_block(" + std::to_string(scheme.block_size) + ")";
}

DeployConfig config_from_json(const nlohmann::json& j, const std::string& ctx) {
    DeployConfig c;
    const std::string loading = string_field(j, "loading", ctx);
    if (loading == "simultaneous")
        c.loading = LoadingMode::Simultaneous;
    else if (loading == "sequential")
        c.loading = LoadingMode::Sequential;
    else
        throw InvalidArgument(ctx + ".loading: expected simultaneous or sequential");
    c.threads = int_field(j, "threads", ctx);
    c.quant_scheme =
        scheme_from_string(string_field(j, "quant_scheme", ctx), ctx + ".quant_scheme");
    if (j.contains("vit_accelerator_speedup"))
        c.vit_accelerator_speedup = real_field(j, "vit_accelerator_speedup", ctx);
    return c;
}

std::vector<DeployConfig> space_from_json(const nlohmann::json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty())
        throw InvalidArgument(ctx + ": expected a non-empty array of configs");
    std::vector<DeployConfig> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(config_from_json(j[i], ctx + "[" + std::to_string(i) + "]"));
    return out;
}

nlohmann::ordered_json to_json(const DeployConfig& config) {
    return {{"loading",
             config.loading == LoadingMode::Simultaneous ? "simultaneous" : "sequential"},
            {"threads", config.threads},
            {"quant_scheme", scheme_to_string(config.quant_scheme)},
            {"vit_accelerator_speedup", config.vit_accelerator_speedup}};
}

nlohmann::ordered_json to_json(const SimMetrics& metrics) {
    return {{"peak_mem_bytes", metrics.peak_mem_bytes},
            {"encode_latency_s", metrics.encode_latency_s},
            {"decode_tokens_per_s", metrics.decode_tokens_per_s}};
}

} // namespace evkit::deploysim
