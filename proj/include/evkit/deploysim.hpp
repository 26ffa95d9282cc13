// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "evkit/errors.hpp"
#include "evkit/quant.hpp"

namespace evkit::deploysim {

struct DeviceProfile {
    int cores = 1;
    double flops_per_core = 0.0;       // FLOP/s each
    std::uint64_t memory_bytes = 0;
    double load_bandwidth = 0.0;       // bytes/s from storage
    double paging_penalty = 1.0;       // slowdown factor while over memory
    double contention = 0.1;           // per-extra-thread efficiency loss

    void validate() const {
        if (cores < 1 || flops_per_core <= 0.0 || memory_bytes == 0 ||
            load_bandwidth <= 0.0)
            throw InvalidArgument("device profile values must be positive");
        if (paging_penalty < 1.0)
            throw InvalidArgument("paging penalty must be at least 1");
        if (contention < 0.0)
            throw InvalidArgument("contention must be non-negative");
    }
};

struct ModelProfile {
    std::uint64_t vit_mem_bytes = 0;
    std::uint64_t llm_param_count = 0;
    double vit_flops_per_image = 0.0;
    double llm_prefill_flops_per_token = 0.0;
    double llm_decode_flops_per_token = 0.0;
    std::int64_t prompt_tokens = 0;

    std::uint64_t llm_mem_bytes(const quant::MemoryScheme& scheme) const {
        return quant::memory_footprint(llm_param_count, scheme);
    }

    void validate() const {
        if (vit_mem_bytes == 0 || llm_param_count == 0 || vit_flops_per_image <= 0.0 ||
            llm_prefill_flops_per_token <= 0.0 || llm_decode_flops_per_token <= 0.0 ||
            prompt_tokens < 1)
            throw InvalidArgument("model profile values must be positive");
    }
};

// Whether the vision encoder and the language model are resident together or
// loaded one after the other.
enum class LoadingMode { Simultaneous, Sequential };

struct DeployConfig {
    LoadingMode loading = LoadingMode::Simultaneous;
    int threads = 1;
    quant::MemoryScheme quant_scheme = quant::MemoryScheme::fp16();
    double vit_accelerator_speedup = 1.0;

    friend bool operator==(const DeployConfig&, const DeployConfig&) = default;
};

struct SimMetrics {
    std::uint64_t peak_mem_bytes = 0;
    double encode_latency_s = 0.0;
    double decode_tokens_per_s = 0.0;
};

// Effective core count for t threads: t / (1 + contention * (t - 1)).
// Strictly increasing in t but with diminishing returns.
double parallel_efficiency(int threads, double contention);

// Closed-form cost model: encode latency is weight loading plus image
// encoding plus prompt prefill; decode throughput divides compute by the
// per-token cost, with everything slowed by the paging penalty while the
// peak working set exceeds device memory.
SimMetrics simulate(const DeviceProfile& device, const ModelProfile& model,
                    const DeployConfig& config);

enum class Objective { MinEncodeLatency, MaxDecodeThroughput };

// Exhaustive scan over the candidate configs; the first optimum in
// enumeration order wins ties.
std::pair<DeployConfig, SimMetrics> config_search(const DeviceProfile& device,
                                                  const ModelProfile& model,
                                                  std::span<const DeployConfig> space,
                                                  Objective objective);

} // namespace evkit::deploysim
