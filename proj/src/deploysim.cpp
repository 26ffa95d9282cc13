// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/deploysim.hpp"

#include <algorithm>

namespace evkit::deploysim {

double parallel_efficiency(int threads, double contention) {
    if (threads < 1)
        throw BadConfig("thread count must be positive");
    return threads / (1.0 + contention * (threads - 1));
}

SimMetrics simulate(const DeviceProfile& device, const ModelProfile& model,
                    const DeployConfig& config) {
    device.validate();
    model.validate();
    if (config.threads < 1 || config.threads > device.cores)
        throw BadConfig("thread count must be in [1, cores]");
    if (config.vit_accelerator_speedup < 1.0)
        throw BadConfig("accelerator speedup must be at least 1");

    const std::uint64_t llm_mem = model.llm_mem_bytes(config.quant_scheme);
    const std::uint64_t vit_mem = model.vit_mem_bytes;

    SimMetrics m;
    m.peak_mem_bytes = config.loading == LoadingMode::Simultaneous
                           ? vit_mem + llm_mem
                           : std::max(vit_mem, llm_mem);
    const double paging =
        m.peak_mem_bytes > device.memory_bytes ? device.paging_penalty : 1.0;
    const double compute =
        parallel_efficiency(config.threads, device.contention) * device.flops_per_core;

    // Loading order changes only the peak working set; both weights cross the
    // storage bus exactly once either way.
    const double load_time =
        static_cast<double>(vit_mem + llm_mem) / device.load_bandwidth;
    const double vit_time =
        model.vit_flops_per_image / (compute * config.vit_accelerator_speedup) * paging;
    const double prefill_time =
        static_cast<double>(model.prompt_tokens) * model.llm_prefill_flops_per_token /
        compute * paging;

    m.encode_latency_s = load_time + vit_time + prefill_time;
    m.decode_tokens_per_s = compute / (model.llm_decode_flops_per_token * paging);
    return m;
}

std::pair<DeployConfig, SimMetrics> config_search(const DeviceProfile& device,
                                                  const ModelProfile& model,
                                                  std::span<const DeployConfig> space,
                                                  Objective objective) {
    if (space.empty())
        throw EmptySpace("configuration space is empty");

    bool have_best = false;
    DeployConfig best_config;
    SimMetrics best_metrics;
    for (const DeployConfig& candidate : space) {
        const SimMetrics metrics = simulate(device, model, candidate);
        const bool better =
            objective == Objective::MinEncodeLatency
                ? metrics.encode_latency_s < best_metrics.encode_latency_s
                : metrics.decode_tokens_per_s > best_metrics.decode_tokens_per_s;
        if (!have_best || better) {
            have_best = true;
            best_config = candidate;
            best_metrics = metrics;
        }
    }
    return {best_config, best_metrics};
}

} // namespace evkit::deploysim
