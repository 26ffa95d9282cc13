// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/quant.hpp"

#include <algorithm>
#include <cmath>

namespace evkit::quant {

QuantizedTensor quantize(const WeightTensor& tensor, std::uint32_t block_size) {
    if (block_size < 1)
        throw InvalidArgument("block size must be positive");
    if (!tensor.values.allFinite())
        throw NonFiniteWeight("cannot quantize non-finite weights: " + tensor.name);

    QuantizedTensor out;
    out.name = tensor.name;
    out.block_size = block_size;
    out.length = static_cast<std::uint64_t>(tensor.values.size());

    const Eigen::Index n = tensor.values.size();
    for (Eigen::Index begin = 0; begin < n; begin += block_size) {
        const Eigen::Index len = std::min<Eigen::Index>(block_size, n - begin);
        QuantBlock block;
        block.codes.resize(static_cast<std::size_t>(len));

        const double max_abs = tensor.values.segment(begin, len).abs().maxCoeff();
        if (max_abs == 0.0) {
            block.scale = 0.0f;
        } else {
            // Float division keeps the scale reproducible when the block is
            // itself a dequantized float32 payload.
            block.scale = static_cast<float>(max_abs) / 7.0f;
            for (Eigen::Index i = 0; i < len; ++i) {
                const long code = std::lround(tensor.values[begin + i] /
                                              static_cast<double>(block.scale));
                block.codes[static_cast<std::size_t>(i)] =
                    static_cast<std::int8_t>(std::clamp(code, -7L, 7L));
            }
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

WeightTensor dequantize(const QuantizedTensor& tensor) {
    std::uint64_t total = 0;
    for (const QuantBlock& block : tensor.blocks)
        total += block.codes.size();
    if (total != tensor.length)
        throw ShapeError("block code counts do not add up to the tensor length");

    WeightTensor out;
    out.name = tensor.name;
    out.values.resize(static_cast<Eigen::Index>(tensor.length));
    Eigen::Index i = 0;
    for (const QuantBlock& block : tensor.blocks)
        for (std::int8_t code : block.codes)
            out.values[i++] = static_cast<double>(block.scale) * code;
    return out;
}

QuantError quant_error(const WeightTensor& original, const QuantizedTensor& quantized) {
    if (static_cast<std::uint64_t>(original.values.size()) != quantized.length)
        throw ShapeError("tensor lengths differ");
    const WeightTensor restored = dequantize(quantized);
    QuantError err;
    if (original.values.size() == 0)
        return err;
    const Eigen::ArrayXd diff = original.values - restored.values;
    err.max_abs = diff.abs().maxCoeff();
    err.rmse = std::sqrt(diff.square().mean());
    return err;
}

std::uint64_t memory_footprint(std::uint64_t param_count, const MemoryScheme& scheme) {
    if (param_count < 1)
        throw InvalidArgument("parameter count must be positive");
    switch (scheme.kind) {
    case MemoryScheme::Kind::Fp16:
        return 2 * param_count;
    case MemoryScheme::Kind::Q4Block: {
        if (scheme.block_size < 1)
            throw InvalidArgument("block size must be positive");
        const std::uint64_t packed = (param_count + 1) / 2;
        const std::uint64_t blocks =
            (param_count + scheme.block_size - 1) / scheme.block_size;
        return packed + blocks * 4;
    }
    }
    throw InvalidArgument("unknown memory scheme");
}

} // namespace evkit::quant
