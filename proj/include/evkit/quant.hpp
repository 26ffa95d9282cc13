// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evkit/errors.hpp"

namespace evkit::quant {

struct WeightTensor {
    std::string name;
    Eigen::ArrayXd values;
};

// One quantization block: values reconstruct as scale * code with codes in
// [-7, 7]. A zero scale means the whole block was zero.
struct QuantBlock {
    float scale = 0.0f;
    std::vector<std::int8_t> codes;

    friend bool operator==(const QuantBlock&, const QuantBlock&) = default;
};

struct QuantizedTensor {
    std::string name;
    std::uint32_t block_size = 0;
    std::uint64_t length = 0;
    std::vector<QuantBlock> blocks;
};

// Symmetric 4-bit quantization per block: scale = max|w| / 7, codes round
// half away from zero and the largest element always maps to code +-7.
QuantizedTensor quantize(const WeightTensor& tensor, std::uint32_t block_size);

// Exact reconstruction of scale * code per element (the product fits a
// double without rounding, so requantizing reproduces codes and scales).
WeightTensor dequantize(const QuantizedTensor& tensor);

struct QuantError {
    double max_abs = 0.0;
    double rmse = 0.0;
};

QuantError quant_error(const WeightTensor& original, const QuantizedTensor& quantized);

// Storage scheme for the memory footprint model.
struct MemoryScheme {
    enum class Kind { Fp16, Q4Block };

    Kind kind = Kind::Fp16;
    std::uint32_t block_size = 32;

    static MemoryScheme fp16() { return {Kind::Fp16, 32}; }
    static MemoryScheme q4_block(std::uint32_t block_size) {
        return {Kind::Q4Block, block_size};
    }

    friend bool operator==(const MemoryScheme& a, const MemoryScheme& b) {
        if (a.kind != b.kind)
            return false;
        return a.kind == Kind::Fp16 || a.block_size == b.block_size;
    }
};

// Bytes needed to store param_count weights: two bytes each for fp16, or a
// packed nibble each plus one float scale per block for q4.
std::uint64_t memory_footprint(std::uint64_t param_count, const MemoryScheme& scheme);

} // namespace evkit::quant
