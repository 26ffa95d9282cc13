// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "evkit/quant.hpp"

// Binary tensor containers, both little-endian regardless of host:
//
//   EVWQ  raw float32 weights
//     "EVWQ"  u32 version=1  u64 count  count * f32
//
//   EVQ4  blockwise 4-bit quantized weights
//     "EVQ4"  u32 version=1  u32 block_size  u64 count
//     per block: f32 scale, then ceil(len/2) bytes of nibbles.
//     Each nibble stores code+8 (so 1..15, never 0); the low nibble comes
//     first and a trailing pad nibble on an odd-length block is 0.
namespace evkit::io {

void write_float_tensor(const std::filesystem::path& path, std::span<const float> values);
std::vector<float> read_float_tensor(const std::filesystem::path& path);

void write_quantized(const std::filesystem::path& path, const quant::QuantizedTensor& tensor);
quant::QuantizedTensor read_quantized(const std::filesystem::path& path);

} // namespace evkit::io
