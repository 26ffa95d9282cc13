// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evkit/errors.hpp"

namespace evkit::packing {

struct SampleRecord {
    std::string sample_id;
    std::int64_t length = 0;
};

struct PackedSegment {
    std::string sample_id;
    std::int64_t taken_length = 0;
    bool truncated = false; // the sample's remainder was discarded

    friend bool operator==(const PackedSegment&, const PackedSegment&) = default;
};

struct PackedSequence {
    std::int64_t capacity = 0;
    std::vector<PackedSegment> segments;
    std::int64_t pad_length = 0;
};

enum class TailPolicy { Pad, Drop };

struct PackResult {
    std::vector<PackedSequence> sequences;
    // Tokens cut off samples that crossed a sequence boundary.
    std::int64_t truncated_tokens = 0;
    // Tokens lost with the final partial sequence under TailPolicy::Drop.
    std::int64_t dropped_tail_tokens = 0;
};

// Greedy packing in arrival order. A sample that does not fit the open
// sequence is truncated to fill it exactly; if the sequence is already full
// it is closed and the sample starts the next one. Only the final sequence
// may carry padding.
PackResult pack(std::span<const SampleRecord> samples, std::int64_t capacity,
                TailPolicy tail = TailPolicy::Pad);

// Position ids restart at zero for each segment; padding positions are zero.
std::vector<std::int64_t> position_ids(const PackedSequence& seq);

// Block-diagonal visibility: token i attends to token j iff both belong to
// the same segment (and j <= i when causal). Padding attends to nothing.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>
attention_mask(const PackedSequence& seq, bool causal = false);

} // namespace evkit::packing
