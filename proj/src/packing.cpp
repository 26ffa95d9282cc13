// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/packing.hpp"

#include <numeric>

namespace evkit::packing {

PackResult pack(std::span<const SampleRecord> samples, std::int64_t capacity,
                TailPolicy tail) {
    if (capacity < 1)
        throw InvalidArgument("sequence capacity must be positive");
    for (const SampleRecord& s : samples)
        if (s.length < 1)
            throw InvalidArgument("sample " + s.sample_id + " has non-positive length");

    PackResult result;
    PackedSequence open{capacity, {}, 0};
    std::int64_t used = 0;

    const auto close = [&] {
        open.pad_length = capacity - used;
        result.sequences.push_back(std::move(open));
        open = PackedSequence{capacity, {}, 0};
        used = 0;
    };

    for (const SampleRecord& s : samples) {
        const std::int64_t room = capacity - used;
        if (room == 0) {
            close();
            // Retry against the fresh sequence so the sample is only
            // truncated when it genuinely crosses a boundary.
        }
        const std::int64_t take = std::min(s.length, capacity - used);
        const bool truncated = take < s.length;
        open.segments.push_back({s.sample_id, take, truncated});
        used += take;
        result.truncated_tokens += s.length - take;
    }

    if (used > 0) {
        if (tail == TailPolicy::Pad || used == capacity) {
            close();
        } else {
            result.dropped_tail_tokens =
                std::accumulate(open.segments.begin(), open.segments.end(), std::int64_t{0},
                                [](std::int64_t acc, const PackedSegment& seg) {
                                    return acc + seg.taken_length;
                                });
        }
    }
    return result;
}

std::vector<std::int64_t> position_ids(const PackedSequence& seq) {
    std::vector<std::int64_t> ids;
    ids.reserve(static_cast<std::size_t>(seq.capacity));
    for (const PackedSegment& seg : seq.segments)
        for (std::int64_t p = 0; p < seg.taken_length; ++p)
            ids.push_back(p);
    ids.resize(static_cast<std::size_t>(seq.capacity), 0);
    return ids;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>
attention_mask(const PackedSequence& seq, bool causal) {
    const Eigen::Index n = seq.capacity;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(n, n);
    mask.setConstant(false);

    Eigen::Index begin = 0;
    for (const PackedSegment& seg : seq.segments) {
        const Eigen::Index end = begin + seg.taken_length;
        for (Eigen::Index i = begin; i < end; ++i)
            for (Eigen::Index j = begin; j < (causal ? i + 1 : end); ++j)
                mask(i, j) = true;
        begin = end;
    }
    return mask;
}

} // namespace evkit::packing
