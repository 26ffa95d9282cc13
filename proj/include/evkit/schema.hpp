// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "evkit/errors.hpp"
#include "evkit/partition.hpp"

namespace evkit::schema {

// Marker tokens around sliced images. Placeholders stand in for the visual
// tokens a slice contributes.
struct SchemaConfig {
    std::string slice_open = "<slice>";
    std::string slice_close = "<\\slice>";
    std::string row_sep = "\n";
    std::string placeholder = "<IMG>";
};

// Half-open index range [begin, end) into a token stream.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct SliceSpan {
    int col = 0;
    int row = 0;
    TokenSpan span;

    friend bool operator==(const SliceSpan&, const SliceSpan&) = default;
};

struct TokenLayout {
    std::vector<std::string> tokens;
    std::optional<TokenSpan> overview; // placeholder span, never wrapped
    std::vector<SliceSpan> slices;     // placeholder spans, row-major
};

// Shape recovered from a serialized stream.
struct SchemaShape {
    int columns = 1;
    int rows = 1;
    int queries_per_slice = 0;
    bool overview_present = false;

    friend bool operator==(const SchemaShape&, const SchemaShape&) = default;
};

// Token stream for one plan. An unsliced image is just its placeholders; a
// sliced one starts with the unwrapped overview, then one line per grid row
// with each slice wrapped in open/close markers.
TokenLayout serialize_layout(const PartitionPlan& plan, const EncoderProfile& enc,
                             const SchemaConfig& cfg = {});

// Inverse of serialize_layout. Throws MalformedSchema when the stream does
// not follow the grammar or slice placeholder counts disagree.
SchemaShape parse_layout(const std::vector<std::string>& tokens,
                         const SchemaConfig& cfg = {});

// Markup overhead on top of the visual tokens: zero for a 1x1 grid, else two
// markers per slice, one separator between rows and one after the overview.
int count_schema_tokens(const PartitionPlan& plan);

} // namespace evkit::schema
