// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/schema.hpp"

#include <array>

namespace evkit::schema {

namespace {

void check_config(const SchemaConfig& cfg) {
    const std::array<const std::string*, 4> parts = {&cfg.slice_open, &cfg.slice_close,
                                                     &cfg.row_sep, &cfg.placeholder};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i]->empty())
            throw InvalidArgument("schema marker tokens must be non-empty");
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (*parts[i] == *parts[j])
                throw InvalidArgument("schema marker tokens must be distinct");
    }
}

} // namespace

TokenLayout serialize_layout(const PartitionPlan& plan, const EncoderProfile& enc,
                             const SchemaConfig& cfg) {
    check_config(cfg);
    const int q = enc.queries_per_slice;

    TokenLayout layout;
    const auto placeholders = [&layout, &cfg, q]() {
        const std::size_t begin = layout.tokens.size();
        layout.tokens.insert(layout.tokens.end(), static_cast<std::size_t>(q),
                             cfg.placeholder);
        return TokenSpan{begin, layout.tokens.size()};
    };

    if (plan.columns * plan.rows == 1) {
        const TokenSpan span = placeholders();
        layout.slices.push_back({0, 0, span});
        return layout;
    }

    layout.overview = placeholders();
    for (int r = 0; r < plan.rows; ++r) {
        layout.tokens.push_back(cfg.row_sep);
        for (int c = 0; c < plan.columns; ++c) {
            layout.tokens.push_back(cfg.slice_open);
            const TokenSpan span = placeholders();
            layout.tokens.push_back(cfg.slice_close);
            layout.slices.push_back({c, r, span});
        }
    }
    return layout;
}

SchemaShape parse_layout(const std::vector<std::string>& tokens, const SchemaConfig& cfg) {
    check_config(cfg);
    if (tokens.empty())
        throw MalformedSchema("empty token stream");

    std::size_t i = 0;
    const auto count_placeholders = [&]() {
        int n = 0;
        while (i < tokens.size() && tokens[i] == cfg.placeholder) {
            ++i;
            ++n;
        }
        return n;
    };

    const int overview_q = count_placeholders();
    if (i == tokens.size()) {
        // Bare placeholders: an unsliced image.
        return {1, 1, overview_q, false};
    }
    if (overview_q == 0)
        throw MalformedSchema("stream must start with overview placeholders");

    SchemaShape shape;
    shape.queries_per_slice = overview_q;
    shape.overview_present = true;
    shape.rows = 0;

    int columns = 0;
    while (i < tokens.size()) {
        if (tokens[i] != cfg.row_sep)
            throw MalformedSchema("expected row separator at token " + std::to_string(i));
        ++i;
        int row_columns = 0;
        while (i < tokens.size() && tokens[i] == cfg.slice_open) {
            ++i;
            const int q = count_placeholders();
            if (q != overview_q)
                throw MalformedSchema("slice placeholder count mismatch");
            if (i == tokens.size() || tokens[i] != cfg.slice_close)
                throw MalformedSchema("unterminated slice");
            ++i;
            ++row_columns;
        }
        if (row_columns == 0)
            throw MalformedSchema("empty grid row");
        if (columns == 0)
            columns = row_columns;
        else if (row_columns != columns)
            throw MalformedSchema("ragged slice grid");
        ++shape.rows;
        if (i < tokens.size() && tokens[i] != cfg.row_sep)
            throw MalformedSchema("unexpected token " + tokens[i] + " after a grid row");
    }

    shape.columns = columns;
    if (shape.columns * shape.rows == 1)
        throw MalformedSchema("a single slice must not be wrapped");
    return shape;
}

int count_schema_tokens(const PartitionPlan& plan) {
    const int cells = plan.columns * plan.rows;
    if (cells == 1)
        return 0;
    return 2 * cells + (plan.rows - 1) + 1;
}

} // namespace evkit::schema
