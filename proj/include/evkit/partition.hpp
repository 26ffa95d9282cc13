// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "evkit/errors.hpp"

namespace evkit {

struct ImageGeometry {
    int width_px = 0;
    int height_px = 0;

    ImageGeometry(int w, int h) : width_px(w), height_px(h) {
        if (w < 1 || h < 1)
            throw InvalidArgument("image dimensions must be at least 1x1 px");
    }
};

// Fixed-resolution vision encoder plus the token budget it produces per slice.
struct EncoderProfile {
    int vit_width_px;
    int vit_height_px;
    int patch_px;
    int queries_per_slice;
    int max_ideal_slices;

    explicit EncoderProfile(int vit_w = 448, int vit_h = 448, int patch = 14,
                            int queries = 96, int max_slices = 9)
        : vit_width_px(vit_w), vit_height_px(vit_h), patch_px(patch),
          queries_per_slice(queries), max_ideal_slices(max_slices) {
        if (vit_w < 1 || vit_h < 1)
            throw InvalidArgument("encoder resolution must be positive");
        if (patch < 1)
            throw InvalidArgument("patch size must be positive");
        if (vit_w % patch != 0 || vit_h % patch != 0)
            throw InvalidArgument("encoder resolution must be a multiple of the patch size");
        if (queries < 1)
            throw InvalidArgument("queries per slice must be positive");
        if (max_slices < 1)
            throw InvalidArgument("max slice count must be positive");
    }
};

// columns x rows grid; columns splits the width.
struct GridShape {
    int columns = 1;
    int rows = 1;

    friend bool operator==(const GridShape&, const GridShape&) = default;
};

// One crop of the source image together with the resolution it is encoded at.
struct SliceRect {
    int col = 0;
    int row = 0;
    int src_x = 0;
    int src_y = 0;
    int src_w = 0;
    int src_h = 0;
    int enc_w = 0;
    int enc_h = 0;

    friend bool operator==(const SliceRect&, const SliceRect&) = default;
};

struct PartitionPlan {
    int columns = 1;
    int rows = 1;
    double score = 0.0;
    std::vector<SliceRect> slices;        // row-major
    std::optional<SliceRect> overview;    // present iff columns*rows > 1
    int visual_token_count = 0;
};

struct EncSize {
    int w = 0;
    int h = 0;

    friend bool operator==(const EncSize&, const EncSize&) = default;
};

// ceil(image area / encoder area), clamped to [1, max_ideal_slices].
int ideal_slice_count(const ImageGeometry& img, const EncoderProfile& enc);

// All (columns, rows) factorizations of n_ideal-1, n_ideal and n_ideal+1 whose
// product stays within [1, max_ideal_slices], ordered by (product, columns).
std::vector<GridShape> candidate_partitions(int n_ideal, const EncoderProfile& enc);

// Negated distance between per-slice log aspect ratio and the encoder's.
// Zero is a perfect match; more negative is worse.
double partition_score(const ImageGeometry& img, const EncoderProfile& enc,
                       const GridShape& grid);

// Scales (src_w, src_h) so its area approximates the encoder area, then snaps
// each side to the nearest positive multiple of the patch size.
EncSize slice_resize(int src_w, int src_h, const EncoderProfile& enc);

// Full plan for one image: best grid, slice rectangles, optional overview
// slice and the total visual token count.
PartitionPlan plan_partition(const ImageGeometry& img, const EncoderProfile& enc);

// (#slices + #overview) * queries_per_slice.
int token_budget(const PartitionPlan& plan, const EncoderProfile& enc);

} // namespace evkit
