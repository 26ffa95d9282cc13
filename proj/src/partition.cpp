// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace evkit {

int ideal_slice_count(const ImageGeometry& img, const EncoderProfile& enc) {
    const std::int64_t area = std::int64_t{img.width_px} * img.height_px;
    const std::int64_t enc_area = std::int64_t{enc.vit_width_px} * enc.vit_height_px;
    const std::int64_t n = (area + enc_area - 1) / enc_area;
    return static_cast<int>(std::clamp<std::int64_t>(n, 1, enc.max_ideal_slices));
}

std::vector<GridShape> candidate_partitions(int n_ideal, const EncoderProfile& enc) {
    if (n_ideal < 1 || n_ideal > enc.max_ideal_slices)
        throw InvalidArgument("ideal slice count out of range");

    std::vector<GridShape> out;
    for (int product : {n_ideal - 1, n_ideal, n_ideal + 1}) {
        if (product < 1 || product > enc.max_ideal_slices)
            continue;
        for (int m = 1; m <= product; ++m) {
            if (product % m == 0)
                out.push_back({m, product / m});
        }
    }
    return out;
}

double partition_score(const ImageGeometry& img, const EncoderProfile& enc,
                       const GridShape& grid) {
    if (grid.columns < 1 || grid.rows < 1)
        throw InvalidArgument("grid shape must be positive");
    const double slice_ratio = (static_cast<double>(img.width_px) / grid.columns) /
                               (static_cast<double>(img.height_px) / grid.rows);
    const double enc_ratio =
        static_cast<double>(enc.vit_width_px) / enc.vit_height_px;
    return -std::abs(std::log(slice_ratio) - std::log(enc_ratio));
}

EncSize slice_resize(int src_w, int src_h, const EncoderProfile& enc) {
    if (src_w < 1 || src_h < 1)
        throw InvalidArgument("slice dimensions must be positive");
    const double enc_area = static_cast<double>(enc.vit_width_px) * enc.vit_height_px;
    const double k = std::sqrt(enc_area / (static_cast<double>(src_w) * src_h));
    const auto snap = [&](double px) {
        const long patches = std::lround(px / enc.patch_px);
        return static_cast<int>(std::max(patches, 1L)) * enc.patch_px;
    };
    return {snap(k * src_w), snap(k * src_h)};
}

namespace {

// Prefer higher score, then fewer slices, then the more square grid, then
// fewer columns.
bool better(double score_a, const GridShape& a, double score_b, const GridShape& b) {
    if (score_a != score_b)
        return score_a > score_b;
    const int cells_a = a.columns * a.rows;
    const int cells_b = b.columns * b.rows;
    if (cells_a != cells_b)
        return cells_a < cells_b;
    const int skew_a = std::abs(a.columns - a.rows);
    const int skew_b = std::abs(b.columns - b.rows);
    if (skew_a != skew_b)
        return skew_a < skew_b;
    return a.columns < b.columns;
}

} // namespace

PartitionPlan plan_partition(const ImageGeometry& img, const EncoderProfile& enc) {
    const int n_ideal = ideal_slice_count(img, enc);

    bool have_best = false;
    GridShape best;
    double best_score = 0.0;
    for (const GridShape& grid : candidate_partitions(n_ideal, enc)) {
        // Grids finer than the pixel grid are untileable.
        if (grid.columns > img.width_px || grid.rows > img.height_px)
            continue;
        const double score = partition_score(img, enc, grid);
        if (!have_best || better(score, grid, best_score, best)) {
            have_best = true;
            best = grid;
            best_score = score;
        }
    }
    // A 1x1 grid always survives the pixel filter on at least one product, so
    // this cannot trigger; it guards against future candidate set changes.
    if (!have_best)
        throw InvalidArgument("no tileable grid for this image");

    PartitionPlan plan;
    plan.columns = best.columns;
    plan.rows = best.rows;
    plan.score = best_score;

    const std::int64_t w = img.width_px;
    const std::int64_t h = img.height_px;
    for (int r = 0; r < best.rows; ++r) {
        const int y0 = static_cast<int>(r * h / best.rows);
        const int y1 = static_cast<int>((r + 1) * h / best.rows);
        for (int c = 0; c < best.columns; ++c) {
            const int x0 = static_cast<int>(c * w / best.columns);
            const int x1 = static_cast<int>((c + 1) * w / best.columns);
            const EncSize e = slice_resize(x1 - x0, y1 - y0, enc);
            plan.slices.push_back({c, r, x0, y0, x1 - x0, y1 - y0, e.w, e.h});
        }
    }
    if (best.columns * best.rows > 1) {
        const EncSize e = slice_resize(img.width_px, img.height_px, enc);
        plan.overview = SliceRect{0, 0, 0, 0, img.width_px, img.height_px, e.w, e.h};
    }
    plan.visual_token_count = token_budget(plan, enc);
    return plan;
}

int token_budget(const PartitionPlan& plan, const EncoderProfile& enc) {
    const int images = static_cast<int>(plan.slices.size()) + (plan.overview ? 1 : 0);
    return images * enc.queries_per_slice;
}

} // namespace evkit
