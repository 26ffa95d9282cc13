// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Dense>

#include "evkit/errors.hpp"

namespace evkit::posembed {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Learned position table laid out on a 2D patch grid. Row r*side_w + c of
// `values` is the embedding for grid position (r, c).
template <typename Scalar>
struct PosEmbedGrid {
    static_assert(std::is_floating_point_v<Scalar>);

    Eigen::Index side_h = 0;
    Eigen::Index side_w = 0;
    MatrixX<Scalar> values; // (side_h * side_w) x dim

    Eigen::Index dim() const { return values.cols(); }

    auto at(Eigen::Index r, Eigen::Index c) const {
        return values.row(r * side_w + c);
    }
};

// Reinterprets a flat (P x dim) table as a square grid. P must be a perfect
// square; rows are taken in row-major grid order.
template <typename Derived>
PosEmbedGrid<typename Derived::Scalar>
reshape_1d_to_2d(const Eigen::MatrixBase<Derived>& embeddings) {
    const Eigen::Index p = embeddings.rows();
    if (p < 1)
        throw NotSquare("position table is empty");
    Eigen::Index side = static_cast<Eigen::Index>(std::sqrt(static_cast<double>(p)));
    while (side * side < p)
        ++side;
    while (side > 0 && side * side > p)
        --side;
    if (side * side != p)
        throw NotSquare("position table length is not a perfect square");
    return {side, side, embeddings};
}

// Bilinear resampling of the table onto a (target_h x target_w) grid with
// corner-aligned source coordinates. A target axis of extent 1 samples the
// geometric center of the source axis. Every output coefficient is a convex
// combination of source coefficients, so values never leave the source range,
// and resampling a grid onto its own shape returns it bit for bit.
template <typename Scalar>
PosEmbedGrid<Scalar> interpolate_2d(const PosEmbedGrid<Scalar>& grid,
                                    Eigen::Index target_h, Eigen::Index target_w) {
    if (target_h < 1 || target_w < 1)
        throw InvalidArgument("interpolation target must be at least 1x1");
    const Eigen::Index sh = grid.side_h;
    const Eigen::Index sw = grid.side_w;
    const Eigen::Index dim = grid.dim();

    const auto src_coord = [](Eigen::Index i, Eigen::Index target, Eigen::Index source) {
        if (target == 1)
            return (static_cast<double>(source) - 1.0) / 2.0;
        return static_cast<double>(i) * (static_cast<double>(source) - 1.0) /
               (static_cast<double>(target) - 1.0);
    };

    PosEmbedGrid<Scalar> out;
    out.side_h = target_h;
    out.side_w = target_w;
    out.values.resize(target_h * target_w, dim);
    for (Eigen::Index i = 0; i < target_h; ++i) {
        const double sy = src_coord(i, target_h, sh);
        const Eigen::Index y0 = static_cast<Eigen::Index>(sy);
        const Eigen::Index y1 = std::min(y0 + 1, sh - 1);
        const Scalar fy = static_cast<Scalar>(sy - static_cast<double>(y0));
        for (Eigen::Index j = 0; j < target_w; ++j) {
            const double sx = src_coord(j, target_w, sw);
            const Eigen::Index x0 = static_cast<Eigen::Index>(sx);
            const Eigen::Index x1 = std::min(x0 + 1, sw - 1);
            const Scalar fx = static_cast<Scalar>(sx - static_cast<double>(x0));

            const auto tl = grid.at(y0, x0);
            const auto tr = grid.at(y0, x1);
            const auto bl = grid.at(y1, x0);
            const auto br = grid.at(y1, x1);
            auto dst = out.values.row(i * target_w + j);
            for (Eigen::Index k = 0; k < dim; ++k) {
                const Scalar top = std::lerp(tl[k], tr[k], fx);
                const Scalar bot = std::lerp(bl[k], br[k], fx);
                dst[k] = std::lerp(top, bot, fy);
            }
        }
    }
    return out;
}

} // namespace evkit::posembed
