// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "evkit/errors.hpp"
#include "evkit/rng.hpp"
#include "evkit/tensor_io.hpp"

namespace evkit::resampler {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Patch token matrix for one encoded slice, row t is the token at grid
// position (t / grid_w, t % grid_w).
template <typename Scalar>
struct SliceTokens {
    Eigen::Index grid_h = 0;
    Eigen::Index grid_w = 0;
    MatrixX<Scalar> tokens; // (grid_h * grid_w) x input_dim
};

// Single-layer cross-attention resampler: a fixed set of learned queries
// attends over the slice tokens and emits one output row per query.
template <typename Scalar>
struct ResamplerWeights {
    static_assert(std::is_floating_point_v<Scalar>);

    Eigen::Index num_queries = 0;
    Eigen::Index model_dim = 0;
    Eigen::Index input_dim = 0;

    MatrixX<Scalar> query_embeds; // num_queries x model_dim
    MatrixX<Scalar> w_q;          // model_dim x model_dim
    MatrixX<Scalar> w_k;          // input_dim x model_dim
    MatrixX<Scalar> w_v;          // input_dim x model_dim
    MatrixX<Scalar> w_o;          // model_dim x model_dim
    Scalar pos_base = Scalar(10000);

    static ResamplerWeights seeded(Eigen::Index num_queries, Eigen::Index model_dim,
                                   Eigen::Index input_dim, std::uint64_t seed,
                                   Scalar pos_base = Scalar(10000));
};

// Fixed 2D sinusoidal position table of shape (grid_h * grid_w) x dim, row
// order matching SliceTokens. The first dim/2 channels encode the row index,
// the rest the column index, each as interleaved (sin, cos) pairs with
// geometrically spaced frequencies: pair k oscillates at base^(-2k/(dim/2)).
template <typename Scalar>
MatrixX<Scalar> pos_encode_2d(Eigen::Index grid_h, Eigen::Index grid_w,
                              Eigen::Index dim, Scalar base = Scalar(10000)) {
    if (grid_h < 1 || grid_w < 1)
        throw InvalidArgument("position grid must be at least 1x1");
    if (dim < 4 || dim % 4 != 0)
        throw BadDim("sin/cos position encoding needs dim divisible by 4");

    const Eigen::Index half = dim / 2;
    MatrixX<Scalar> out(grid_h * grid_w, dim);
    for (Eigen::Index r = 0; r < grid_h; ++r) {
        for (Eigen::Index c = 0; c < grid_w; ++c) {
            auto row = out.row(r * grid_w + c);
            for (Eigen::Index k = 0; k < half / 2; ++k) {
                const Scalar rate = std::pow(
                    base, Scalar(-2) * static_cast<Scalar>(k) / static_cast<Scalar>(half));
                row[2 * k] = std::sin(static_cast<Scalar>(r) * rate);
                row[2 * k + 1] = std::cos(static_cast<Scalar>(r) * rate);
                row[half + 2 * k] = std::sin(static_cast<Scalar>(c) * rate);
                row[half + 2 * k + 1] = std::cos(static_cast<Scalar>(c) * rate);
            }
        }
    }
    return out;
}

// Numerically stable softmax along each row; rows sum to one.
template <typename Scalar>
MatrixX<Scalar> rowwise_softmax(const MatrixX<Scalar>& logits) {
    MatrixX<Scalar> out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const Scalar m = logits.row(i).maxCoeff();
        out.row(i) = (logits.row(i).array() - m).exp().matrix();
        out.row(i) /= out.row(i).sum();
    }
    return out;
}

namespace detail {

template <typename Scalar>
void check_shapes(const SliceTokens<Scalar>& slice, const ResamplerWeights<Scalar>& w) {
    if (slice.grid_h < 1 || slice.grid_w < 1)
        throw ShapeError("slice token grid must be at least 1x1");
    if (slice.tokens.rows() != slice.grid_h * slice.grid_w)
        throw ShapeError("token count does not match the slice grid");
    if (slice.tokens.cols() != w.input_dim)
        throw ShapeError("token width does not match the resampler input dim");
    if (w.query_embeds.rows() != w.num_queries || w.query_embeds.cols() != w.model_dim ||
        w.w_q.rows() != w.model_dim || w.w_q.cols() != w.model_dim ||
        w.w_k.rows() != w.input_dim || w.w_k.cols() != w.model_dim ||
        w.w_v.rows() != w.input_dim || w.w_v.cols() != w.model_dim ||
        w.w_o.rows() != w.model_dim || w.w_o.cols() != w.model_dim)
        throw ShapeError("resampler weight matrices are inconsistent");
}

} // namespace detail

// Attention weights of shape num_queries x (grid_h * grid_w). Keys carry the
// 2D sinusoidal position signal; logits are scaled by 1/sqrt(model_dim).
template <typename Scalar>
MatrixX<Scalar> attention_map(const SliceTokens<Scalar>& slice,
                              const ResamplerWeights<Scalar>& w) {
    detail::check_shapes(slice, w);
    const MatrixX<Scalar> pos =
        pos_encode_2d<Scalar>(slice.grid_h, slice.grid_w, w.model_dim, w.pos_base);
    const MatrixX<Scalar> keys = slice.tokens * w.w_k + pos;
    const MatrixX<Scalar> queries = w.query_embeds * w.w_q;
    const Scalar scale =
        Scalar(1) / std::sqrt(static_cast<Scalar>(w.model_dim));
    const MatrixX<Scalar> logits = queries * keys.transpose() * scale;
    return rowwise_softmax(logits);
}

// Compresses a slice of any grid shape to exactly num_queries output rows.
template <typename Scalar>
MatrixX<Scalar> compress(const SliceTokens<Scalar>& slice,
                         const ResamplerWeights<Scalar>& w) {
    const MatrixX<Scalar> attn = attention_map(slice, w);
    const MatrixX<Scalar> values = slice.tokens * w.w_v;
    return (attn * values) * w.w_o;
}

template <typename Scalar>
ResamplerWeights<Scalar>
ResamplerWeights<Scalar>::seeded(Eigen::Index num_queries, Eigen::Index model_dim,
                                 Eigen::Index input_dim, std::uint64_t seed,
                                 Scalar pos_base) {
    if (num_queries < 1 || model_dim < 1 || input_dim < 1)
        throw InvalidArgument("resampler dimensions must be positive");
    ResamplerWeights w;
    w.num_queries = num_queries;
    w.model_dim = model_dim;
    w.input_dim = input_dim;
    w.pos_base = pos_base;

    std::mt19937_64 gen(rng::splitmix64(seed));
    const auto fill = [&gen](MatrixX<Scalar>& m, Eigen::Index rows, Eigen::Index cols) {
        m.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = static_cast<Scalar>(rng::uniform_real(gen, -0.1, 0.1));
    };
    fill(w.query_embeds, num_queries, model_dim);
    fill(w.w_q, model_dim, model_dim);
    fill(w.w_k, input_dim, model_dim);
    fill(w.w_v, input_dim, model_dim);
    fill(w.w_o, model_dim, model_dim);
    return w;
}

// The weight file is one flat float32 tensor holding, row-major and in this
// order: query_embeds, w_q, w_k, w_v, w_o.
template <typename Scalar>
ResamplerWeights<Scalar> load_weights(const std::filesystem::path& path,
                                      Eigen::Index num_queries, Eigen::Index model_dim,
                                      Eigen::Index input_dim,
                                      Scalar pos_base = Scalar(10000)) {
    if (num_queries < 1 || model_dim < 1 || input_dim < 1)
        throw InvalidArgument("resampler dimensions must be positive");
    const std::vector<float> flat = io::read_float_tensor(path);
    const std::size_t expected = static_cast<std::size_t>(
        num_queries * model_dim + 2 * model_dim * model_dim + 2 * input_dim * model_dim);
    if (flat.size() != expected)
        throw ShapeError("weight file holds " + std::to_string(flat.size()) +
                         " floats, expected " + std::to_string(expected));

    ResamplerWeights<Scalar> w;
    w.num_queries = num_queries;
    w.model_dim = model_dim;
    w.input_dim = input_dim;
    w.pos_base = pos_base;

    std::size_t pos = 0;
    const auto take = [&](MatrixX<Scalar>& m, Eigen::Index rows, Eigen::Index cols) {
        m.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = static_cast<Scalar>(flat[pos++]);
    };
    take(w.query_embeds, num_queries, model_dim);
    take(w.w_q, model_dim, model_dim);
    take(w.w_k, input_dim, model_dim);
    take(w.w_v, input_dim, model_dim);
    take(w.w_o, model_dim, model_dim);
    return w;
}

template <typename Scalar>
void save_weights(const std::filesystem::path& path, const ResamplerWeights<Scalar>& w) {
    std::vector<float> flat;
    const auto put = [&flat](const MatrixX<Scalar>& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                flat.push_back(static_cast<float>(m(i, j)));
    };
    put(w.query_embeds);
    put(w.w_q);
    put(w.w_k);
    put(w.w_v);
    put(w.w_o);
    io::write_float_tensor(path, flat);
}

} // namespace evkit::resampler
