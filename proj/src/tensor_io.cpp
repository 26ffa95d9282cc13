// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

namespace evkit::io {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    const std::array<char, 4> b = {
        static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
        static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b.data(), b.size());
}

void put_u64(std::ostream& os, std::uint64_t v) {
    put_u32(os, static_cast<std::uint32_t>(v & 0xffffffffULL));
    put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

void put_f32(std::ostream& os, float v) {
    put_u32(os, std::bit_cast<std::uint32_t>(v));
}

class Reader {
public:
    Reader(const std::filesystem::path& path) : path_(path.string()), in_(path, std::ios::binary) {
        if (!in_)
            throw IoError("cannot open " + path_);
    }

    std::uint32_t u32() {
        std::array<unsigned char, 4> b;
        bytes(reinterpret_cast<char*>(b.data()), b.size());
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    }

    std::uint64_t u64() {
        const std::uint64_t lo = u32();
        return lo | (static_cast<std::uint64_t>(u32()) << 32);
    }

    float f32() { return std::bit_cast<float>(u32()); }

    void bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw FormatError("truncated file: " + path_);
    }

    void expect_eof() {
        char c;
        in_.read(&c, 1);
        if (in_.gcount() != 0)
            throw FormatError("trailing bytes after payload: " + path_);
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
};

void check_magic(Reader& r, const char* magic) {
    std::array<char, 4> b;
    r.bytes(b.data(), b.size());
    if (!std::equal(b.begin(), b.end(), magic))
        throw FormatError("bad magic in " + r.path());
    const std::uint32_t version = r.u32();
    if (version != 1)
        throw FormatError("unsupported version " + std::to_string(version) + " in " + r.path());
}

class Writer {
public:
    Writer(const std::filesystem::path& path) : path_(path.string()), out_(path, std::ios::binary) {
        if (!out_)
            throw IoError("cannot open " + path_ + " for writing");
    }

    std::ostream& stream() { return out_; }

    void finish() {
        out_.flush();
        if (!out_)
            throw IoError("write failed: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

} // namespace

void write_float_tensor(const std::filesystem::path& path, std::span<const float> values) {
    Writer w(path);
    w.stream().write("EVWQ", 4);
    put_u32(w.stream(), 1);
    put_u64(w.stream(), values.size());
    for (float v : values)
        put_f32(w.stream(), v);
    w.finish();
}

std::vector<float> read_float_tensor(const std::filesystem::path& path) {
    Reader r(path);
    check_magic(r, "EVWQ");
    const std::uint64_t count = r.u64();
    std::vector<float> values(count);
    for (std::uint64_t i = 0; i < count; ++i)
        values[i] = r.f32();
    r.expect_eof();
    return values;
}

void write_quantized(const std::filesystem::path& path, const quant::QuantizedTensor& tensor) {
    Writer w(path);
    w.stream().write("EVQ4", 4);
    put_u32(w.stream(), 1);
    put_u32(w.stream(), tensor.block_size);
    put_u64(w.stream(), tensor.length);
    for (const quant::QuantBlock& block : tensor.blocks) {
        put_f32(w.stream(), block.scale);
        for (std::size_t i = 0; i < block.codes.size(); i += 2) {
            const unsigned lo = static_cast<unsigned>(block.codes[i] + 8);
            const unsigned hi = i + 1 < block.codes.size()
                                    ? static_cast<unsigned>(block.codes[i + 1] + 8)
                                    : 0u;
            const char byte = static_cast<char>((hi << 4) | lo);
            w.stream().write(&byte, 1);
        }
    }
    w.finish();
}

quant::QuantizedTensor read_quantized(const std::filesystem::path& path) {
    Reader r(path);
    check_magic(r, "EVQ4");

    quant::QuantizedTensor tensor;
    tensor.block_size = r.u32();
    if (tensor.block_size < 1)
        throw FormatError("zero block size in " + r.path());
    tensor.length = r.u64();

    const auto decode = [&](unsigned nibble) {
        if (nibble == 0)
            throw FormatError("nibble 0 in a data position in " + r.path());
        return static_cast<std::int8_t>(static_cast<int>(nibble) - 8);
    };

    std::uint64_t remaining = tensor.length;
    while (remaining > 0) {
        const std::uint64_t len = std::min<std::uint64_t>(tensor.block_size, remaining);
        quant::QuantBlock block;
        block.scale = r.f32();
        if (!(block.scale >= 0.0f) || !std::isfinite(block.scale))
            throw FormatError("invalid block scale in " + r.path());
        block.codes.reserve(len);
        for (std::uint64_t i = 0; i < len; i += 2) {
            unsigned char byte;
            r.bytes(reinterpret_cast<char*>(&byte), 1);
            block.codes.push_back(decode(byte & 0x0f));
            if (i + 1 < len)
                block.codes.push_back(decode(byte >> 4));
            else if ((byte >> 4) != 0)
                throw FormatError("nonzero pad nibble in " + r.path());
        }
        if (block.scale == 0.0f)
            for (std::int8_t code : block.codes)
                if (code != 0)
                    throw FormatError("nonzero code under zero scale in " + r.path());
        tensor.blocks.push_back(std::move(block));
        remaining -= len;
    }
    r.expect_eof();
    return tensor;
}

} // namespace evkit::io
