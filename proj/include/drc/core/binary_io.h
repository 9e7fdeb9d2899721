// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "drc/core/errors.h"

namespace drc {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Bounds-checked little-endian reader; every failure reports the byte offset.
class ByteReader {
  public:
    ByteReader(const std::uint8_t *data, std::size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const std::vector<std::uint8_t> &bytes)
        : ByteReader(bytes.data(), bytes.size()) {}

    template <typename T>
    T read(const char *what) {
        T v;
        need(sizeof(T), what);
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::string read_string(std::size_t n, const char *what) {
        need(n, what);
        std::string s(reinterpret_cast<const char *>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    void read_floats(float *dst, std::size_t n, const char *what) {
        need(n * sizeof(float), what);
        std::memcpy(dst, data_ + pos_, n * sizeof(float));
        pos_ += n * sizeof(float);
    }
    void expect_magic(std::string_view magic) {
        const std::size_t at = pos_;
        if (remaining() < magic.size() || read_string(magic.size(), "magic") != magic)
            throw FormatError("bad magic, expected \"" + std::string(magic) + "\"", at);
    }

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

  private:
    void need(std::size_t n, const char *what) const {
        if (size_ - pos_ < n)
            throw FormatError(std::string("truncated while reading ") + what, pos_);
    }

    const std::uint8_t *data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

class ByteWriter {
  public:
    template <typename T>
    void write(T v) {
        const auto *p = reinterpret_cast<const std::uint8_t *>(&v);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
    }
    void write_bytes(const void *src, std::size_t n) {
        const auto *p = static_cast<const std::uint8_t *>(src);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    void write_string(std::string_view s) { write_bytes(s.data(), s.size()); }
    void write_floats(const float *src, std::size_t n) { write_bytes(src, n * sizeof(float)); }

    std::vector<std::uint8_t> &bytes() { return bytes_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

  private:
    std::vector<std::uint8_t> bytes_;
};

}  // namespace drc
