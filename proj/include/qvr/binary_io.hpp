// Copyright 2026 The qvr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Little-endian byte buffers shared by the QVID, .qdist and model formats.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "qvr/errors.hpp"

namespace qvr::io {

using Bytes = std::vector<std::uint8_t>;

template <typename T>
concept LittleEndianScalar = std::is_arithmetic_v<T> && (sizeof(T) == 1 || sizeof(T) == 2 ||
                                                        sizeof(T) == 4 || sizeof(T) == 8);

class ByteWriter {
public:
    template <LittleEndianScalar T>
    void put(T value) {
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            std::reverse(std::begin(raw), std::end(raw));
        }
        bytes_.insert(bytes_.end(), std::begin(raw), std::end(raw));
    }

    void put_magic(std::string_view magic) { bytes_.insert(bytes_.end(), magic.begin(), magic.end()); }

    template <LittleEndianScalar T>
    void put_all(std::span<const T> values) {
        bytes_.reserve(bytes_.size() + values.size() * sizeof(T));
        for (T v : values) put(v);
    }

    const Bytes& bytes() const noexcept { return bytes_; }
    Bytes take() noexcept { return std::move(bytes_); }

private:
    Bytes bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <LittleEndianScalar T>
    T get() {
        require(sizeof(T));
        std::uint8_t raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            std::reverse(std::begin(raw), std::end(raw));
        }
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }

    /// Consumes `magic.size()` bytes; false if they differ (or are missing).
    bool expect_magic(std::string_view magic) {
        if (remaining() < magic.size()) return false;
        const bool ok = std::memcmp(bytes_.data() + pos_, magic.data(), magic.size()) == 0;
        pos_ += magic.size();
        return ok;
    }

    template <LittleEndianScalar T>
    std::vector<T> get_all(std::size_t count) {
        if (count > remaining() / sizeof(T)) {
            throw TruncatedFileError("expected " + std::to_string(count) + " values, file too short");
        }
        std::vector<T> out(count);
        for (auto& v : out) v = get<T>();
        return out;
    }

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void require(std::size_t n) const {
        if (remaining() < n) {
            throw TruncatedFileError("unexpected end of data at byte " + std::to_string(pos_));
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

}  // namespace qvr::io
