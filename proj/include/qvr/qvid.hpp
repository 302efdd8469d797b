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

// QVID container and dataset manifests.
//
// QVID layout (all little-endian):
//   offset 0   "QVID"      4 bytes
//   offset 4   version     u16 (= 1)
//   offset 6   reserved    u16 (= 0)
//   offset 8   N           u32
//   offset 12  T           u32
//   offset 16  pixels      T*N*N f32 in [0, 1], frame-major, row-major
//
// Manifest: UTF-8 text, one "<relative-path> <class-label>" per line; blank
// lines and lines starting with '#' are ignored. The label is the last
// whitespace-separated token so paths may contain spaces.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qvr/binary_io.hpp"
#include "qvr/errors.hpp"
#include "qvr/video.hpp"

namespace qvr {

inline constexpr char kQvidMagic[] = "QVID";
inline constexpr std::uint16_t kQvidVersion = 1;
inline constexpr std::size_t kQvidHeaderBytes = 16;

constexpr std::size_t qvid_file_size(std::uint32_t n, std::uint32_t t) noexcept {
    return kQvidHeaderBytes + 4 * static_cast<std::size_t>(n) * n * t;
}

inline io::Bytes encode_qvid(const VideoTensor& v) {
    io::ByteWriter w;
    w.put_magic(kQvidMagic);
    w.put<std::uint16_t>(kQvidVersion);
    w.put<std::uint16_t>(0);
    w.put<std::uint32_t>(v.size());
    w.put<std::uint32_t>(v.frames());
    w.put_all<float>(v.pixels());
    return w.take();
}

inline VideoTensor decode_qvid(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes);
    if (!r.expect_magic(kQvidMagic)) {
        throw BadMagicError("not a QVID file");
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kQvidVersion) {
        throw BadMagicError("unsupported QVID version " + std::to_string(version));
    }
    r.get<std::uint16_t>();
    const auto n = r.get<std::uint32_t>();
    const auto t = r.get<std::uint32_t>();
    const std::size_t count = static_cast<std::size_t>(n) * n * t;
    auto pixels = r.get_all<float>(count);
    return VideoTensor(n, t, std::move(pixels));
}

inline void save_video(const VideoTensor& v, const std::filesystem::path& path) {
    io::write_file(path, encode_qvid(v));
}

inline VideoTensor load_video(const std::filesystem::path& path) {
    return decode_qvid(io::read_file(path));
}

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Parses manifest text; relative paths are resolved against `base_dir`.
inline std::vector<ManifestEntry> parse_manifest(const std::string& text, const std::filesystem::path& base_dir = {}) {
    std::vector<ManifestEntry> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);
        const auto split = line.find_last_of(" \t");
        if (split == std::string::npos) {
            throw ConfigError("manifest line " + std::to_string(line_no) + " has no class label");
        }
        std::string rel = line.substr(0, split);
        rel.erase(rel.find_last_not_of(" \t") + 1);
        std::filesystem::path p(rel);
        entries.push_back({p.is_absolute() ? p : base_dir / p, line.substr(split + 1)});
    }
    return entries;
}

inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

/// Writes entries with paths relative to the manifest's directory.
inline void save_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "# qvr dataset manifest: <relative-path> <class-label>\n";
    const auto base = path.parent_path();
    for (const auto& e : entries) {
        out << e.path.lexically_relative(base.empty() ? std::filesystem::path(".") : base).generic_string() << ' '
            << e.label << '\n';
    }
    io::write_text(path, out.str());
}

}  // namespace qvr
