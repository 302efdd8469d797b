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

// Crop/downscale/temporal resampling, plus a PGM/PPM frame importer.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qvr/binary_io.hpp"
#include "qvr/errors.hpp"
#include "qvr/video.hpp"

namespace qvr {

/// Grayscale clip of arbitrary (width x height x frames), pixels in [0, 1].
struct RawClip {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t frames = 0;
    std::vector<float> pixels;  // frame-major, row-major

    static RawClip from(const VideoTensor& v) {
        return RawClip{v.size(), v.size(), v.frames(), {v.pixels().begin(), v.pixels().end()}};
    }

    float at(std::size_t t, std::size_t row, std::size_t col) const noexcept {
        return pixels[(t * height + row) * width + col];
    }
};

namespace detail {

struct Tap {
    std::size_t source;
    double weight;
};

// Box-filter taps mapping `src` samples onto `dst` samples: output o averages
// source interval [o*s, (o+1)*s) with s = src/dst, weighting partial overlaps.
inline std::vector<std::vector<Tap>> area_taps(std::size_t src, std::size_t dst) {
    std::vector<std::vector<Tap>> taps(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t o = 0; o < dst; ++o) {
        const double lo = static_cast<double>(o) * scale;
        const double hi = static_cast<double>(o + 1) * scale;
        const auto first = static_cast<std::size_t>(std::floor(lo));
        const auto last = std::min(src, static_cast<std::size_t>(std::ceil(hi)));
        for (std::size_t i = first; i < last; ++i) {
            const double overlap = std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
            if (overlap > 0.0) taps[o].push_back({i, overlap / scale});
        }
    }
    return taps;
}

}  // namespace detail

/// Frame index sampled for output frame t when resizing `src` frames to `dst`:
/// nearest to the centre of the t-th of `dst` equal slices.
constexpr std::size_t temporal_source_index(std::size_t t, std::size_t src, std::size_t dst) noexcept {
    const std::size_t idx = ((2 * t + 1) * src) / (2 * dst);
    return idx < src ? idx : src - 1;
}

/// Centre-crop to a square, area-average down to target_n x target_n, and pick
/// target_t frames by uniform index sampling.
inline VideoTensor preprocess(const RawClip& raw, std::uint32_t target_n, std::uint32_t target_t) {
    if (target_n == 0 || target_t == 0) {
        throw TooSmallError("target dimensions must be positive");
    }
    if (raw.pixels.size() != static_cast<std::size_t>(raw.width) * raw.height * raw.frames) {
        throw DimensionMismatchError("raw clip pixel count does not match its dimensions");
    }
    const std::uint32_t side = std::min(raw.width, raw.height);
    if (side < target_n || raw.frames < target_t) {
        throw TooSmallError("clip " + std::to_string(raw.width) + "x" + std::to_string(raw.height) + "x" +
                            std::to_string(raw.frames) + " is smaller than target " + std::to_string(target_n) +
                            "x" + std::to_string(target_n) + "x" + std::to_string(target_t));
    }
    const std::size_t x0 = (raw.width - side) / 2;
    const std::size_t y0 = (raw.height - side) / 2;
    const auto taps = detail::area_taps(side, target_n);

    std::vector<float> out(static_cast<std::size_t>(target_n) * target_n * target_t);
    for (std::size_t t = 0; t < target_t; ++t) {
        const std::size_t src_t = temporal_source_index(t, raw.frames, target_t);
        for (std::size_t r = 0; r < target_n; ++r) {
            for (std::size_t c = 0; c < target_n; ++c) {
                double acc = 0.0;
                for (const auto& ty : taps[r]) {
                    for (const auto& tx : taps[c]) {
                        acc += ty.weight * tx.weight * raw.at(src_t, y0 + ty.source, x0 + tx.source);
                    }
                }
                out[(t * target_n + r) * target_n + c] = static_cast<float>(std::clamp(acc, 0.0, 1.0));
            }
        }
    }
    return VideoTensor(target_n, target_t, std::move(out));
}

inline VideoTensor preprocess(const VideoTensor& raw, std::uint32_t target_n, std::uint32_t target_t) {
    return preprocess(RawClip::from(raw), target_n, target_t);
}

/// One decoded PNM frame as luminance in [0, 1].
struct GrayImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<float> pixels;
};

namespace detail {

class PnmCursor {
public:
    explicit PnmCursor(const io::Bytes& b) : b_(b) {}

    std::uint32_t next_uint() {
        skip_space_and_comments();
        if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) {
            throw BadMagicError("malformed PNM header");
        }
        std::uint64_t v = 0;
        while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
            v = v * 10 + (b_[pos_++] - '0');
            if (v > 0xFFFFFFFFull) throw BadMagicError("PNM header value overflows");
        }
        return static_cast<std::uint32_t>(v);
    }

    void skip_single_whitespace() {
        if (pos_ < b_.size() && std::isspace(b_[pos_])) ++pos_;
    }

    std::size_t pos() const noexcept { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            if (std::isspace(b_[pos_])) {
                ++pos_;
            } else if (b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const io::Bytes& b_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes P2 (ASCII gray), P5 (binary gray) and P6 (binary RGB) images. RGB is
/// reduced to Rec. 601 luminance 0.299 R + 0.587 G + 0.114 B.
inline GrayImage decode_pnm(const io::Bytes& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5' && bytes[1] != '6')) {
        throw BadMagicError("not a P2/P5/P6 image");
    }
    const char kind = static_cast<char>(bytes[1]);
    const io::Bytes tail(bytes.begin() + 2, bytes.end());
    detail::PnmCursor c(tail);
    GrayImage img;
    img.width = c.next_uint();
    img.height = c.next_uint();
    const std::uint32_t maxval = c.next_uint();
    if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535) {
        throw BadMagicError("invalid PNM dimensions or maxval");
    }
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    const std::size_t channels = kind == '6' ? 3 : 1;
    const double scale = 1.0 / maxval;
    img.pixels.resize(count);
    std::vector<double> samples(count * channels);
    if (kind == '2') {
        for (auto& s : samples) {
            try {
                s = c.next_uint();
            } catch (const BadMagicError&) {
                throw TruncatedFileError("ASCII PGM has too few samples");
            }
        }
    } else {
        c.skip_single_whitespace();
        const std::size_t bps = maxval > 255 ? 2 : 1;
        std::size_t pos = c.pos();
        if (tail.size() - pos < samples.size() * bps) {
            throw TruncatedFileError("PNM raster shorter than header promises");
        }
        for (auto& s : samples) {
            s = bps == 1 ? tail[pos] : (tail[pos] << 8) | tail[pos + 1];  // 16-bit PNM is big-endian
            pos += bps;
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        double v = channels == 1 ? samples[i]
                                 : 0.299 * samples[3 * i] + 0.587 * samples[3 * i + 1] + 0.114 * samples[3 * i + 2];
        img.pixels[i] = static_cast<float>(std::clamp(v * scale, 0.0, 1.0));
    }
    return img;
}

/// Loads every .pgm/.ppm file of `dir` in lexicographic filename order as one clip.
inline RawClip load_pnm_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError(dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
        if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw IoError("no PGM/PPM frames in " + dir.string());
    }
    RawClip clip;
    for (const auto& f : files) {
        GrayImage img = decode_pnm(io::read_file(f));
        if (clip.frames == 0) {
            clip.width = img.width;
            clip.height = img.height;
        } else if (img.width != clip.width || img.height != clip.height) {
            throw DimensionMismatchError(f.string() + " differs in size from the first frame");
        }
        clip.pixels.insert(clip.pixels.end(), img.pixels.begin(), img.pixels.end());
        ++clip.frames;
    }
    return clip;
}

}  // namespace qvr
