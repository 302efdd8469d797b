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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvr/errors.hpp"
#include "qvr/statevec.hpp"

namespace qvr {

/// N x N x T grayscale clip, pixels in [0, 1], frame-major then row-major.
class VideoTensor {
public:
    VideoTensor() = default;

    VideoTensor(std::uint32_t n, std::uint32_t t, std::vector<float> pixels)
        : n_(n), t_(t), pixels_(std::move(pixels)) {
        if (n_ == 0 || t_ == 0) {
            throw TooSmallError("video dimensions must be positive");
        }
        if (pixels_.size() != static_cast<std::size_t>(n_) * n_ * t_) {
            throw DimensionMismatchError("pixel count does not match N*N*T");
        }
        for (std::size_t i = 0; i < pixels_.size(); ++i) {
            const float p = pixels_[i];
            if (!(p >= 0.0f && p <= 1.0f)) {
                throw PixelOutOfRangeError("pixel " + std::to_string(i) + " = " + std::to_string(p));
            }
        }
    }

    /// All-zero clip.
    static VideoTensor zeros(std::uint32_t n, std::uint32_t t) {
        return VideoTensor(n, t, std::vector<float>(static_cast<std::size_t>(n) * n * t, 0.0f));
    }

    std::uint32_t size() const noexcept { return n_; }
    std::uint32_t frames() const noexcept { return t_; }
    std::size_t frame_pixels() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    std::span<const float> pixels() const noexcept { return pixels_; }

    std::span<const float> frame(std::size_t t) const noexcept {
        return std::span<const float>(pixels_).subspan(t * frame_pixels(), frame_pixels());
    }

    float at(std::size_t t, std::size_t row, std::size_t col) const noexcept {
        return pixels_[t * frame_pixels() + row * n_ + col];
    }

    friend bool operator==(const VideoTensor&, const VideoTensor&) = default;

private:
    std::uint32_t n_ = 0;
    std::uint32_t t_ = 0;
    std::vector<float> pixels_;
};

/// Length of the flat difference-video index space, N^2 * (T - 1).
constexpr std::size_t difference_length(std::uint32_t n, std::uint32_t t) noexcept {
    return t < 2 ? 0 : static_cast<std::size_t>(n) * n * (t - 1);
}

/// Frame t as a double vector divided by its Euclidean norm.
inline RawVector normalized_frame(const VideoTensor& v, std::size_t t) {
    const auto f = v.frame(t);
    double s = 0.0;
    for (float x : f) s += static_cast<double>(x) * x;
    if (s == 0.0) {
        throw ZeroVectorError("frame " + std::to_string(t) + " is entirely black");
    }
    const double norm = std::sqrt(s);
    RawVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = static_cast<double>(f[i]) / norm;
    return out;
}

/// Classical difference video: block p (p = 0..T-2) holds
/// normalize(frame_p) - normalize(frame_{p+1}); flat index p*N^2 + row*N + col.
/// This is the classical counterpart of the quantum difference transform with
/// the normalization undone, i.e. the convention the QRAM store uses.
inline RawVector difference_video(const VideoTensor& v) {
    if (v.frames() < 2) {
        throw TooSmallError("difference video needs at least two frames");
    }
    const std::size_t fp = v.frame_pixels();
    RawVector out(difference_length(v.size(), v.frames()));
    RawVector prev = normalized_frame(v, 0);
    for (std::size_t p = 0; p + 1 < v.frames(); ++p) {
        RawVector next = normalized_frame(v, p + 1);
        for (std::size_t i = 0; i < fp; ++i) out[p * fp + i] = prev[i] - next[i];
        prev = std::move(next);
    }
    return out;
}

}  // namespace qvr
