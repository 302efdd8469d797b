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

// Deterministic moving-blob gesture clips.
//
// Each clip shows one bright disk on a black background plus clipped uniform
// noise. Four motion kinds come in two time-reversed pairs:
//
//   sweep_right  disk centre moves left -> right along a horizontal track
//   sweep_left   the frames of sweep_right in reverse order
//   approach     disk grows about a fixed centre
//   recede       the frames of approach in reverse order
//
// so sweep_left/sweep_right (and approach/recede) generated from the same seed
// are exact temporal mirrors, noise included.
//
// Motion band (every disk pixel lies inside it, see `motion_band`):
//   sweeps          rows centre +- (jitter + radius_max + 1), all columns
//   approach/recede centre +- (jitter + radius_max + growth*(T-1) + 1) on both axes
// where growth = speed / 4 pixels of radius per frame.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qvr/errors.hpp"
#include "qvr/rng.hpp"
#include "qvr/video.hpp"

namespace qvr {

enum class MotionKind { SweepLeft, SweepRight, Approach, Recede };

constexpr std::string_view to_string(MotionKind k) {
    switch (k) {
        case MotionKind::SweepLeft: return "sweep_left";
        case MotionKind::SweepRight: return "sweep_right";
        case MotionKind::Approach: return "approach";
        case MotionKind::Recede: return "recede";
    }
    return "?";
}

inline std::optional<MotionKind> parse_motion_kind(std::string_view s) {
    for (auto k : {MotionKind::SweepLeft, MotionKind::SweepRight, MotionKind::Approach, MotionKind::Recede}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct SyntheticClassSpec {
    MotionKind kind = MotionKind::SweepRight;
    std::uint32_t size = 64;    // N
    std::uint32_t frames = 32;  // T
    double radius_min = 4.0;
    double radius_max = 6.0;
    /// Sweeps: pixels per frame. Approach/recede: radius grows by speed/4 per frame.
    double speed_min = 1.2;
    double speed_max = 1.5;
    /// Max offset of the track (or centre) from its nominal position, in pixels.
    double jitter = 2.0;
    double intensity = 1.0;
    /// Half-width of the additive uniform noise, before clipping to [0, 1].
    double noise = 0.1;
    std::uint64_t seed = 0;
};

/// Inclusive pixel rectangle.
struct PixelBand {
    double row_min, row_max, col_min, col_max;

    bool contains(double row, double col) const noexcept {
        return row >= row_min && row <= row_max && col >= col_min && col <= col_max;
    }
};

inline constexpr double kGrowthPerSpeed = 0.25;

inline PixelBand motion_band(const SyntheticClassSpec& spec) {
    const double centre = spec.size / 2.0;
    const double last = spec.size - 1.0;
    if (spec.kind == MotionKind::SweepLeft || spec.kind == MotionKind::SweepRight) {
        const double half = spec.jitter + spec.radius_max + 1.0;
        return {std::max(0.0, centre - half), std::min(last, centre + half), 0.0, last};
    }
    const double half =
        spec.jitter + spec.radius_max + kGrowthPerSpeed * spec.speed_max * (spec.frames - 1.0) + 1.0;
    return {std::max(0.0, centre - half), std::min(last, centre + half), std::max(0.0, centre - half),
            std::min(last, centre + half)};
}

namespace detail {

inline void draw_disk(std::vector<float>& frame, std::uint32_t n, double cy, double cx, double r, float value) {
    const double r2 = r * r;
    const auto row0 = static_cast<long>(std::max(0.0, std::floor(cy - r - 1)));
    const auto row1 = static_cast<long>(std::min<double>(n - 1, std::ceil(cy + r + 1)));
    const auto col0 = static_cast<long>(std::max(0.0, std::floor(cx - r - 1)));
    const auto col1 = static_cast<long>(std::min<double>(n - 1, std::ceil(cx + r + 1)));
    for (long row = row0; row <= row1; ++row) {
        for (long col = col0; col <= col1; ++col) {
            const double dy = row + 0.5 - cy;
            const double dx = col + 0.5 - cx;
            if (dy * dy + dx * dx <= r2) frame[static_cast<std::size_t>(row) * n + col] = value;
        }
    }
}

// Forward-time clip for the canonical member of each mirrored pair.
inline VideoTensor render_forward(const SyntheticClassSpec& spec, bool sweep, Rng& rng) {
    const std::uint32_t n = spec.size;
    const std::uint32_t t = spec.frames;
    const double centre = n / 2.0;
    const double radius = rng.uniform(spec.radius_min, spec.radius_max);
    const double speed = rng.uniform(spec.speed_min, spec.speed_max);
    const double jy = rng.uniform(-spec.jitter, spec.jitter);
    const double jx = rng.uniform(-spec.jitter, spec.jitter);
    const auto value = static_cast<float>(spec.intensity);

    std::vector<float> pixels(static_cast<std::size_t>(n) * n * t, 0.0f);
    std::vector<float> frame(static_cast<std::size_t>(n) * n);
    for (std::uint32_t p = 0; p < t; ++p) {
        std::fill(frame.begin(), frame.end(), 0.0f);
        if (sweep) {
            const double travel = speed * (t - 1.0);
            const double cx = centre - travel / 2.0 + jx + speed * p;
            draw_disk(frame, n, centre + jy, cx, radius, value);
        } else {
            const double r = radius + kGrowthPerSpeed * speed * p;
            draw_disk(frame, n, centre + jy, centre + jx, r, value);
        }
        if (spec.noise > 0.0) {
            for (float& px : frame) {
                const double noisy = px + rng.uniform(-spec.noise, spec.noise);
                px = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
            }
        }
        std::copy(frame.begin(), frame.end(), pixels.begin() + static_cast<std::ptrdiff_t>(p) * frame.size());
    }
    return VideoTensor(n, t, std::move(pixels));
}

inline VideoTensor reverse_frames(const VideoTensor& v) {
    std::vector<float> out;
    out.reserve(v.pixels().size());
    for (std::size_t p = v.frames(); p-- > 0;) {
        const auto f = v.frame(p);
        out.insert(out.end(), f.begin(), f.end());
    }
    return VideoTensor(v.size(), v.frames(), std::move(out));
}

}  // namespace detail

/// Clip `index` of the sequence defined by `spec`; independent of other indices.
inline VideoTensor generate_synthetic_one(const SyntheticClassSpec& spec, std::uint64_t index) {
    if (spec.size == 0 || spec.frames == 0) {
        throw TooSmallError("synthetic clips need positive dimensions");
    }
    if (!(spec.intensity > 0.0 && spec.intensity <= 1.0) || spec.noise < 0.0 || spec.radius_min <= 0.0 ||
        spec.radius_max < spec.radius_min || spec.speed_max < spec.speed_min || spec.jitter < 0.0) {
        throw ConfigError("invalid synthetic class parameters");
    }
    Rng rng(mix_seed(spec.seed, {index}));
    const bool sweep = spec.kind == MotionKind::SweepLeft || spec.kind == MotionKind::SweepRight;
    VideoTensor forward = detail::render_forward(spec, sweep, rng);
    if (spec.kind == MotionKind::SweepLeft || spec.kind == MotionKind::Recede) {
        return detail::reverse_frames(forward);
    }
    return forward;
}

inline std::vector<VideoTensor> generate_synthetic(const SyntheticClassSpec& spec, std::size_t count) {
    std::vector<VideoTensor> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(generate_synthetic_one(spec, i));
    return out;
}

}  // namespace qvr
