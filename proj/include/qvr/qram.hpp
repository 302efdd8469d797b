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

// Simulated QRAM holding difference frames of training videos.
//
// The store is a classical map. Each value is the post-selected difference
// state scaled back by ||q1 - q2||, i.e. the true (unnormalized) difference of
// the two encoded frames; retrieving it "as a quantum state" means re-encoding
// it with encode_amplitudes. Class averages are computed classically with a
// fixed summation order (ascending video id) so they are bit-reproducible.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qvr/binary_io.hpp"
#include "qvr/errors.hpp"
#include "qvr/primitives.hpp"
#include "qvr/qvid.hpp"
#include "qvr/statevec.hpp"
#include "qvr/video.hpp"

namespace qvr {

struct QramKey {
    std::uint32_t class_id = 0;
    std::uint32_t video_id = 0;
    std::uint32_t pair_index = 0;

    friend auto operator<=>(const QramKey&, const QramKey&) = default;
};

struct QramEntry {
    RawVector difference;  // N*N values
    double norm = 0.0;     // ||q1 - q2||, 0 for a degenerate pair
    bool degenerate = false;
};

/// Post-selection cost of loading one video into the store.
struct IngestCost {
    std::uint64_t pairs = 0;
    std::uint64_t degenerate_pairs = 0;
    /// Sum over non-degenerate pairs of 1 / P(ancilla = |1>).
    double expected_repeats = 0.0;
};

class QramStore {
public:
    QramStore(std::uint32_t n, std::uint32_t t) : n_(n), t_(t) {
        if (n == 0 || t < 2) {
            throw TooSmallError("QRAM store needs N >= 1 and T >= 2");
        }
    }

    std::uint32_t size() const noexcept { return n_; }
    std::uint32_t frames() const noexcept { return t_; }
    std::size_t frame_pixels() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    /// Stores one post-selected difference frame; nullopt stores an all-zero frame.
    void put_diff_frame(std::uint32_t class_id, std::uint32_t video_id, std::uint32_t pair_index,
                        const std::optional<DifferenceOutcome>& outcome) {
        if (pair_index + 2 > t_) {
            throw DimensionMismatchError("pair index " + std::to_string(pair_index) + " outside [0, T-2]");
        }
        const QramKey key{class_id, video_id, pair_index};
        if (entries_.contains(key)) {
            throw DuplicateKeyError("(" + std::to_string(class_id) + ", " + std::to_string(video_id) + ", " +
                                    std::to_string(pair_index) + ") already stored");
        }
        QramEntry entry;
        entry.difference.assign(frame_pixels(), 0.0);
        if (outcome) {
            const auto amps = outcome->state.amplitudes();
            if (amps.size() < frame_pixels()) {
                throw DimensionMismatchError("difference state shorter than N*N");
            }
            for (std::size_t i = 0; i < frame_pixels(); ++i) entry.difference[i] = amps[i] * outcome->difference_norm;
            entry.norm = outcome->difference_norm;
        } else {
            entry.degenerate = true;
        }
        entries_.emplace(key, std::move(entry));
    }

    /// Encodes every frame, runs the difference transform on consecutive pairs
    /// and stores the results under (class_id, video_id, p).
    IngestCost ingest_video(std::uint32_t class_id, std::uint32_t video_id, const VideoTensor& video) {
        if (video.size() != n_ || video.frames() != t_) {
            throw DimensionMismatchError("video dimensions differ from the store's");
        }
        IngestCost cost;
        Statevector prev = encode_amplitudes(normalized_frame(video, 0));
        for (std::uint32_t p = 0; p + 1 < t_; ++p) {
            Statevector next = encode_amplitudes(normalized_frame(video, p + 1));
            auto outcome = try_difference_transform(prev, next);
            ++cost.pairs;
            if (outcome) {
                cost.expected_repeats += outcome->expected_repeats;
            } else {
                ++cost.degenerate_pairs;
            }
            put_diff_frame(class_id, video_id, p, outcome);
            prev = std::move(next);
        }
        return cost;
    }

    const QramEntry& get(std::uint32_t class_id, std::uint32_t video_id, std::uint32_t pair_index) const {
        const auto it = entries_.find({class_id, video_id, pair_index});
        if (it == entries_.end()) {
            throw IncompleteVideoError("no entry for the requested key");
        }
        return it->second;
    }

    /// Stored frame as a quantum state; nullopt for an all-zero frame.
    std::optional<Statevector> load_state(std::uint32_t class_id, std::uint32_t video_id,
                                          std::uint32_t pair_index) const {
        const auto& e = get(class_id, video_id, pair_index);
        if (e.degenerate || squared_norm(e.difference) == 0.0) return std::nullopt;
        return encode_amplitudes(e.difference);
    }

    /// Distinct video ids stored for `class_id`, ascending.
    std::vector<std::uint32_t> videos(std::uint32_t class_id) const {
        std::set<std::uint32_t> ids;
        for (auto it = entries_.lower_bound({class_id, 0, 0}); it != entries_.end() && it->first.class_id == class_id;
             ++it) {
            ids.insert(it->first.video_id);
        }
        return {ids.begin(), ids.end()};
    }

    /// Number of videos that contribute to the class average.
    std::size_t contribution_count(std::uint32_t class_id) const { return videos(class_id).size(); }

    /// Entry-wise mean difference video of the class, length N^2 * (T - 1),
    /// flat index pair*N^2 + row*N + col.
    RawVector finalize_class_average(std::uint32_t class_id) const {
        const auto ids = videos(class_id);
        if (ids.empty()) {
            throw EmptyClassError("class " + std::to_string(class_id) + " has no stored videos");
        }
        const std::size_t fp = frame_pixels();
        RawVector sum(difference_length(n_, t_), 0.0);
        for (std::uint32_t vid : ids) {
            for (std::uint32_t p = 0; p + 1 < t_; ++p) {
                const auto it = entries_.find({class_id, vid, p});
                if (it == entries_.end()) {
                    throw IncompleteVideoError("class " + std::to_string(class_id) + " video " +
                                               std::to_string(vid) + " lacks frame pair " + std::to_string(p));
                }
                const auto& d = it->second.difference;
                for (std::size_t i = 0; i < fp; ++i) sum[p * fp + i] += d[i];
            }
        }
        const auto m = static_cast<double>(ids.size());
        for (double& x : sum) x /= m;
        return sum;
    }

    std::size_t entry_count() const noexcept { return entries_.size(); }

private:
    std::uint32_t n_;
    std::uint32_t t_;
    std::map<QramKey, QramEntry> entries_;
};

// A finalized class average persisted as QVID: T-1 frames of N x N, each value
// v in [-1, 1] stored as (v + 1) / 2. The f32 payload makes this lossy (~1e-7).

inline VideoTensor average_to_video(const RawVector& average, std::uint32_t n, std::uint32_t t) {
    if (average.size() != difference_length(n, t)) {
        throw DimensionMismatchError("average length does not match N*N*(T-1)");
    }
    std::vector<float> px(average.size());
    for (std::size_t i = 0; i < average.size(); ++i) {
        px[i] = static_cast<float>(std::clamp((average[i] + 1.0) / 2.0, 0.0, 1.0));
    }
    return VideoTensor(n, t - 1, std::move(px));
}

inline RawVector video_to_average(const VideoTensor& v) {
    RawVector out(v.pixels().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * static_cast<double>(v.pixels()[i]) - 1.0;
    return out;
}

inline void save_class_average(const RawVector& average, std::uint32_t n, std::uint32_t t,
                               const std::filesystem::path& path) {
    save_video(average_to_video(average, n, t), path);
}

/// Returns the average and the original clip length T (stored frames + 1).
inline std::pair<RawVector, std::uint32_t> load_class_average(const std::filesystem::path& path) {
    const VideoTensor v = load_video(path);
    return {video_to_average(v), v.frames() + 1};
}

}  // namespace qvr
