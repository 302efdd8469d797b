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

// Training and classification.
//
// Training, per class c:
//   1. every consecutive frame pair of every training clip goes through the
//      difference transform into a QRAM store;
//   2. the store yields the class's average difference video;
//   3. 2^q measurements of that average give the class's PixelDistribution;
//   4. the average read through its own distribution is the training register v_c.
//
// Classification of a clip: its classical difference video is read through
// each class's distribution (V_c), scores s_c = <v_c|V_c> are estimated with
// the ancilla test and the arg max wins; ties go to the lowest class id.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qvr/binary_io.hpp"
#include "qvr/errors.hpp"
#include "qvr/primitives.hpp"
#include "qvr/qram.hpp"
#include "qvr/reduction.hpp"
#include "qvr/rng.hpp"
#include "qvr/video.hpp"

namespace qvr {

struct LabeledVideo {
    std::uint32_t class_id = 0;
    VideoTensor video;
};

struct ClassModel {
    std::uint32_t class_id = 0;
    RawVector average_diff_video;
    PixelDistribution distribution;
    ReducedRegister training_register;

    friend bool operator==(const ClassModel&, const ClassModel&) = default;
};

/// Everything produced by train(), plus the post-selection cost counters.
struct TrainedModels {
    std::uint32_t size = 0;    // N
    std::uint32_t frames = 0;  // T
    std::uint32_t q = 0;
    std::vector<ClassModel> models;  // ascending class_id
    IngestCost cost;
};

/// Seed of class `class_id`'s pixel distribution under training seed `seed`.
constexpr std::uint64_t distribution_seed(std::uint64_t seed, std::uint32_t class_id) noexcept {
    return mix_seed(seed, {0x636c617373ULL, class_id});
}

inline ClassModel build_class_model(std::uint32_t class_id, RawVector average, std::uint32_t q, std::uint64_t seed) {
    ClassModel m;
    m.class_id = class_id;
    m.distribution = extract_distribution(average, q, distribution_seed(seed, class_id), class_id);
    m.training_register = build_reduced_register(average, m.distribution);
    m.average_diff_video = std::move(average);
    return m;
}

/// Trains one model per distinct class id found in `videos`.
inline TrainedModels train(const std::vector<LabeledVideo>& videos, std::uint32_t q, std::uint64_t seed) {
    if (videos.empty()) {
        throw EmptyClassError("no training videos");
    }
    const std::uint32_t n = videos.front().video.size();
    const std::uint32_t t = videos.front().video.frames();
    std::map<std::uint32_t, std::vector<const VideoTensor*>> by_class;
    for (const auto& lv : videos) {
        if (lv.video.size() != n || lv.video.frames() != t) {
            throw DimensionMismatchError("training videos do not share (N, T)");
        }
        by_class[lv.class_id].push_back(&lv.video);
    }
    TrainedModels out{n, t, q, {}, {}};
    for (const auto& [class_id, clips] : by_class) {
        // One store per class keeps peak memory at M clips rather than M*k.
        QramStore store(n, t);
        for (std::size_t v = 0; v < clips.size(); ++v) {
            const IngestCost c = store.ingest_video(class_id, static_cast<std::uint32_t>(v), *clips[v]);
            out.cost.pairs += c.pairs;
            out.cost.degenerate_pairs += c.degenerate_pairs;
            out.cost.expected_repeats += c.expected_repeats;
        }
        out.models.push_back(build_class_model(class_id, store.finalize_class_average(class_id), q, seed));
    }
    return out;
}

struct ClassificationResult {
    std::uint32_t predicted_class = 0;
    /// Same order as the models passed to classify().
    std::vector<std::uint32_t> class_ids;
    std::vector<double> scores;
    std::uint64_t shots_per_estimate = 0;
    std::uint64_t total_shots = 0;
    bool tie_broken = false;
};

/// Score assigned when either register is all-zero: certain non-match.
inline constexpr double kDegenerateScore = -1.0;

/// <v_c|V_c> for one class.
inline double class_score(const ClassModel& model, std::span<const double> video_diff, const ShotPlan& plan) {
    const ReducedRegister test = build_reduced_register(video_diff, model.distribution);
    if (test.degenerate() || model.training_register.degenerate()) {
        return kDegenerateScore;
    }
    return inner_product_estimate(*model.training_register.state, *test.state, plan.derive(model.class_id));
}

/// Classifies a precomputed difference video.
inline ClassificationResult classify_difference(std::span<const double> video_diff,
                                                const std::vector<ClassModel>& models, const ShotPlan& plan) {
    plan.validate();
    if (models.empty()) {
        throw EmptyClassError("no class models");
    }
    ClassificationResult r;
    r.shots_per_estimate = plan.exact_mode ? 0 : plan.shots;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t ties = 0;
    for (const auto& m : models) {
        if (m.average_diff_video.size() != video_diff.size()) {
            throw DimensionMismatchError("video does not match the training dimensions");
        }
        const double s = class_score(m, video_diff, plan);
        r.class_ids.push_back(m.class_id);
        r.scores.push_back(s);
        r.total_shots += r.shots_per_estimate;
        if (s > best) {
            best = s;
            r.predicted_class = m.class_id;
            ties = 1;
        } else if (s == best) {
            ++ties;
            r.predicted_class = std::min(r.predicted_class, m.class_id);
        }
    }
    r.tie_broken = ties > 1;
    return r;
}

inline ClassificationResult classify(const VideoTensor& video, const std::vector<ClassModel>& models,
                                     const ShotPlan& plan) {
    return classify_difference(difference_video(video), models, plan);
}

// Model file, little-endian:
//   "QVRM", version u16 (= 1), k u32, N u32, T u32, q u32
//   per class: N*N*(T-1) f64 average, .qdist block, 2^q f64 register amplitudes
// A degenerate register is written as 2^q zeros.

inline constexpr char kModelMagic[] = "QVRM";
inline constexpr std::uint16_t kModelVersion = 1;

inline io::Bytes encode_models(const TrainedModels& tm) {
    io::ByteWriter w;
    w.put_magic(kModelMagic);
    w.put<std::uint16_t>(kModelVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tm.models.size()));
    w.put<std::uint32_t>(tm.size);
    w.put<std::uint32_t>(tm.frames);
    w.put<std::uint32_t>(tm.q);
    const std::size_t slots = std::size_t{1} << tm.q;
    for (const auto& m : tm.models) {
        if (m.distribution.q != tm.q || m.average_diff_video.size() != difference_length(tm.size, tm.frames)) {
            throw DimensionMismatchError("class model inconsistent with the model header");
        }
        w.put_all<double>(m.average_diff_video);
        append_qdist(w, m.distribution);
        if (m.training_register.degenerate()) {
            const std::vector<double> zeros(slots, 0.0);
            w.put_all<double>(zeros);
        } else {
            w.put_all<double>(m.training_register.state->amplitudes());
        }
    }
    return w.take();
}

inline TrainedModels decode_models(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes);
    if (!r.expect_magic(kModelMagic)) {
        throw BadMagicError("not a QVRM model file");
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kModelVersion) {
        throw BadMagicError("unsupported model version " + std::to_string(version));
    }
    const auto k = r.get<std::uint32_t>();
    TrainedModels tm;
    tm.size = r.get<std::uint32_t>();
    tm.frames = r.get<std::uint32_t>();
    tm.q = r.get<std::uint32_t>();
    if (tm.q > kMaxDistributionQubits || tm.frames < 2 || tm.size == 0) {
        throw BadMagicError("implausible model header");
    }
    const std::size_t len = difference_length(tm.size, tm.frames);
    const std::size_t slots = std::size_t{1} << tm.q;
    for (std::uint32_t c = 0; c < k; ++c) {
        ClassModel m;
        m.average_diff_video = r.get_all<double>(len);
        m.distribution = read_qdist(r);
        if (m.distribution.q != tm.q) {
            throw BadMagicError("class distribution q differs from header q");
        }
        m.class_id = m.distribution.class_id;
        auto amps = r.get_all<double>(slots);
        m.training_register.class_id = m.class_id;
        if (squared_norm(amps) != 0.0) m.training_register.state = Statevector(std::move(amps));
        tm.models.push_back(std::move(m));
    }
    if (r.remaining() != 0) {
        throw BadMagicError("trailing bytes after the last class");
    }
    return tm;
}

inline void save_models(const TrainedModels& tm, const std::filesystem::path& path) {
    io::write_file(path, encode_models(tm));
}

inline TrainedModels load_models(const std::filesystem::path& path) { return decode_models(io::read_file(path)); }

}  // namespace qvr
