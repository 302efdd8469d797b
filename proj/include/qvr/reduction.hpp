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

// Measurement-driven data reduction.
//
// A class's average difference video is amplitude-encoded and measured 2^q
// times; the observed basis indices (with repetition) form its
// PixelDistribution. Any difference video is then reduced to a 2^q-amplitude
// register by reading it at those indices, one slot per draw, and normalizing.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qvr/binary_io.hpp"
#include "qvr/errors.hpp"
#include "qvr/primitives.hpp"
#include "qvr/rng.hpp"
#include "qvr/statevec.hpp"

namespace qvr {

inline constexpr unsigned kMaxDistributionQubits = 30;

struct PixelDistribution {
    std::uint32_t class_id = 0;
    std::uint32_t q = 0;
    std::uint64_t seed = 0;
    /// Exactly 2^q flat indices into the difference video, in draw order.
    std::vector<std::uint32_t> draws;

    friend bool operator==(const PixelDistribution&, const PixelDistribution&) = default;
};

/// A 2^q-slot register, or the all-zero degenerate case (no signal at any draw).
struct ReducedRegister {
    std::uint32_t class_id = 0;
    std::optional<Statevector> state;

    bool degenerate() const noexcept { return !state.has_value(); }

    friend bool operator==(const ReducedRegister&, const ReducedRegister&) = default;
};

namespace detail {
inline constexpr std::uint64_t kDistributionStream = 0x7069786469737431ULL;  // "pixdist1"
}

/// Measures the amplitude encoding of `average` 2^q times.
inline PixelDistribution extract_distribution(std::span<const double> average, std::uint32_t q, std::uint64_t seed,
                                              std::uint32_t class_id = 0) {
    if (q > kMaxDistributionQubits) {
        throw ConfigError("q = " + std::to_string(q) + " exceeds the supported maximum");
    }
    if (average.size() > 0xFFFFFFFFull) {
        throw DimensionMismatchError("average video too large for 32-bit pixel indices");
    }
    const Statevector encoded = encode_amplitudes(average);  // throws ZeroVector
    const auto probs = measurement_probabilities(encoded);
    const DiscreteSampler sampler(probs);
    Rng rng(mix_seed(seed, {detail::kDistributionStream}));
    PixelDistribution dist{class_id, q, seed, {}};
    const std::size_t count = std::size_t{1} << q;
    dist.draws.reserve(count);
    for (std::size_t j = 0; j < count; ++j) dist.draws.push_back(static_cast<std::uint32_t>(sampler(rng)));
    return dist;
}

/// Slot j carries video_diff[draws[j]]; the 2^q vector is then normalized.
inline ReducedRegister build_reduced_register(std::span<const double> video_diff, const PixelDistribution& dist) {
    if (dist.draws.size() != (std::size_t{1} << dist.q)) {
        throw InvalidStateError("distribution does not hold exactly 2^q draws");
    }
    std::vector<double> slots(dist.draws.size());
    for (std::size_t j = 0; j < slots.size(); ++j) {
        const std::uint32_t idx = dist.draws[j];
        if (idx >= video_diff.size()) {
            throw DimensionMismatchError("draw " + std::to_string(idx) + " outside the difference video");
        }
        slots[j] = video_diff[idx];
    }
    const double norm = euclidean_norm(slots);
    if (norm == 0.0) {
        return ReducedRegister{dist.class_id, std::nullopt};
    }
    for (double& s : slots) s /= norm;
    return ReducedRegister{dist.class_id, Statevector(std::move(slots))};
}

/// Fraction of an N x N x T clip a q-qubit register can hold: 2^q / (N^2 T).
inline double coverage_fraction(std::uint32_t q, std::uint32_t n, std::uint32_t t) {
    if (n == 0 || t == 0) {
        throw TooSmallError("coverage needs positive N and T");
    }
    return std::ldexp(1.0, static_cast<int>(q)) / (static_cast<double>(n) * n * t);
}

/// Largest useful q for a clip: ceil(log2(N^2 T)).
inline std::uint32_t max_qubits(std::uint32_t n, std::uint32_t t) {
    return qubits_for_length(static_cast<std::size_t>(n) * n * t);
}

// .qdist: class_id u32, q u32, seed u64, then 2^q u32 indices (little-endian).

inline void append_qdist(io::ByteWriter& w, const PixelDistribution& d) {
    w.put<std::uint32_t>(d.class_id);
    w.put<std::uint32_t>(d.q);
    w.put<std::uint64_t>(d.seed);
    w.put_all<std::uint32_t>(d.draws);
}

inline PixelDistribution read_qdist(io::ByteReader& r) {
    PixelDistribution d;
    d.class_id = r.get<std::uint32_t>();
    d.q = r.get<std::uint32_t>();
    d.seed = r.get<std::uint64_t>();
    if (d.q > kMaxDistributionQubits) {
        throw BadMagicError("implausible q = " + std::to_string(d.q) + " in .qdist block");
    }
    d.draws = r.get_all<std::uint32_t>(std::size_t{1} << d.q);
    return d;
}

inline io::Bytes encode_qdist(const PixelDistribution& d) {
    io::ByteWriter w;
    append_qdist(w, d);
    return w.take();
}

inline PixelDistribution decode_qdist(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes);
    return read_qdist(r);
}

inline void save_distribution(const PixelDistribution& d, const std::filesystem::path& path) {
    io::write_file(path, encode_qdist(d));
}

inline PixelDistribution load_distribution(const std::filesystem::path& path) {
    return decode_qdist(io::read_file(path));
}

}  // namespace qvr
