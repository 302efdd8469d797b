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

// Real-amplitude statevectors, amplitude encoding and the exact inner product.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvr/errors.hpp"

namespace qvr {

/// Unnormalized classical vector (pixels, pixel differences, class averages).
using RawVector = std::vector<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kRenormalizeThreshold = 1e-12;

/// Smallest n with 2^n >= len. len must be >= 1.
constexpr unsigned qubits_for_length(std::size_t len) noexcept {
    unsigned n = 0;
    while ((std::size_t{1} << n) < len) ++n;
    return n;
}

constexpr bool is_power_of_two(std::size_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

inline double squared_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double euclidean_norm(std::span<const double> v) noexcept { return std::sqrt(squared_norm(v)); }

/// A register of `num_qubits` qubits with real amplitudes.
///
/// Construction enforces the two invariants: length is 2^num_qubits and the
/// Euclidean norm is 1 within kNormTolerance. Drift above kRenormalizeThreshold
/// but inside the tolerance is renormalized away; anything larger is rejected.
class Statevector {
public:
    explicit Statevector(std::vector<double> amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (!is_power_of_two(amplitudes_.size())) {
            throw InvalidStateError("statevector length " + std::to_string(amplitudes_.size()) +
                                    " is not a power of two");
        }
        num_qubits_ = qubits_for_length(amplitudes_.size());
        const double norm = euclidean_norm(amplitudes_);
        const double drift = std::abs(norm - 1.0);
        if (!(drift <= kNormTolerance)) {
            throw InvalidStateError("statevector norm " + std::to_string(norm) + " deviates from 1");
        }
        if (drift > kRenormalizeThreshold) {
            for (double& a : amplitudes_) a /= norm;
        }
    }

    /// |index> on `num_qubits` qubits.
    static Statevector basis(unsigned num_qubits, std::size_t index) {
        std::vector<double> amps(std::size_t{1} << num_qubits, 0.0);
        if (index >= amps.size()) {
            throw DimensionMismatchError("basis index out of range");
        }
        amps[index] = 1.0;
        return Statevector(std::move(amps));
    }

    unsigned num_qubits() const noexcept { return num_qubits_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    double operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
    std::span<const double> amplitudes() const noexcept { return amplitudes_; }

    friend bool operator==(const Statevector&, const Statevector&) = default;

private:
    std::vector<double> amplitudes_;
    unsigned num_qubits_ = 0;
};

/// Amplitude encoding: |v> = (1/||v||) sum_i v_i |i>, zero-padded at the tail to
/// the next power of two so that amplitude index == input index.
inline Statevector encode_amplitudes(std::span<const double> v) {
    if (v.empty()) {
        throw ZeroVectorError("cannot encode an empty vector");
    }
    const double norm = euclidean_norm(v);
    if (norm == 0.0) {
        throw ZeroVectorError("cannot encode an all-zero vector");
    }
    std::vector<double> amps(std::size_t{1} << qubits_for_length(v.size()), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) amps[i] = v[i] / norm;
    return Statevector(std::move(amps));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatchError("lengths " + std::to_string(a.size()) + " and " +
                                     std::to_string(b.size()) + " differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// <a|b> for real amplitudes. Symmetric bit-for-bit since a_i*b_i == b_i*a_i.
inline double inner_product_exact(const Statevector& a, const Statevector& b) {
    return dot(a.amplitudes(), b.amplitudes());
}

/// Born rule: entry i is a_i^2.
inline std::vector<double> measurement_probabilities(const Statevector& s) {
    std::vector<double> p(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) p[i] = s[i] * s[i];
    return p;
}

}  // namespace qvr
