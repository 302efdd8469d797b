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

// Test-only oracles and generators. Nothing here calls into the code paths it
// is used to check: the Hadamard-test oracle evolves the full
// (ancilla x data) register gate by gate instead of using the closed-form
// branch probabilities the library relies on.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qvr/statevec.hpp"

namespace qvr::testing {

/// Random unit vector of dimension `dim` with Gaussian entries (std::mt19937_64).
inline Statevector random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim);
    double s = 0.0;
    for (auto& x : v) {
        x = normal(gen);
        s += x * x;
    }
    const double norm = std::sqrt(s);
    for (auto& x : v) x /= norm;
    return Statevector(std::move(v));
}

/// Result of simulating H_ancilla (|0>|a> + |1>|b>)/sqrt(2) as a 2d-amplitude register.
struct HadamardTestOracle {
    double p_zero = 0.0;            // P(ancilla = 0)
    double p_one = 0.0;             // P(ancilla = 1)
    std::vector<double> one_branch; // normalized data register after observing ancilla = 1
};

inline HadamardTestOracle hadamard_test(const Statevector& a, const Statevector& b) {
    const std::size_t d = a.size();
    // Ancilla is the most significant qubit: index = ancilla * d + i.
    std::vector<double> reg(2 * d);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i) {
        reg[i] = r * a[i];
        reg[d + i] = r * b[i];
    }
    // Hadamard on the ancilla: pairs (i, d + i).
    for (std::size_t i = 0; i < d; ++i) {
        const double x0 = reg[i];
        const double x1 = reg[d + i];
        reg[i] = r * (x0 + x1);
        reg[d + i] = r * (x0 - x1);
    }
    HadamardTestOracle out;
    for (std::size_t i = 0; i < d; ++i) {
        out.p_zero += reg[i] * reg[i];
        out.p_one += reg[d + i] * reg[d + i];
    }
    out.one_branch.assign(reg.begin() + static_cast<std::ptrdiff_t>(d), reg.end());
    if (out.p_one > 0.0) {
        const double norm = std::sqrt(out.p_one);
        for (auto& x : out.one_branch) x /= norm;
    }
    return out;
}

}  // namespace qvr::testing
