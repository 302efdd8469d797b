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

// Quantum subroutines used by the pipeline, each with an analytic (exact) mode
// and a finite-shot mode:
//
//   * sample_measurements     computational-basis measurement of a register
//   * difference_transform    ancilla + Hadamard, post-selected on |1>
//   * inner_product_estimate  ancilla + Hadamard, P(|0>) = (1 + <a|b>) / 2
//
// Ancilla measurements are simulated as Bernoulli draws on the analytic branch
// probability rather than by evolving the joint (ancilla x data) register; the
// statistics are identical and a shot costs O(1) instead of O(2^n).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qvr/errors.hpp"
#include "qvr/rng.hpp"
#include "qvr/statevec.hpp"

namespace qvr {

/// How many times a prepare-and-measure cycle is repeated, and with which seed.
struct ShotPlan {
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
    bool exact_mode = false;

    static ShotPlan exact() { return ShotPlan{0, 0, true}; }
    static ShotPlan sampled(std::uint64_t shots, std::uint64_t seed) { return ShotPlan{shots, seed, false}; }

    void validate() const {
        if (!exact_mode && shots == 0) {
            throw InvalidStateError("a sampled ShotPlan needs at least one shot");
        }
    }

    /// Same plan on an independent stream (used for per-class estimates).
    ShotPlan derive(std::uint64_t tag) const { return ShotPlan{shots, mix_seed(seed, {tag}), exact_mode}; }
};

/// basis index -> count. Counts are integral in sampled mode and expectations
/// (p_i * shots) in exact mode.
using Histogram = std::map<std::size_t, double>;

namespace detail {
inline constexpr std::uint64_t kMeasureStream = 0x6d65617375726531ULL;   // "measure1"
inline constexpr std::uint64_t kEstimateStream = 0x657374696d617465ULL;  // "estimate"
}  // namespace detail

/// Inverse-CDF sampler over a fixed discrete distribution. Zero-weight outcomes
/// are never returned.
class DiscreteSampler {
public:
    explicit DiscreteSampler(std::span<const double> weights) : cdf_(weights.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            cdf_[i] = acc;
        }
        if (cdf_.empty() || !(acc > 0.0)) {
            throw ZeroVectorError("cannot sample from an all-zero distribution");
        }
    }

    std::size_t operator()(Rng& rng) const {
        const double u = rng.uniform() * cdf_.back();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        // u < cdf_.back() always holds, so `it` is in range.
        return static_cast<std::size_t>(it - cdf_.begin());
    }

    std::size_t size() const noexcept { return cdf_.size(); }

private:
    std::vector<double> cdf_;
};

/// Measure `s` in the computational basis plan.shots times.
inline Histogram sample_measurements(const Statevector& s, const ShotPlan& plan) {
    plan.validate();
    const auto probs = measurement_probabilities(s);
    Histogram hist;
    if (plan.exact_mode) {
        const auto shots = static_cast<double>(plan.shots);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) hist[i] = probs[i] * shots;
        }
        return hist;
    }
    const DiscreteSampler sampler(probs);
    Rng rng(mix_seed(plan.seed, {detail::kMeasureStream}));
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t shot = 0; shot < plan.shots; ++shot) ++counts[sampler(rng)];
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != 0) hist[i] = static_cast<double>(counts[i]);
    }
    return hist;
}

/// Post-selected branch of the difference transform.
struct DifferenceOutcome {
    /// (q1 - q2) / ||q1 - q2||
    Statevector state;
    /// P(ancilla = |1>) = (1 - <q1|q2>) / 2
    double success_probability = 0.0;
    /// Mean number of preparations until |1> is observed, 1 / success_probability.
    double expected_repeats = std::numeric_limits<double>::infinity();
    /// ||q1 - q2|| = sqrt(2 - 2<q1|q2>), needed to undo the normalization classically.
    double difference_norm = 0.0;
};

/// Difference transform, or nullopt when q1 == q2 (p(|1>) = 0: the ancilla
/// never lands in |1> and there is nothing to post-select).
inline std::optional<DifferenceOutcome> try_difference_transform(const Statevector& q1, const Statevector& q2) {
    const double overlap = inner_product_exact(q1, q2);
    if (1.0 - overlap <= 1e-12) {
        return std::nullopt;
    }
    std::vector<double> diff(q1.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = q1[i] - q2[i];
    const double norm = euclidean_norm(diff);
    if (norm == 0.0) {
        return std::nullopt;
    }
    for (double& d : diff) d /= norm;
    const double p = std::clamp((1.0 - overlap) / 2.0, 0.0, 1.0);
    return DifferenceOutcome{Statevector(std::move(diff)), p, 1.0 / p, norm};
}

/// Throwing form of try_difference_transform.
inline DifferenceOutcome difference_transform(const Statevector& q1, const Statevector& q2) {
    auto outcome = try_difference_transform(q1, q2);
    if (!outcome) {
        throw DegenerateDifferenceError("frames are identical; the |1> branch has probability 0");
    }
    return *std::move(outcome);
}

/// Probability that the inner-product ancilla is measured in |0>, clamped to [0, 1].
inline double ancilla_zero_probability(double overlap) noexcept {
    return std::clamp((1.0 + overlap) / 2.0, 0.0, 1.0);
}

/// Estimate of <a|b>. Exact mode returns the analytic value; sampled mode runs
/// plan.shots ancilla measurements and returns 2 * (zeros / shots) - 1.
inline double inner_product_estimate(const Statevector& a, const Statevector& b, const ShotPlan& plan) {
    plan.validate();
    const double overlap = inner_product_exact(a, b);
    if (plan.exact_mode) {
        return overlap;
    }
    const double p = ancilla_zero_probability(overlap);
    Rng rng(mix_seed(plan.seed, {detail::kEstimateStream}));
    std::uint64_t zeros = 0;
    for (std::uint64_t shot = 0; shot < plan.shots; ++shot) {
        if (rng.uniform() < p) ++zeros;
    }
    const double estimate = 2.0 * (static_cast<double>(zeros) / static_cast<double>(plan.shots)) - 1.0;
    return std::clamp(estimate, -1.0, 1.0);
}

/// Half the L1 distance between two distributions over the same index set.
inline double total_variation_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DimensionMismatchError("distributions have different supports");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

/// Normalizes a histogram to a dense probability vector of length `dim`.
inline std::vector<double> empirical_distribution(const Histogram& hist, std::size_t dim) {
    std::vector<double> p(dim, 0.0);
    double total = 0.0;
    for (const auto& [index, count] : hist) {
        if (index >= dim) throw DimensionMismatchError("histogram index out of range");
        p[index] = count;
        total += count;
    }
    if (total > 0.0) {
        for (double& x : p) x /= total;
    }
    return p;
}

}  // namespace qvr
