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

// Experiment sweeps over (k, M, q) with repeated trials.
//
// Every trial draws a fresh train/test split and fresh measurement seeds from
//   trial_seed = mix_seed(base_seed, {k, M, q, trial})
// so any single cell or trial can be re-run on its own and reproduce the
// numbers of a full sweep.

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "qvr/classifier.hpp"
#include "qvr/errors.hpp"
#include "qvr/qvid.hpp"
#include "qvr/reduction.hpp"
#include "qvr/rng.hpp"
#include "qvr/synthetic.hpp"

namespace qvr {

struct ExperimentConfig {
    /// Synthetic classes, in class-id order; a k-class cell uses the first k.
    std::vector<SyntheticClassSpec> classes;
    /// When set, classes come from this dataset manifest instead.
    std::optional<std::filesystem::path> manifest;
    std::vector<std::uint32_t> ks{2};
    std::vector<std::uint32_t> ms{40};
    std::vector<std::uint32_t> qs{10};
    std::uint32_t trials = 1;
    std::uint64_t seed = 1;
    std::uint64_t shots = 10000;
    bool exact_mode = false;
    std::uint32_t test_per_class = 100;
    std::filesystem::path output_dir = "report";
    std::uint32_t size = 64;    // N
    std::uint32_t frames = 32;  // T
};

/// Class order used for synthetic sweeps: swipe left, pull in, push away,
/// swipe right, so k = 2, 3, 4 add classes in that order.
inline std::vector<MotionKind> default_kinds() {
    return {MotionKind::SweepLeft, MotionKind::Recede, MotionKind::Approach, MotionKind::SweepRight};
}

/// Throws ConfigError unless the config can run.
inline void validate(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.size == 0 || cfg.frames < 2) throw ConfigError("size must be >= 1 and frames >= 2");
    if (cfg.ks.empty() || cfg.ms.empty() || cfg.qs.empty()) throw ConfigError("k, M and q lists must be nonempty");
    const std::uint32_t qmax = max_qubits(cfg.size, cfg.frames);
    for (auto q : cfg.qs) {
        if (q < 1 || q > qmax) {
            throw ConfigError("q = " + std::to_string(q) + " outside [1, " + std::to_string(qmax) + "]");
        }
    }
    for (auto m : cfg.ms) {
        if (m < 1) throw ConfigError("M must be >= 1");
    }
    if (cfg.test_per_class < 1) throw ConfigError("test_per_class must be >= 1");
    if (!cfg.exact_mode && cfg.shots < 1) throw ConfigError("shots must be >= 1 unless exact mode is on");
    if (!cfg.manifest) {
        for (auto k : cfg.ks) {
            if (k < 1 || k > cfg.classes.size()) {
                throw ConfigError("k = " + std::to_string(k) + " but only " + std::to_string(cfg.classes.size()) +
                                  " classes are configured");
            }
        }
    }
}

struct TrialOutcome {
    std::uint32_t correct = 0;
    std::uint32_t tested = 0;
    double accuracy = 0.0;
    std::uint64_t shots = 0;
    double expected_repeats = 0.0;
};

struct CellResult {
    std::uint32_t k = 0;
    std::uint32_t m = 0;
    std::uint32_t q = 0;
    std::vector<TrialOutcome> trials;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample standard deviation, 0 for one trial
    double mean_shots = 0.0;
    double mean_expected_repeats = 0.0;
    double wall_seconds = 0.0;

    double standard_error() const {
        return trials.empty() ? 0.0 : std_accuracy / std::sqrt(static_cast<double>(trials.size()));
    }
};

struct SweepResult {
    std::uint32_t size = 0;
    std::uint32_t frames = 0;
    std::vector<CellResult> cells;  // ordered by (k, M, q)

    const CellResult* find(std::uint32_t k, std::uint32_t m, std::uint32_t q) const {
        for (const auto& c : cells) {
            if (c.k == k && c.m == m && c.q == q) return &c;
        }
        return nullptr;
    }
};

constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint32_t k, std::uint32_t m, std::uint32_t q,
                                   std::uint32_t trial) noexcept {
    return mix_seed(base, {k, m, q, trial});
}

namespace detail {

inline void summarize(CellResult& cell) {
    const auto n = static_cast<double>(cell.trials.size());
    double sum = 0.0, shots = 0.0, repeats = 0.0;
    for (const auto& t : cell.trials) {
        sum += t.accuracy;
        shots += static_cast<double>(t.shots);
        repeats += t.expected_repeats;
    }
    cell.mean_accuracy = sum / n;
    cell.mean_shots = shots / n;
    cell.mean_expected_repeats = repeats / n;
    double ss = 0.0;
    for (const auto& t : cell.trials) ss += (t.accuracy - cell.mean_accuracy) * (t.accuracy - cell.mean_accuracy);
    cell.std_accuracy = cell.trials.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

// Labelled clips grouped by class id.
struct ManifestDataset {
    std::vector<std::string> labels;
    std::vector<std::vector<VideoTensor>> clips;
};

inline ManifestDataset load_manifest_dataset(const std::filesystem::path& path, std::uint32_t n, std::uint32_t t) {
    ManifestDataset ds;
    for (const auto& e : load_manifest(path)) {
        auto it = std::find(ds.labels.begin(), ds.labels.end(), e.label);
        std::size_t id = static_cast<std::size_t>(it - ds.labels.begin());
        if (it == ds.labels.end()) {
            ds.labels.push_back(e.label);
            ds.clips.emplace_back();
        }
        VideoTensor v = load_video(e.path);
        if (v.size() != n || v.frames() != t) {
            throw DimensionMismatchError(e.path.string() + " is not " + std::to_string(n) + "x" +
                                         std::to_string(n) + "x" + std::to_string(t));
        }
        ds.clips[id].push_back(std::move(v));
    }
    return ds;
}

inline TrialOutcome evaluate(const std::vector<LabeledVideo>& train_set, const std::vector<LabeledVideo>& test_set,
                             std::uint32_t q, std::uint64_t tseed, const ExperimentConfig& cfg) {
    const TrainedModels tm = train(train_set, q, mix_seed(tseed, {2}));
    TrialOutcome out;
    out.expected_repeats = tm.cost.expected_repeats;
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        const ShotPlan plan = cfg.exact_mode ? ShotPlan::exact() : ShotPlan::sampled(cfg.shots, mix_seed(tseed, {3, i}));
        const auto r = classify(test_set[i].video, tm.models, plan);
        out.shots += r.total_shots;
        if (r.predicted_class == test_set[i].class_id) ++out.correct;
        ++out.tested;
    }
    out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.tested);
    return out;
}

inline TrialOutcome run_synthetic_trial(const ExperimentConfig& cfg, std::uint32_t k, std::uint32_t m,
                                        std::uint32_t q, std::uint64_t tseed) {
    std::vector<LabeledVideo> train_set, test_set;
    for (std::uint32_t c = 0; c < k; ++c) {
        SyntheticClassSpec spec = cfg.classes[c];
        spec.size = cfg.size;
        spec.frames = cfg.frames;
        spec.seed = mix_seed(tseed, {c, 0});
        for (std::uint32_t i = 0; i < m; ++i) train_set.push_back({c, generate_synthetic_one(spec, i)});
        spec.seed = mix_seed(tseed, {c, 1});
        for (std::uint32_t i = 0; i < cfg.test_per_class; ++i) test_set.push_back({c, generate_synthetic_one(spec, i)});
    }
    return evaluate(train_set, test_set, q, tseed, cfg);
}

inline TrialOutcome run_manifest_trial(const ExperimentConfig& cfg, const ManifestDataset& ds, std::uint32_t k,
                                       std::uint32_t m, std::uint32_t q, std::uint64_t tseed) {
    std::vector<LabeledVideo> train_set, test_set;
    for (std::uint32_t c = 0; c < k; ++c) {
        const auto& clips = ds.clips[c];
        if (clips.size() < static_cast<std::size_t>(m) + 1) {
            throw EmptyClassError("class '" + ds.labels[c] + "' has " + std::to_string(clips.size()) +
                                  " clips, need M + 1 = " + std::to_string(m + 1));
        }
        std::vector<std::size_t> order(clips.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(mix_seed(tseed, {c, 4}));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        const std::size_t test_end = std::min(order.size(), static_cast<std::size_t>(m) + cfg.test_per_class);
        for (std::size_t i = 0; i < m; ++i) train_set.push_back({c, clips[order[i]]});
        for (std::size_t i = m; i < test_end; ++i) test_set.push_back({c, clips[order[i]]});
    }
    return evaluate(train_set, test_set, q, tseed, cfg);
}

}  // namespace detail

/// Runs every (k, M, q) cell for cfg.trials trials. Progress goes to `progress` if given.
inline SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* progress = nullptr) {
    validate(cfg);
    std::optional<detail::ManifestDataset> dataset;
    if (cfg.manifest) {
        dataset = detail::load_manifest_dataset(*cfg.manifest, cfg.size, cfg.frames);
        for (auto k : cfg.ks) {
            if (k < 1 || k > dataset->labels.size()) {
                throw ConfigError("k = " + std::to_string(k) + " but the manifest has " +
                                  std::to_string(dataset->labels.size()) + " labels");
            }
        }
    }
    auto ks = cfg.ks, ms = cfg.ms, qs = cfg.qs;
    for (auto* list : {&ks, &ms, &qs}) {
        std::sort(list->begin(), list->end());
        list->erase(std::unique(list->begin(), list->end()), list->end());
    }
    SweepResult result{cfg.size, cfg.frames, {}};
    for (auto k : ks) {
        for (auto m : ms) {
            for (auto q : qs) {
                CellResult cell{k, m, q, {}, 0, 0, 0, 0, 0};
                const auto start = std::chrono::steady_clock::now();
                for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
                    const std::uint64_t tseed = trial_seed(cfg.seed, k, m, q, trial);
                    try {
                        cell.trials.push_back(dataset ? detail::run_manifest_trial(cfg, *dataset, k, m, q, tseed)
                                                      : detail::run_synthetic_trial(cfg, k, m, q, tseed));
                    } catch (const Error& e) {
                        throw Error(e.kind(), "(k=" + std::to_string(k) + ", M=" + std::to_string(m) +
                                                  ", q=" + std::to_string(q) + ", trial=" + std::to_string(trial) +
                                                  ") " + e.what());
                    }
                }
                cell.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                detail::summarize(cell);
                if (progress) {
                    *progress << "k=" << k << " M=" << m << " q=" << q << " acc=" << cell.mean_accuracy
                              << " std=" << cell.std_accuracy << " (" << cell.wall_seconds << " s)\n";
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

inline std::string accuracy_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "k,M,q,mean_acc,std_acc,trials\n";
    for (const auto& c : r.cells) {
        out << c.k << ',' << c.m << ',' << c.q << ',' << format_number(c.mean_accuracy) << ','
            << format_number(c.std_accuracy) << ',' << c.trials.size() << '\n';
    }
    return out.str();
}

inline std::vector<std::uint32_t> distinct_qs(const SweepResult& r) {
    std::vector<std::uint32_t> qs;
    for (const auto& c : r.cells) qs.push_back(c.q);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    return qs;
}

inline std::string coverage_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "q,coverage_fraction\n";
    for (auto q : distinct_qs(r)) out << q << ',' << format_number(coverage_fraction(q, r.size, r.frames)) << '\n';
    return out.str();
}

/// Shot and post-selection counters; wall time is left out so the file is deterministic.
inline std::string cost_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "k,M,q,mean_classification_shots,mean_postselection_repeats\n";
    for (const auto& c : r.cells) {
        out << c.k << ',' << c.m << ',' << c.q << ',' << format_number(c.mean_shots) << ','
            << format_number(c.mean_expected_repeats) << '\n';
    }
    return out.str();
}

/// Accuracy vs q, one polyline per M, for a single k.
inline std::string accuracy_svg(const SweepResult& r, std::uint32_t k) {
    constexpr double width = 640, height = 400, left = 60, right = 140, top = 30, bottom = 50;
    const auto qs = distinct_qs(r);
    const double qmin = qs.empty() ? 0 : qs.front();
    const double qmax = qs.empty() ? 1 : qs.back();
    const double span = qmax > qmin ? qmax - qmin : 1.0;
    auto x_of = [&](double q) { return left + (q - qmin) / span * (width - left - right); };
    auto y_of = [&](double acc) { return top + (1.0 - acc) * (height - top - bottom); };
    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\">Accuracy vs number of qubits, k=" << k
      << "</text>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << y_of(0) << "\" x2=\"" << width - right << "\" y2=\"" << y_of(0)
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << y_of(0) << "\" x2=\"" << left << "\" y2=\"" << y_of(1)
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 10; i += 2) {
        const double acc = i / 10.0;
        s << "<text x=\"" << left - 8 << "\" y=\"" << y_of(acc) + 4 << "\" text-anchor=\"end\">"
          << format_number(acc) << "</text>\n";
    }
    for (auto q : qs) {
        s << "<text x=\"" << x_of(q) << "\" y=\"" << y_of(0) + 18 << "\" text-anchor=\"middle\">" << q << "</text>\n";
    }
    s << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">qubits q</text>\n";
    std::size_t series = 0;
    std::map<std::uint32_t, std::vector<const CellResult*>> by_m;
    for (const auto& c : r.cells) {
        if (c.k == k) by_m[c.m].push_back(&c);
    }
    for (const auto& [m, cells] : by_m) {
        const char* colour = palette[series % std::size(palette)];
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s << (i ? " " : "") << format_number(x_of(cells[i]->q)) << ',' << format_number(y_of(cells[i]->mean_accuracy));
        }
        s << "\"/>\n";
        const double ly = top + 20.0 * static_cast<double>(series);
        s << "<line x1=\"" << width - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 40 << "\" y2=\""
          << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << width - right + 45 << "\" y=\"" << ly + 4 << "\">M=" << m << "</text>\n";
        ++series;
    }
    s << "</svg>\n";
    return s.str();
}

/// Writes accuracy.csv, coverage.csv, cost.csv and accuracy_k<k>.svg into `dir`.
inline std::vector<std::filesystem::path> emit_report(const SweepResult& r, const std::filesystem::path& dir) {
    if (r.cells.empty()) {
        throw InvalidStateError("refusing to write a report for an empty sweep result");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::string& name, const std::string& text) {
        io::write_text(dir / name, text);
        written.push_back(dir / name);
    };
    put("accuracy.csv", accuracy_csv(r));
    put("coverage.csv", coverage_csv(r));
    put("cost.csv", cost_csv(r));
    std::vector<std::uint32_t> ks;
    for (const auto& c : r.cells) ks.push_back(c.k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (auto k : ks) put("accuracy_k" + std::to_string(k) + ".svg", accuracy_svg(r, k));
    return written;
}

// Config files: one `key = value` per line, '#' comments. Lists are
// comma-separated. Recognized keys:
//   kinds, manifest, k, M, q, trials, seed, shots, exact, test_per_class, out,
//   size, frames, radius_min, radius_max, speed_min, speed_max, jitter,
//   intensity, noise

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config_text(const std::string& text) {
    ConfigMap kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

template <typename T>
T parse_scalar(const std::string& key, const std::string& text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("bad value '" + text + "' for key '" + key + "'");
    }
    return value;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        out.push_back(item.substr(a, item.find_last_not_of(" \t") - a + 1));
    }
    return out;
}

// "4..8" expands to 4,5,6,7,8.
inline std::vector<std::uint32_t> parse_uint_list(const std::string& key, const std::string& text) {
    std::vector<std::uint32_t> out;
    for (const auto& item : split_list(text)) {
        if (const auto dots = item.find(".."); dots != std::string::npos) {
            const auto lo = parse_scalar<std::uint32_t>(key, item.substr(0, dots));
            const auto hi = parse_scalar<std::uint32_t>(key, item.substr(dots + 2));
            if (hi < lo) throw ConfigError("empty range '" + item + "' for key '" + key + "'");
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(parse_scalar<std::uint32_t>(key, item));
        }
    }
    if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("bad boolean '" + text + "' for key '" + key + "'");
}

}  // namespace detail

/// Builds a config from key/value pairs; unknown keys are a ConfigError.
inline ExperimentConfig config_from_map(const ConfigMap& kv) {
    ExperimentConfig cfg;
    SyntheticClassSpec proto;
    std::vector<MotionKind> kinds = default_kinds();
    for (const auto& [key, value] : kv) {
        using detail::parse_scalar;
        if (key == "kinds") {
            kinds.clear();
            for (const auto& name : detail::split_list(value)) {
                const auto kind = parse_motion_kind(name);
                if (!kind) throw ConfigError("unknown motion kind '" + name + "'");
                kinds.push_back(*kind);
            }
        } else if (key == "manifest") {
            cfg.manifest = value;
        } else if (key == "k") {
            cfg.ks = detail::parse_uint_list(key, value);
        } else if (key == "M") {
            cfg.ms = detail::parse_uint_list(key, value);
        } else if (key == "q") {
            cfg.qs = detail::parse_uint_list(key, value);
        } else if (key == "trials") {
            cfg.trials = parse_scalar<std::uint32_t>(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_scalar<std::uint64_t>(key, value);
        } else if (key == "shots") {
            cfg.shots = parse_scalar<std::uint64_t>(key, value);
        } else if (key == "exact") {
            cfg.exact_mode = detail::parse_bool(key, value);
        } else if (key == "test_per_class") {
            cfg.test_per_class = parse_scalar<std::uint32_t>(key, value);
        } else if (key == "out") {
            cfg.output_dir = value;
        } else if (key == "size") {
            cfg.size = parse_scalar<std::uint32_t>(key, value);
        } else if (key == "frames") {
            cfg.frames = parse_scalar<std::uint32_t>(key, value);
        } else if (key == "radius_min") {
            proto.radius_min = parse_scalar<double>(key, value);
        } else if (key == "radius_max") {
            proto.radius_max = parse_scalar<double>(key, value);
        } else if (key == "speed_min") {
            proto.speed_min = parse_scalar<double>(key, value);
        } else if (key == "speed_max") {
            proto.speed_max = parse_scalar<double>(key, value);
        } else if (key == "jitter") {
            proto.jitter = parse_scalar<double>(key, value);
        } else if (key == "intensity") {
            proto.intensity = parse_scalar<double>(key, value);
        } else if (key == "noise") {
            proto.noise = parse_scalar<double>(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    proto.size = cfg.size;
    proto.frames = cfg.frames;
    if (kinds.empty()) throw ConfigError("kinds must list at least one motion kind");
    for (auto kind : kinds) {
        SyntheticClassSpec spec = proto;
        spec.kind = kind;
        cfg.classes.push_back(spec);
    }
    return cfg;
}

}  // namespace qvr
