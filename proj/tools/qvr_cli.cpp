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

// qvr command-line tool. Exit codes: 0 success, 1 config error, 2 data error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qvr/classifier.hpp"
#include "qvr/harness.hpp"
#include "qvr/preprocess.hpp"
#include "qvr/qvid.hpp"
#include "qvr/synthetic.hpp"

namespace fs = std::filesystem;
using namespace qvr;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    bool exact = false;
    std::optional<std::uint64_t> shots;
};

std::vector<std::string> read_labels(const fs::path& model) {
    const auto bytes = io::read_file(fs::path(model.string() + ".labels"));
    std::vector<std::string> labels;
    std::string line;
    for (char ch : bytes) {
        if (ch == '\n') {
            labels.push_back(line);
            line.clear();
        } else if (ch != '\r') {
            line += ch;
        }
    }
    if (!line.empty()) labels.push_back(line);
    return labels;
}

int cmd_generate(const Globals& g, const std::string& kinds, std::uint32_t count, std::uint32_t size,
                 std::uint32_t frames, const fs::path& out) {
    ConfigMap kv{{"size", std::to_string(size)}, {"frames", std::to_string(frames)}};
    if (!kinds.empty()) kv["kinds"] = kinds;
    const auto cfg = config_from_map(kv);
    const std::uint64_t seed = g.seed.value_or(1);
    fs::create_directories(out);
    std::vector<ManifestEntry> entries;
    for (std::uint32_t c = 0; c < cfg.classes.size(); ++c) {
        SyntheticClassSpec spec = cfg.classes[c];
        spec.seed = mix_seed(seed, {c});
        const std::string label(to_string(spec.kind));
        for (std::uint32_t i = 0; i < count; ++i) {
            const auto path = out / (label + "_" + std::to_string(i) + ".qvid");
            save_video(generate_synthetic_one(spec, i), path);
            entries.push_back({path, label});
        }
        std::cerr << "generated " << count << " x " << label << "\n";
    }
    save_manifest(entries, out / "manifest.txt");
    std::cout << (out / "manifest.txt").string() << "\n";
    return 0;
}

int cmd_train(const Globals& g, const fs::path& manifest, const fs::path& model, std::uint32_t q) {
    std::vector<std::string> labels;
    std::vector<LabeledVideo> videos;
    for (const auto& e : load_manifest(manifest)) {
        auto it = std::find(labels.begin(), labels.end(), e.label);
        if (it == labels.end()) it = labels.insert(labels.end(), e.label);
        videos.push_back({static_cast<std::uint32_t>(it - labels.begin()), load_video(e.path)});
    }
    if (videos.empty()) throw EmptyClassError("manifest " + manifest.string() + " lists no videos");
    const auto& v0 = videos.front().video;
    if (q < 1 || q > max_qubits(v0.size(), v0.frames())) {
        throw ConfigError("q = " + std::to_string(q) + " outside [1, " +
                          std::to_string(max_qubits(v0.size(), v0.frames())) + "]");
    }
    const auto tm = train(videos, q, g.seed.value_or(1));
    save_models(tm, model);
    std::string text;
    for (const auto& l : labels) text += l + "\n";
    io::write_text(fs::path(model.string() + ".labels"), text);
    std::cerr << "trained " << labels.size() << " classes on " << videos.size() << " videos, q=" << q
              << ", expected repeats " << tm.cost.expected_repeats << "\n";
    return 0;
}

int cmd_classify(const Globals& g, const fs::path& model, const fs::path& video) {
    const auto tm = load_models(model);
    std::vector<std::string> labels;
    if (fs::exists(model.string() + ".labels")) labels = read_labels(model);
    const ShotPlan plan = g.exact ? ShotPlan::exact() : ShotPlan::sampled(g.shots.value_or(10000), g.seed.value_or(1));
    const auto r = classify(load_video(video), tm.models, plan);
    auto name = [&](std::uint32_t id) { return id < labels.size() ? labels[id] : std::to_string(id); };
    std::cout << video.string() << " predicted=" << name(r.predicted_class) << " class=" << r.predicted_class;
    for (std::size_t i = 0; i < r.scores.size(); ++i) {
        std::cout << " score[" << name(r.class_ids[i]) << "]=" << format_number(r.scores[i]);
    }
    std::cout << " shots=" << r.total_shots << (r.tie_broken ? " tie" : "") << "\n";
    return 0;
}

int cmd_sweep(const Globals& g, const std::string& config, const std::vector<std::string>& extras) {
    ConfigMap kv;
    if (!config.empty()) {
        const auto bytes = io::read_file(config);
        kv = parse_config_text(std::string(bytes.begin(), bytes.end()));
    }
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const auto& flag = extras[i];
        if (flag.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + flag + "'");
        std::string key = flag.substr(2), value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.resize(eq);
        } else if (i + 1 < extras.size()) {
            value = extras[++i];
        } else {
            throw ConfigError("flag " + flag + " needs a value");
        }
        kv[key] = value;
    }
    if (g.seed) kv["seed"] = std::to_string(*g.seed);
    if (g.shots) kv["shots"] = std::to_string(*g.shots);
    if (g.exact) kv["exact"] = "true";
    const auto cfg = config_from_map(kv);
    const auto result = run_sweep(cfg, &std::cerr);
    for (const auto& p : emit_report(result, cfg.output_dir)) std::cout << p.string() << "\n";
    return 0;
}

int cmd_import(const fs::path& frames, const fs::path& out, std::uint32_t size, std::uint32_t count) {
    const auto raw = load_pnm_frames(frames);
    save_video(preprocess(raw, size, count), out);
    std::cerr << "imported " << raw.frames << " frames of " << raw.width << "x" << raw.height << "\n";
    std::cout << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum video-classification simulator"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Base seed")->configurable(false);
    app.add_flag("--exact", g.exact, "Analytic probabilities instead of sampled shots");
    app.add_option("--shots", g.shots, "Shots per inner-product estimate");

    std::string kinds;
    std::uint32_t count = 50, size = 64, frames = 32;
    fs::path out = "dataset";
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as QVID files plus manifest.txt");
    gen->add_option("--kinds", kinds, "Comma-separated motion kinds (default: all four)");
    gen->add_option("--count", count, "Videos per class");
    gen->add_option("--size", size, "Frame side N");
    gen->add_option("--frames", frames, "Frames per video T");
    gen->add_option("--out", out, "Output directory");

    fs::path manifest, model = "model.qvrm";
    std::uint32_t q = 10;
    auto* tr = app.add_subcommand("train", "Train class models from a manifest");
    tr->add_option("manifest", manifest, "Dataset manifest")->required();
    tr->add_option("-o,--model", model, "Output model file");
    tr->add_option("-q,--qubits", q, "Reduced-register qubits");

    fs::path video;
    auto* cl = app.add_subcommand("classify", "Classify one QVID video");
    cl->add_option("model", model, "Model file")->required();
    cl->add_option("video", video, "QVID video")->required();

    std::string config;
    auto* sw = app.add_subcommand("sweep", "Run a (k, M, q) sweep; any config key may be given as --key value");
    sw->add_option("config", config, "key = value config file");
    sw->allow_extras();

    fs::path frame_dir, target;
    std::uint32_t isize = 64, iframes = 32;
    auto* im = app.add_subcommand("import-pgm", "Preprocess a directory of PGM/PPM frames into a QVID file");
    im->add_option("frame_dir", frame_dir, "Directory of frames, read in filename order")->required();
    im->add_option("output", target, "Output QVID path")->required();
    im->add_option("--size", isize, "Target frame side N");
    im->add_option("--frames", iframes, "Target frame count T");

    app.fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*gen) return cmd_generate(g, kinds, count, size, frames, out);
        if (*tr) return cmd_train(g, manifest, model, q);
        if (*cl) return cmd_classify(g, model, video);
        if (*sw) return cmd_sweep(g, config, sw->remaining());
        if (*im) return cmd_import(frame_dir, target, isize, iframes);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
        return e.is_config_error() ? 1 : 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error [Io]: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
