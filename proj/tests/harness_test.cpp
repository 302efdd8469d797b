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

#include "qvr/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

namespace qvr {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("qvr_harness_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    const auto b = io::read_file(p);
    return std::string(b.begin(), b.end());
}

// Small clips keep these tests fast; acceptance runs the 64x64x32 geometry.
ExperimentConfig small_config() {
    ConfigMap kv{{"size", "24"}, {"frames", "8"}, {"radius_min", "2.5"}, {"radius_max", "3.5"},
                 {"speed_min", "1.5"}, {"speed_max", "2"}, {"jitter", "1"}, {"noise", "0.05"},
                 {"M", "4"}, {"q", "3,6"}, {"trials", "2"}, {"test_per_class", "5"}, {"exact", "true"}};
    return config_from_map(kv);
}

TEST(Config, ParsesKeyValueText) {
    const auto kv = parse_config_text("# sweep\nk = 2,3\nM=20, 40 # trailing\nq = 4..6\nexact = yes\n\n");
    const auto cfg = config_from_map(kv);
    EXPECT_EQ(cfg.ks, (std::vector<std::uint32_t>{2, 3}));
    EXPECT_EQ(cfg.ms, (std::vector<std::uint32_t>{20, 40}));
    EXPECT_EQ(cfg.qs, (std::vector<std::uint32_t>{4, 5, 6}));
    EXPECT_TRUE(cfg.exact_mode);
    ASSERT_EQ(cfg.classes.size(), 4u);
    EXPECT_EQ(cfg.classes[0].kind, MotionKind::SweepLeft);
    EXPECT_EQ(cfg.classes[1].kind, MotionKind::Recede);
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config_text("novalue\n"), ConfigError);
    EXPECT_THROW(config_from_map({{"bogus", "1"}}), ConfigError);
    EXPECT_THROW(config_from_map({{"q", "x"}}), ConfigError);
    EXPECT_THROW(config_from_map({{"kinds", "sideways"}}), ConfigError);
    EXPECT_THROW(config_from_map({{"q", "5..3"}}), ConfigError);

    auto cfg = config_from_map({{"q", "18"}});  // log2(64*64*32) = 17
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = config_from_map({{"q", "0"}});
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = config_from_map({{"trials", "0"}});
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = config_from_map({{"k", "5"}});
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = config_from_map({{"q", "17"}, {"k", "4"}});
    EXPECT_NO_THROW(validate(cfg));
}

TEST(TrialSeed, DependsOnEveryCoordinate) {
    const auto base = trial_seed(1, 2, 40, 10, 0);
    EXPECT_EQ(base, trial_seed(1, 2, 40, 10, 0));
    EXPECT_NE(base, trial_seed(2, 2, 40, 10, 0));
    EXPECT_NE(base, trial_seed(1, 3, 40, 10, 0));
    EXPECT_NE(base, trial_seed(1, 2, 41, 10, 0));
    EXPECT_NE(base, trial_seed(1, 2, 40, 11, 0));
    EXPECT_NE(base, trial_seed(1, 2, 40, 10, 1));
}

TEST(RunSweep, DeterministicAndAccuracyIsExactRatio) {
    const auto cfg = small_config();
    const auto a = run_sweep(cfg);
    const auto b = run_sweep(cfg);
    EXPECT_EQ(accuracy_csv(a), accuracy_csv(b));
    ASSERT_EQ(a.cells.size(), 2u);
    for (const auto& cell : a.cells) {
        ASSERT_EQ(cell.trials.size(), 2u);
        for (const auto& t : cell.trials) {
            EXPECT_EQ(t.tested, 10u);
            EXPECT_EQ(t.accuracy, static_cast<double>(t.correct) / static_cast<double>(t.tested));
            EXPECT_GE(t.accuracy, 0.0);
            EXPECT_LE(t.accuracy, 1.0);
        }
        EXPECT_GE(cell.std_accuracy, 0.0);
    }
}

TEST(RunSweep, SubSweepMatchesFullSweep) {
    auto full = small_config();
    full.trials = 3;
    auto part = full;
    part.qs = {6};
    const auto a = run_sweep(full);
    const auto b = run_sweep(part);
    const auto* fa = a.find(2, 4, 6);
    const auto* fb = b.find(2, 4, 6);
    ASSERT_NE(fa, nullptr);
    ASSERT_NE(fb, nullptr);
    ASSERT_EQ(fa->trials.size(), fb->trials.size());
    for (std::size_t i = 0; i < fa->trials.size(); ++i) EXPECT_EQ(fa->trials[i].correct, fb->trials[i].correct);
}

TEST(RunSweep, ShotModeCountsShots) {
    auto cfg = small_config();
    cfg.exact_mode = false;
    cfg.shots = 300;
    cfg.qs = {6};
    cfg.trials = 1;
    const auto r = run_sweep(cfg);
    // 2 classes x 5 test clips x k=2 estimates x 300 shots.
    EXPECT_EQ(r.cells[0].mean_shots, 2 * 5 * 2 * 300.0);
    EXPECT_GT(r.cells[0].mean_expected_repeats, 0.0);
}

TEST(RunSweep, ErrorsCarryCellContext) {
    auto cfg = small_config();
    cfg.classes[0].intensity = 0.0;  // invalid generator parameters
    try {
        run_sweep(cfg);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        EXPECT_NE(std::string(e.what()).find("k=2, M=4, q=3, trial=0"), std::string::npos) << e.what();
    }
}

TEST(RunSweep, ManifestDataset) {
    const auto dir = temp_dir("manifest");
    auto cfg = small_config();
    std::vector<ManifestEntry> entries;
    for (std::uint32_t c = 0; c < 2; ++c) {
        SyntheticClassSpec spec = cfg.classes[c];
        spec.seed = 100 + c;
        const auto clips = generate_synthetic(spec, 7);
        for (std::size_t i = 0; i < clips.size(); ++i) {
            const auto path = dir / ("c" + std::to_string(c) + "_" + std::to_string(i) + ".qvid");
            save_video(clips[i], path);
            entries.push_back({path, std::string(to_string(spec.kind))});
        }
    }
    save_manifest(entries, dir / "manifest.txt");
    cfg.manifest = dir / "manifest.txt";
    cfg.qs = {6};
    const auto r = run_sweep(cfg);
    ASSERT_EQ(r.cells.size(), 1u);
    EXPECT_EQ(r.cells[0].trials[0].tested, 6u);  // 7 clips - M=4 -> 3 test clips per class
    cfg.ms = {7};
    EXPECT_THROW(run_sweep(cfg), Error);
    fs::remove_all(dir);
}

TEST(Report, CoverageRowsMatchFormula) {
    SweepResult r{64, 32, {}};
    for (std::uint32_t q = 4; q <= 17; ++q) {
        CellResult c{2, 40, q, {TrialOutcome{1, 2, 0.5, 0, 0}}, 0.5, 0, 0, 0, 0};
        r.cells.push_back(c);
    }
    const auto csv = coverage_csv(r);
    EXPECT_NE(csv.find("\n10,0.0078125\n"), std::string::npos);
    EXPECT_NE(csv.find("\n17,1\n"), std::string::npos);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "q,coverage_fraction");
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const auto q = static_cast<std::uint32_t>(std::stoul(line.substr(0, comma)));
        EXPECT_EQ(std::stod(line.substr(comma + 1)), coverage_fraction(q, 64, 32));
    }
}

TEST(Report, WritesFilesDeterministically) {
    const auto cfg = small_config();
    const auto d1 = temp_dir("r1");
    const auto d2 = temp_dir("r2");
    const auto files = emit_report(run_sweep(cfg), d1);
    emit_report(run_sweep(cfg), d2);
    EXPECT_EQ(files.size(), 4u);  // accuracy, coverage, cost, one svg for k=2
    for (const char* name : {"accuracy.csv", "coverage.csv", "cost.csv", "accuracy_k2.svg"}) {
        ASSERT_TRUE(fs::exists(d1 / name)) << name;
        EXPECT_EQ(slurp(d1 / name), slurp(d2 / name)) << name;
    }
    EXPECT_EQ(slurp(d1 / "accuracy.csv").substr(0, 31), "k,M,q,mean_acc,std_acc,trials\n2");
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST(Report, EmptyResultRefused) {
    EXPECT_THROW(emit_report(SweepResult{}, temp_dir("empty")), InvalidStateError);
}

}  // namespace
}  // namespace qvr
