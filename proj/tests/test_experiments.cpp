#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "relutrain/experiments.hpp"

using namespace relutrain;
using Catch::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("target registry values") {
    REQUIRE(target_by_id("f1").f({-0.4}) == Approx(0.4));
    REQUIRE(target_by_id("f1").min_active == 2);
    REQUIRE(target_by_id("f2").min_active == 4);
    // f2 coincides with |x| inside [-1, 1] and bends outside
    REQUIRE(target_by_id("f2").f({0.5}) == Approx(0.5));
    const double k = std::sqrt(3.0) / (std::sqrt(3.0) - 1.0);
    REQUIRE(target_by_id("f2").f({1.5}) == Approx(1.5 - k * 0.5));
    REQUIRE(target_by_id("f3").f({0.5, 0.0}) ==
            Approx(std::sin(std::numbers::pi * 0.5) * std::exp(-0.25)));
    REQUIRE(target_by_id("f4").f({0.3, 0.3}) == Approx(0.0).margin(1e-15));
    REQUIRE(target_by_id("sine-sum").f({0.25}) ==
            Approx(std::sin(std::numbers::pi) + std::sin(1.5 * std::numbers::pi)).margin(1e-12));
    REQUIRE_THROWS_AS(target_by_id("f9"), config_error);
}

TEST_CASE("scheme parsing") {
    REQUIRE(parse_scheme("he").kind == InitScheme::Kind::HeNoBias);
    REQUIRE(parse_scheme("he-bias").kind == InitScheme::Kind::HeWithBias);
    REQUIRE(parse_scheme("sphere").kind == InitScheme::Kind::UnitSphereNoBias);
    REQUIRE(parse_scheme("sphere-bias").kind == InitScheme::Kind::UnitSphereWithBias);
    const auto normal = parse_scheme("normal:0.5");
    REQUIRE(normal.kind == InitScheme::Kind::NormalNoBias);
    REQUIRE(normal.sigma_w == 0.5);
    const auto nb = parse_scheme("normal-bias:1.5,0.25");
    REQUIRE(nb.sigma_w == 1.5);
    REQUIRE(nb.sigma_b == 0.25);
    REQUIRE_THROWS_AS(parse_scheme("xavier"), config_error);
}

TEST_CASE("experiment config json round trip and validation") {
    ExperimentConfig cfg;
    cfg.experiment = "dist-check";
    cfg.arch = {1, 3, 2};
    cfg.schemes = {"sphere", "he-bias"};
    cfg.replicates = 7;
    cfg.seed = 99;
    const auto j = cfg.to_json();
    const auto back = ExperimentConfig::from_json(j);
    REQUIRE(back.experiment == "dist-check");
    REQUIRE(back.arch == cfg.arch);
    REQUIRE(back.schemes == cfg.schemes);
    REQUIRE(back.replicates == 7);
    REQUIRE(back.seed == 99);

    ExperimentConfig bad = cfg;
    bad.replicates = 0;
    REQUIRE_THROWS_AS(bad.validate(), config_error);
    bad = cfg;
    bad.experiment = "nope";
    REQUIRE_THROWS_AS(bad.validate(), config_error);
    bad = cfg;
    bad.format = "xml";
    REQUIRE_THROWS_AS(bad.validate(), config_error);

    // a manifest wraps the config under "config"
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = j;
    REQUIRE(ExperimentConfig::from_json(manifest).arch == cfg.arch);
}

TEST_CASE("success-rate smoke run") {
    TempDir dir("relutrain_sr");
    ExperimentConfig cfg;
    cfg.experiment = "success-rate";
    cfg.target = "f1";
    cfg.widths = {2, 6};
    cfg.replicates = 4;
    cfg.train_points = 40;
    cfg.test_points = 100;
    cfg.max_epochs = 300;
    cfg.seed = 5;
    cfg.out_dir = dir.path.string();
    const auto rows = run_success_rate(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        REQUIRE(row.success_rate >= 0.0);
        REQUIRE(row.success_rate <= 1.0);
        const double expected =
            shallow_trainability(row.width, 2, 1, std::sqrt(3.0), InitScheme::he_with_bias()).value;
        REQUIRE(row.trainability == Approx(expected).margin(1e-12));
    }
    REQUIRE(std::filesystem::exists(dir.path / "manifest.json"));
    REQUIRE(std::filesystem::exists(dir.path / "success_rate_f1.csv"));

    REQUIRE_THROWS_AS(
        [&] {
            auto bad = cfg;
            bad.target = "f3"; // 2-D target has no minimal shallow width here
            run_success_rate(bad);
        }(),
        config_error);
}

TEST_CASE("dist-check run matches pi1 and rejects unsupported combos") {
    TempDir dir("relutrain_dc");
    ExperimentConfig cfg;
    cfg.experiment = "dist-check";
    cfg.arch = {1, 6, 4};
    cfg.schemes = {"sphere-bias", "sphere-bias"};
    cfg.samples = 20000;
    cfg.seed = 3;
    cfg.out_dir = dir.path.string();
    const auto rows = run_dist_check(cfg);
    // layers 1 and 2, counts 0..6 and 0..4
    REQUIRE(rows.size() == 7 + 5);
    double emp_sum = 0.0, tv = 0.0;
    for (const auto& row : rows) {
        if (row.layer == 1) {
            emp_sum += row.empirical;
            tv += std::abs(row.empirical - row.analytic);
        }
    }
    REQUIRE(emp_sum == Approx(1.0).margin(1e-9));
    REQUIRE(tv / 2.0 < 0.02);

    auto bad = cfg;
    bad.schemes = {"he", "he"};
    REQUIRE_THROWS_AS(run_dist_check(bad), unsupported_case_error);
}

TEST_CASE("dist-check reruns are byte-identical") {
    TempDir dir_a("relutrain_rep_a");
    TempDir dir_b("relutrain_rep_b");
    ExperimentConfig cfg;
    cfg.experiment = "dist-check";
    cfg.arch = {1, 3, 3};
    cfg.schemes = {"sphere", "he-bias"};
    cfg.samples = 5000;
    cfg.seed = 11;
    cfg.out_dir = dir_a.path.string();
    run_dist_check(cfg);
    // rerun from the written manifest
    nlohmann::json manifest;
    {
        std::ifstream f(dir_a.path / "manifest.json");
        f >> manifest;
    }
    auto cfg2 = ExperimentConfig::from_json(manifest);
    cfg2.out_dir = dir_b.path.string();
    run_dist_check(cfg2);
    REQUIRE(slurp(dir_a.path / "dist_check.csv") == slurp(dir_b.path / "dist_check.csv"));
}

TEST_CASE("init-compare smoke run") {
    TempDir dir("relutrain_ic");
    ExperimentConfig cfg;
    cfg.experiment = "init-compare";
    cfg.target = "f3";
    cfg.widths = {30};
    cfg.replicates = 2;
    cfg.max_epochs = 40;
    cfg.seed = 8;
    cfg.out_dir = dir.path.string();
    const auto result = run_init_compare(cfg);
    REQUIRE(result.methods.size() == 3);
    for (int mi = 0; mi < 3; ++mi) {
        REQUIRE(result.final_rmse[mi].size() == 2);
        REQUIRE(result.mean_rmse[mi].size() == 40);
        for (double v : result.mean_rmse[mi]) REQUIRE(v >= 0.0);
        for (int dead : result.dead_counts[mi]) {
            REQUIRE(dead >= 0);
            REQUIRE(dead <= 30);
        }
    }
    REQUIRE(std::filesystem::exists(dir.path / "init_compare_history_f3.csv"));
    REQUIRE(std::filesystem::exists(dir.path / "init_compare_summary_f3.csv"));
    REQUIRE_THROWS_AS(
        [&] {
            auto bad = cfg;
            bad.target = "f1";
            run_init_compare(bad);
        }(),
        config_error);
}

TEST_CASE("trainability table rows") {
    ExperimentConfig cfg;
    cfg.experiment = "trainability-table";
    cfg.widths = {2, 6};
    cfg.samples = 4000;
    cfg.seed = 2;
    const auto rows = run_trainability_table(cfg);
    bool saw_shallow = false, saw_width = false, saw_upper = false;
    int deep_rows = 0;
    for (const auto& row : rows) {
        if (row.kind == "shallow" && row.params.rfind("n=2 m=2", 0) == 0) {
            REQUIRE(row.value == Approx(0.5625).margin(1e-12));
            REQUIRE(std::abs(row.mc_value - row.value) < 4.0 * row.mc_stderr + 1e-9);
            saw_shallow = true;
        }
        if (row.kind == "suggested-width") {
            REQUIRE(row.value == 300.0);
            saw_width = true;
        }
        if (row.kind == "zero-bias-upper") {
            REQUIRE(row.value == Approx(0.673828125).margin(1e-12));
            saw_upper = true;
        }
        if (row.kind.rfind("deep3-", 0) == 0) {
            REQUIRE(row.value >= 0.0);
            REQUIRE(row.value <= 1.0);
            REQUIRE(row.value <= row.mc_value + 4.0 * row.mc_stderr);
            ++deep_rows;
        }
    }
    REQUIRE(saw_shallow);
    REQUIRE(saw_width);
    REQUIRE(saw_upper);
    REQUIRE(deep_rows == 4);
}

TEST_CASE("dataset csv round trip") {
    TempDir dir("relutrain_ds");
    const auto data = witness_data(6, 4);
    const auto path = (dir.path / "witness.csv").string();
    save_dataset_csv(data, path);
    const auto back = load_dataset_csv(path);
    REQUIRE(back.size() == data.size());
    for (size_t i = 0; i < data.size(); ++i) {
        REQUIRE(back.inputs[i][0] == Approx(data.inputs[i][0]).epsilon(1e-15));
        REQUIRE(back.targets[i][0] == Approx(data.targets[i][0]).epsilon(1e-15));
    }
    REQUIRE_THROWS_AS(load_dataset_csv((dir.path / "missing.csv").string()), config_error);
}

TEST_CASE("sine-demo dispatch pins the target") {
    TempDir dir("relutrain_sd");
    ExperimentConfig cfg;
    cfg.experiment = "sine-demo";
    cfg.widths = {120};
    cfg.replicates = 1;
    cfg.max_epochs = 10;
    cfg.seed = 6;
    cfg.out_dir = dir.path.string();
    run_experiment(cfg);
    REQUIRE(std::filesystem::exists(dir.path / "init_compare_history_sine-sum.csv"));
}
