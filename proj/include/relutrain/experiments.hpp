#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "relutrain/csv.hpp"
#include "relutrain/datadep.hpp"
#include "relutrain/dist.hpp"
#include "relutrain/errors.hpp"
#include "relutrain/interp.hpp"
#include "relutrain/netcore.hpp"
#include "relutrain/train.hpp"
#include "relutrain/trainability.hpp"

#include <json.hpp>

namespace relutrain {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Target function registry

struct TargetFunction {
    std::string id;
    int d_in = 1;
    int min_active = 0; // width of the smallest exactly-representing class
    double default_radius = 1.0;
    std::function<double(const std::vector<double>&)> f;
};

inline const TargetFunction& target_by_id(const std::string& id) {
    static const double root3 = std::sqrt(3.0);
    static const double k2 = root3 / (root3 - 1.0);
    static const std::vector<TargetFunction> registry = {
        {"f1", 1, 2, root3, [](const std::vector<double>& x) { return std::abs(x[0]); }},
        {"f2", 1, 4, root3,
         [](const std::vector<double>& x) {
             return std::abs(x[0]) - k2 * relu(x[0] - 1.0) - k2 * relu(-x[0] - 1.0);
         }},
        {"f3", 2, 0, std::numbers::sqrt2,
         [](const std::vector<double>& x) {
             return std::sin(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]) *
                    std::exp(-x[0] * x[0] - x[1] * x[1]);
         }},
        {"f4", 2, 0, std::numbers::sqrt2,
         [](const std::vector<double>& x) {
             return std::sin(std::numbers::pi * (x[0] - x[1])) * std::exp(x[0] + x[1]);
         }},
        {"sine-sum", 1, 0, 1.0,
         [](const std::vector<double>& x) {
             return std::sin(4.0 * std::numbers::pi * x[0]) +
                    std::sin(6.0 * std::numbers::pi * x[0]);
         }},
    };
    for (const auto& t : registry)
        if (t.id == id) return t;
    throw config_error("unknown target function: " + id);
}

// ---------------------------------------------------------------------------
// Scheme names used in configs and on the CLI

inline InitScheme parse_scheme(const std::string& name) {
    if (name == "he") return InitScheme::he();
    if (name == "he-bias") return InitScheme::he_with_bias();
    if (name == "sphere") return InitScheme::unit_sphere();
    if (name == "sphere-bias") return InitScheme::unit_sphere_with_bias();
    if (name.rfind("normal-bias:", 0) == 0) {
        const auto rest = name.substr(12);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw config_error("normal-bias needs sigma_w,sigma_b: " + name);
        return InitScheme::normal_with_bias(std::stod(rest.substr(0, comma)),
                                            std::stod(rest.substr(comma + 1)));
    }
    if (name.rfind("normal:", 0) == 0) return InitScheme::normal(std::stod(name.substr(7)));
    throw config_error("unknown initialization scheme: " + name);
}

inline std::string scheme_name(const InitScheme& s) {
    switch (s.kind) {
        case InitScheme::Kind::HeNoBias: return "he";
        case InitScheme::Kind::HeWithBias: return "he-bias";
        case InitScheme::Kind::UnitSphereNoBias: return "sphere";
        case InitScheme::Kind::UnitSphereWithBias: return "sphere-bias";
        case InitScheme::Kind::NormalNoBias: return "normal";
        case InitScheme::Kind::NormalWithBias: return "normal-bias";
        case InitScheme::Kind::DataDependent: return "data-dependent";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Experiment configuration

struct ExperimentConfig {
    std::string experiment; // success-rate | dist-check | init-compare | sine-demo | trainability-table
    std::string target = "f1";
    std::vector<int> widths = {2, 4, 8, 16};
    int replicates = 200;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string format = "csv";
    long samples = 100000;

    // optimizer overrides; zero/empty means the experiment default
    std::string opt_method;
    double learning_rate = 0.0;
    double momentum = -1.0;
    int batch_size = 0;
    long max_epochs = 0;

    // success-rate protocol
    int train_points = 600;
    int test_points = 1000;
    double radius = 0.0; // 0 = target default

    // dist-check protocol
    std::vector<int> arch = {1, 6, 4};
    std::vector<std::string> schemes = {"sphere-bias", "sphere-bias"};

    void validate() const {
        static const std::vector<std::string> known = {
            "success-rate", "dist-check", "init-compare", "sine-demo", "trainability-table"};
        bool ok = false;
        for (const auto& id : known) ok = ok || id == experiment;
        if (!ok) throw config_error("unknown experiment id: " + experiment);
        target_by_id(target);
        if (replicates < 1) throw config_error("replicates must be >= 1");
        if (samples < 1) throw config_error("samples must be >= 1");
        if (train_points < 1 || test_points < 1) throw config_error("point counts must be >= 1");
        if (format != "csv" && format != "json") throw config_error("format must be csv or json");
        for (int w : widths)
            if (w < 1) throw config_error("widths must be >= 1");
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["experiment"] = experiment;
        j["target"] = target;
        j["widths"] = widths;
        j["replicates"] = replicates;
        j["seed"] = seed;
        j["out"] = out_dir;
        j["format"] = format;
        j["samples"] = samples;
        j["opt_method"] = opt_method;
        j["learning_rate"] = learning_rate;
        j["momentum"] = momentum;
        j["batch_size"] = batch_size;
        j["max_epochs"] = max_epochs;
        j["train_points"] = train_points;
        j["test_points"] = test_points;
        j["radius"] = radius;
        j["arch"] = arch;
        j["schemes"] = schemes;
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& raw) {
        // accept either a bare config or a manifest with a "config" object
        const nlohmann::json& j = raw.contains("config") ? raw.at("config") : raw;
        ExperimentConfig cfg;
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("experiment", cfg.experiment);
        get("target", cfg.target);
        get("widths", cfg.widths);
        get("replicates", cfg.replicates);
        get("seed", cfg.seed);
        get("out", cfg.out_dir);
        get("format", cfg.format);
        get("samples", cfg.samples);
        get("opt_method", cfg.opt_method);
        get("learning_rate", cfg.learning_rate);
        get("momentum", cfg.momentum);
        get("batch_size", cfg.batch_size);
        get("max_epochs", cfg.max_epochs);
        get("train_points", cfg.train_points);
        get("test_points", cfg.test_points);
        get("radius", cfg.radius);
        get("arch", cfg.arch);
        get("schemes", cfg.schemes);
        return cfg;
    }
};

namespace detail {

inline void write_manifest(const ExperimentConfig& cfg) {
    if (cfg.out_dir.empty()) return;
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::ordered_json manifest;
    manifest["experiment"] = cfg.experiment;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.to_json();
    std::ofstream f(std::filesystem::path(cfg.out_dir) / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << '\n';
}

inline void save_table(const CsvTable& table, const ExperimentConfig& cfg,
                       const std::string& name) {
    if (cfg.out_dir.empty()) return;
    std::filesystem::create_directories(cfg.out_dir);
    const auto base = std::filesystem::path(cfg.out_dir) / name;
    if (cfg.format == "csv") {
        table.save((base).string() + ".csv");
        return;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (size_t i = 0; i < table.header.size(); ++i)
            obj[table.header[i]] = csv_format(row[i]);
        rows.push_back(obj);
    }
    std::ofstream f(base.string() + ".json", std::ios::binary);
    f << rows.dump(2) << '\n';
}

} // namespace detail

// ---------------------------------------------------------------------------
// success-rate: empirical training success vs analytic trainability

struct SuccessRateRow {
    int width = 0;
    double success_rate = 0.0;
    double stderr_value = 0.0;
    double trainability = 0.0;
};

/// Trains `replicates` He-with-bias networks per width on the 1-D target and
/// reports the fraction with test RMSE below 1e-2 next to the analytic
/// trainability of the task's minimal active count. The radius entering the
/// born-dead probability is the training-data radius (default sqrt(3), the
/// sampling interval half-width).
///
/// Desk-scale defaults: 2e4 epochs at a constant learning rate of 5e-3,
/// applied uniformly across widths. The rate compensates the reduced epoch
/// budget; at 1e-3 the wide networks are still in their convergence tail
/// after 2e4 epochs and every width undershoots the success threshold.
inline std::vector<SuccessRateRow> run_success_rate(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& target = target_by_id(cfg.target);
    if (target.d_in != 1 || target.min_active <= 0)
        throw config_error("success-rate expects a 1-D target with a known minimal width (f1, f2)");
    const double r = cfg.radius > 0.0 ? cfg.radius : target.default_radius;

    OptimizerConfig opt;
    opt.method = OptMethod::Sgd;
    opt.learning_rate = cfg.learning_rate > 0.0 ? cfg.learning_rate : 5e-3;
    opt.batch_size = cfg.batch_size > 0 ? cfg.batch_size : 128;
    opt.max_epochs = cfg.max_epochs > 0 ? cfg.max_epochs : 20000;
    opt.stop_rmse = 1e-4; // well under the 1e-2 success threshold

    std::vector<SuccessRateRow> rows;
    for (size_t widx = 0; widx < cfg.widths.size(); ++widx) {
        const int n = cfg.widths[widx];
        long successes = 0;
        for (int rep = 0; rep < cfg.replicates; ++rep) {
            Rng rng = Rng::substream(cfg.seed, widx * 1000003ull + rep);
            Dataset train_set, test_set;
            train_set.radius = test_set.radius = r;
            for (int i = 0; i < cfg.train_points; ++i) {
                const double x = rng.uniform(-r, r);
                train_set.inputs.push_back({x});
                train_set.targets.push_back({target.f({x})});
            }
            for (int i = 0; i < cfg.test_points; ++i) {
                const double x = rng.uniform(-r, r);
                test_set.inputs.push_back({x});
                test_set.targets.push_back({target.f({x})});
            }
            const auto net =
                init_network(Architecture{1, n, 1},
                             {InitScheme::he_with_bias(), InitScheme::he_with_bias()},
                             rng.next_u64());
            OptimizerConfig run_opt = opt;
            run_opt.seed = rng.next_u64();
            const auto result = train(net, train_set, run_opt);
            if (rmse(result.params, test_set) < 1e-2) ++successes;
        }
        SuccessRateRow row;
        row.width = n;
        row.success_rate = static_cast<double>(successes) / cfg.replicates;
        row.stderr_value =
            std::sqrt(row.success_rate * (1.0 - row.success_rate) / cfg.replicates);
        row.trainability =
            shallow_trainability(n, target.min_active, 1, r, InitScheme::he_with_bias()).value;
        rows.push_back(row);
    }

    CsvTable table;
    table.header = {"width", "success_rate", "stderr", "trainability"};
    for (const auto& row : rows)
        table.add_row({static_cast<long>(row.width), row.success_rate, row.stderr_value,
                       row.trainability});
    detail::write_manifest(cfg);
    detail::save_table(table, cfg, "success_rate_" + cfg.target);
    return rows;
}

// ---------------------------------------------------------------------------
// dist-check: analytic vs empirical active-neuron distributions

struct DistCheckRow {
    int layer = 0;
    int count = 0;
    double analytic = -1.0; // -1: no analytic value for this layer
    double empirical = 0.0;
    double stderr_value = 0.0;
};

inline std::vector<DistCheckRow> run_dist_check(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.arch.size() < 3 || cfg.arch[0] != 1)
        throw config_error("dist-check expects an architecture prefix (1, n1, n2)");
    const int n1 = cfg.arch[1], n2 = cfg.arch[2];
    if (cfg.schemes.size() < 2) throw config_error("dist-check needs a scheme per hidden layer");
    const InitScheme s1 = parse_scheme(cfg.schemes[0]);
    const InitScheme s2 = parse_scheme(cfg.schemes[1]);
    const double r = cfg.radius > 0.0 ? cfg.radius : 1.0;

    const auto analytic1 = pi1(n1, 1, r, s1);
    const auto analytic2 = compose_dist(analytic1, {p2_matrix(n1, n2, r, s1, s2)});

    const Architecture arch{1, n1, n2, 1};
    const std::vector<InitScheme> schemes = {s1, s2, InitScheme::he()};
    const auto mc = mc_active_dist(arch, schemes, r, cfg.samples, cfg.seed);

    std::vector<DistCheckRow> rows;
    for (int layer = 1; layer <= 2; ++layer) {
        const auto& analytic = layer == 1 ? analytic1 : analytic2;
        const auto& emp = mc.layers[layer - 1];
        for (int k = 0; k < emp.size(); ++k) {
            DistCheckRow row;
            row.layer = layer;
            row.count = k;
            row.analytic = analytic.probs[k];
            row.empirical = emp.probs[k];
            row.stderr_value = mc.stderrs[layer - 1][k];
            rows.push_back(row);
        }
    }

    CsvTable table;
    table.header = {"layer", "count", "analytic", "empirical", "stderr"};
    for (const auto& row : rows)
        table.add_row({static_cast<long>(row.layer), static_cast<long>(row.count), row.analytic,
                       row.empirical, row.stderr_value});
    detail::write_manifest(cfg);
    detail::save_table(table, cfg, "dist_check");
    return rows;
}

// ---------------------------------------------------------------------------
// init-compare: He-no-bias vs He-with-bias vs data-dependent

struct InitCompareResult {
    std::vector<std::string> methods;
    // [method][epoch]
    std::vector<std::vector<double>> mean_rmse;
    std::vector<std::vector<double>> std_rmse;
    // [method][replicate]
    std::vector<std::vector<double>> final_rmse;
    std::vector<std::vector<int>> dead_counts; // layer-1 dead neurons after training
};

/// Trains the same seeded datasets under the three bias-initialization
/// methods. f3/f4: width 100, 25 uniform points on [-1,1]^2, momentum SGD.
/// sine-sum: width 500, 100 equidistant points on [-1,1], Adam.
inline InitCompareResult run_init_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& target = target_by_id(cfg.target);
    if (target.min_active != 0)
        throw config_error("init-compare expects f3, f4 or sine-sum");
    const bool sine = cfg.target == "sine-sum";
    const int width = cfg.widths.size() == 1 ? cfg.widths[0] : (sine ? 500 : 100);
    const int points = sine ? 100 : 25;
    const int d = target.d_in;

    OptimizerConfig opt;
    if (sine) {
        opt.method = OptMethod::Adam;
        opt.learning_rate = cfg.learning_rate > 0.0 ? cfg.learning_rate : 1e-3;
        opt.max_epochs = cfg.max_epochs > 0 ? cfg.max_epochs : 15000;
    } else {
        opt.method = OptMethod::SgdMomentum;
        opt.learning_rate = cfg.learning_rate > 0.0 ? cfg.learning_rate : 5e-3;
        opt.momentum = cfg.momentum >= 0.0 ? cfg.momentum : 0.9;
        opt.max_epochs = cfg.max_epochs > 0 ? cfg.max_epochs : 5000;
    }
    opt.batch_size = cfg.batch_size > 0 ? cfg.batch_size : points; // full batch

    InitCompareResult result;
    result.methods = {"he", "he-bias", "data-dependent"};
    result.mean_rmse.assign(3, std::vector<double>(opt.max_epochs, 0.0));
    result.std_rmse.assign(3, std::vector<double>(opt.max_epochs, 0.0));
    result.final_rmse.assign(3, {});
    result.dead_counts.assign(3, {});

    for (int rep = 0; rep < cfg.replicates; ++rep) {
        Rng rng = Rng::substream(cfg.seed, rep);
        Dataset data;
        data.radius = sine ? 1.0 : std::numbers::sqrt2;
        if (sine) {
            for (int i = 0; i < points; ++i) {
                const double x = -1.0 + 2.0 * i / (points - 1);
                data.inputs.push_back({x});
                data.targets.push_back({target.f({x})});
            }
        } else {
            for (int i = 0; i < points; ++i) {
                std::vector<double> x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                data.targets.push_back({target.f(x)});
                data.inputs.push_back(std::move(x));
            }
        }
        double data_radius = 0.0;
        for (const auto& x : data.inputs) {
            double norm2 = 0.0;
            for (double v : x) norm2 += v * v;
            data_radius = std::max(data_radius, std::sqrt(norm2));
        }

        const std::uint64_t init_seed = rng.next_u64();
        const std::uint64_t train_seed = rng.next_u64();
        for (int mi = 0; mi < 3; ++mi) {
            NetworkParams net;
            if (mi == 0) {
                net = init_network(Architecture{d, width, 1},
                                   {InitScheme::he(), InitScheme::he()}, init_seed);
            } else if (mi == 1) {
                net = init_network(Architecture{d, width, 1},
                                   {InitScheme::he_with_bias(), InitScheme::he_with_bias()},
                                   init_seed);
            } else {
                const auto ddcfg =
                    default_params(data.inputs, static_cast<double>(width) / points, d);
                net = init_shallow_datadep(data.inputs, width, 1, ddcfg, init_seed);
            }
            OptimizerConfig run_opt = opt;
            run_opt.seed = train_seed;
            const auto trained = train(net, data, run_opt);
            for (long e = 0; e < opt.max_epochs; ++e) {
                const double v = trained.rmse_history[e];
                result.mean_rmse[mi][e] += v;
                result.std_rmse[mi][e] += v * v;
            }
            result.final_rmse[mi].push_back(trained.rmse_history.back());
            const auto statuses = neuron_status(trained.params, data_radius);
            result.dead_counts[mi].push_back(count_dead(statuses, 1));
        }
    }
    for (int mi = 0; mi < 3; ++mi) {
        for (long e = 0; e < opt.max_epochs; ++e) {
            const double mean = result.mean_rmse[mi][e] / cfg.replicates;
            const double var =
                std::max(0.0, result.std_rmse[mi][e] / cfg.replicates - mean * mean);
            result.mean_rmse[mi][e] = mean;
            result.std_rmse[mi][e] = std::sqrt(var);
        }
    }

    CsvTable history;
    history.header = {"epoch", "method", "mean_rmse", "std_rmse"};
    for (int mi = 0; mi < 3; ++mi)
        for (long e = 0; e < opt.max_epochs; ++e)
            history.add_row({static_cast<long>(e + 1), result.methods[mi],
                             result.mean_rmse[mi][e], result.std_rmse[mi][e]});
    CsvTable summary;
    summary.header = {"method", "replicate", "final_rmse", "dead_neurons"};
    for (int mi = 0; mi < 3; ++mi)
        for (int rep = 0; rep < cfg.replicates; ++rep)
            summary.add_row({result.methods[mi], static_cast<long>(rep),
                             result.final_rmse[mi][rep],
                             static_cast<long>(result.dead_counts[mi][rep])});
    detail::write_manifest(cfg);
    detail::save_table(history, cfg, "init_compare_history_" + cfg.target);
    detail::save_table(summary, cfg, "init_compare_summary_" + cfg.target);
    return result;
}

// ---------------------------------------------------------------------------
// trainability-table: analytic values with optional MC cross-checks

struct TrainabilityTableRow {
    std::string kind;
    std::string params;
    double value = 0.0;
    double mc_value = -1.0; // -1: not requested
    double mc_stderr = 0.0;
};

inline std::vector<TrainabilityTableRow> run_trainability_table(const ExperimentConfig& cfg) {
    cfg.validate();
    const double r = cfg.radius > 0.0 ? cfg.radius : 1.0;
    const long mc_samples = cfg.samples;
    std::vector<TrainabilityTableRow> rows;

    auto add_shallow = [&](int n, int m) {
        TrainabilityTableRow row;
        row.kind = "shallow";
        row.params = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " d=1 r=" +
                     csv_format(r) + " scheme=he-bias";
        row.value = shallow_trainability(n, m, 1, r, InitScheme::he_with_bias()).value;
        if (mc_samples > 0) {
            const auto mc = mc_trainability(
                Architecture{1, n, 1}, {InitScheme::he_with_bias(), InitScheme::he_with_bias()},
                r, Requirement{{m}}, mc_samples, cfg.seed);
            row.mc_value = mc.value;
            row.mc_stderr = mc.stderr_value;
        }
        rows.push_back(row);
    };
    add_shallow(2, 2);
    for (int n : cfg.widths)
        if (n >= 2 && n != 2) add_shallow(n, 2);

    {
        TrainabilityTableRow row;
        row.kind = "suggested-width";
        row.params = "m=200 d=1 r=1/sqrt(3)";
        row.value = suggested_width(200, 1, 1.0 / std::sqrt(3.0), true);
        rows.push_back(row);
    }
    {
        TrainabilityTableRow row;
        row.kind = "zero-bias-upper";
        row.params = "n=2 L=3";
        row.value = zero_bias_upper_1d(2, 3).value;
        rows.push_back(row);
    }

    struct DeepSpec {
        Deep3Case which;
        const char* name;
        InitScheme s1, s2;
        int n1, n2, m1, m2;
    };
    const DeepSpec deep[] = {
        {Deep3Case::SphereNb_NormalNb, "1.1", InitScheme::unit_sphere(), InitScheme::he(), 2, 4, 1, 2},
        {Deep3Case::SphereNb_NormalWb, "1.2", InitScheme::unit_sphere(), InitScheme::he_with_bias(), 2, 4, 1, 2},
        {Deep3Case::SphereWb_NormalNb, "2.1", InitScheme::unit_sphere_with_bias(), InitScheme::he(), 1, 4, 1, 2},
        {Deep3Case::SphereWb_NormalWb, "2.2", InitScheme::unit_sphere_with_bias(), InitScheme::he_with_bias(), 1, 4, 1, 2},
    };
    for (const auto& spec : deep) {
        TrainabilityTableRow row;
        row.kind = std::string("deep3-case-") + spec.name;
        row.params = "n1=" + std::to_string(spec.n1) + " n2=" + std::to_string(spec.n2) +
                     " m1=" + std::to_string(spec.m1) + " m2=" + std::to_string(spec.m2) +
                     " r=" + csv_format(r);
        row.value = deep3_trainability(spec.which, spec.n1, spec.n2, spec.m1, spec.m2, r).value;
        if (mc_samples > 0) {
            const auto mc = mc_trainability(Architecture{1, spec.n1, spec.n2, 1},
                                            {spec.s1, spec.s2, InitScheme::he()}, r,
                                            Requirement{{spec.m1, spec.m2}}, mc_samples, cfg.seed);
            row.mc_value = mc.value;
            row.mc_stderr = mc.stderr_value;
        }
        rows.push_back(row);
    }

    CsvTable table;
    table.header = {"kind", "params", "value", "mc_value", "mc_stderr"};
    for (const auto& row : rows)
        table.add_row({row.kind, row.params, row.value, row.mc_value, row.mc_stderr});
    detail::write_manifest(cfg);
    detail::save_table(table, cfg, "trainability_table");
    return rows;
}

/// Dispatch by experiment id. sine-demo is init-compare pinned to the
/// sine-sum target.
inline void run_experiment(ExperimentConfig cfg) {
    cfg.validate();
    if (cfg.experiment == "success-rate") {
        run_success_rate(cfg);
    } else if (cfg.experiment == "dist-check") {
        run_dist_check(cfg);
    } else if (cfg.experiment == "init-compare") {
        run_init_compare(cfg);
    } else if (cfg.experiment == "sine-demo") {
        cfg.target = "sine-sum";
        if (cfg.replicates == 200) cfg.replicates = 1; // demo default
        run_init_compare(cfg);
    } else if (cfg.experiment == "trainability-table") {
        run_trainability_table(cfg);
    }
}

inline std::vector<std::string> experiment_ids() {
    return {"success-rate", "dist-check", "init-compare", "sine-demo", "trainability-table"};
}

// ---------------------------------------------------------------------------
// Dataset CSV round trip (columns x0..x{d-1}, y)

inline void save_dataset_csv(const Dataset& data, const std::string& path) {
    CsvTable table;
    const int d = static_cast<int>(data.inputs.front().size());
    for (int j = 0; j < d; ++j) table.header.push_back("x" + std::to_string(j));
    table.header.push_back("y");
    for (size_t i = 0; i < data.size(); ++i) {
        std::vector<CsvCell> row;
        for (double v : data.inputs[i]) row.push_back(v);
        row.push_back(data.targets[i][0]);
        table.add_row(std::move(row));
    }
    table.save(path);
}

inline Dataset load_dataset_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open dataset: " + path);
    const auto rows = parse_csv(f);
    if (rows.size() < 2) throw config_error("dataset file has no rows: " + path);
    const int cols = static_cast<int>(rows.front().size());
    if (cols < 2 || rows.front().back() != "y")
        throw config_error("dataset header must be x0,...,y");
    Dataset data;
    double radius = 0.0;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != cols)
            throw config_error("ragged dataset row in " + path);
        std::vector<double> x;
        for (int j = 0; j + 1 < cols; ++j) x.push_back(std::stod(rows[i][j]));
        double norm2 = 0.0;
        for (double v : x) norm2 += v * v;
        radius = std::max(radius, std::sqrt(norm2));
        data.inputs.push_back(std::move(x));
        data.targets.push_back({std::stod(rows[i].back())});
    }
    data.radius = radius;
    return data;
}

} // namespace relutrain
