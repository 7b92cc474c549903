// relutrain — trainability analysis of randomly initialized ReLU networks.
//
// Subcommands: bdp, trainability, dist, interpolate, experiment.
// Exit codes: 0 success, 2 configuration error, 3 unsupported analytic case.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relutrain/bdp.hpp"
#include "relutrain/csv.hpp"
#include "relutrain/datadep.hpp"
#include "relutrain/dist.hpp"
#include "relutrain/experiments.hpp"
#include "relutrain/interp.hpp"
#include "relutrain/netcore.hpp"
#include "relutrain/trainability.hpp"

using namespace relutrain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnsupported = 3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_table(const CsvTable& table, const std::string& format) {
    if (format == "csv") {
        std::cout << table.to_string();
        return;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (size_t i = 0; i < table.header.size(); ++i) obj[table.header[i]] = csv_format(row[i]);
        rows.push_back(obj);
    }
    std::cout << rows.dump(2) << '\n';
}

int cmd_bdp(int d, double r, int m, double delta, const std::string& format) {
    const auto res = bdp_full(d, r);
    CsvTable table;
    table.header = {"quantity", "value"};
    table.add_row({std::string("exact"), res.exact});
    table.add_row({std::string("lower"), res.lower});
    table.add_row({std::string("upper"), res.upper});
    table.add_row({std::string("alpha_r"), res.alpha_r});
    if (m > 0) {
        table.add_row({std::string("suggested_width_with_bias"),
                       static_cast<long>(suggested_width(m, d, r, true))});
        table.add_row({std::string("suggested_width_no_bias"),
                       static_cast<long>(suggested_width(m, d, r, false))});
        if (delta > 0.0)
            table.add_row({std::string("overparam_condition"),
                           std::string(overparam_condition(m, d, r, delta) ? "true" : "false")});
    }
    print_table(table, format);
    return kExitOk;
}

std::vector<InitScheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<InitScheme> schemes;
    for (const auto& n : names) schemes.push_back(parse_scheme(n));
    return schemes;
}

Deep3Case parse_deep3_case(const std::string& name) {
    if (name == "1.1") return Deep3Case::SphereNb_NormalNb;
    if (name == "1.2") return Deep3Case::SphereNb_NormalWb;
    if (name == "2.1") return Deep3Case::SphereWb_NormalNb;
    if (name == "2.2") return Deep3Case::SphereWb_NormalWb;
    throw config_error("unknown deep3 case (want 1.1, 1.2, 2.1 or 2.2): " + name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trainability analysis of randomly initialized ReLU networks"};
    app.require_subcommand(1);

    std::string format = "csv";
    app.add_option("--format", format, "output format: csv or json")->capture_default_str();

    // bdp ------------------------------------------------------------------
    auto* bdp_cmd = app.add_subcommand("bdp", "born-dead probability of one neuron on B_r(0)");
    int bdp_d = 1;
    double bdp_r = 1.0, bdp_delta = 0.0;
    int bdp_m = 0;
    bdp_cmd->add_option("--d", bdp_d, "input dimension")->required();
    bdp_cmd->add_option("--r", bdp_r, "data radius")->required();
    bdp_cmd->add_option("--m", bdp_m, "required active width (adds width suggestion rows)");
    bdp_cmd->add_option("--delta", bdp_delta, "failure budget for the over-parameterization check");

    // trainability -----------------------------------------------------------
    auto* tr_cmd = app.add_subcommand("trainability", "analytic and Monte Carlo trainability");
    std::string tr_mode = "shallow";
    tr_cmd->add_option("--mode", tr_mode, "shallow | deep3 | upper1d | mc")->capture_default_str();
    int tr_n = 2, tr_m = 2, tr_d = 1, tr_L = 3;
    double tr_r = 1.0;
    std::string tr_scheme = "he-bias", tr_case = "1.1";
    int tr_n1 = 2, tr_n2 = 4, tr_m1 = 1, tr_m2 = 2;
    std::vector<int> tr_arch;
    std::vector<std::string> tr_schemes;
    std::vector<int> tr_req;
    long tr_samples = 100000;
    std::uint64_t tr_seed = 1;
    tr_cmd->add_option("--n", tr_n, "width");
    tr_cmd->add_option("--m", tr_m, "required active neurons");
    tr_cmd->add_option("--d", tr_d, "input dimension");
    tr_cmd->add_option("--r", tr_r, "data radius");
    tr_cmd->add_option("--L", tr_L, "depth parameter of the zero-bias bound");
    tr_cmd->add_option("--scheme", tr_scheme, "layer-1 scheme for shallow mode");
    tr_cmd->add_option("--case", tr_case, "deep3 case: 1.1, 1.2, 2.1, 2.2");
    tr_cmd->add_option("--n1", tr_n1);
    tr_cmd->add_option("--n2", tr_n2);
    tr_cmd->add_option("--m1", tr_m1);
    tr_cmd->add_option("--m2", tr_m2);
    tr_cmd->add_option("--arch", tr_arch, "mc mode: architecture widths")->delimiter(',');
    tr_cmd->add_option("--schemes", tr_schemes, "mc mode: per-layer schemes")->delimiter(',');
    tr_cmd->add_option("--req", tr_req, "mc mode: required active counts per hidden layer")
        ->delimiter(',');
    tr_cmd->add_option("--samples", tr_samples);
    tr_cmd->add_option("--seed", tr_seed);

    // dist -------------------------------------------------------------------
    auto* dist_cmd = app.add_subcommand("dist", "active-neuron count distributions");
    std::vector<int> dist_arch = {1, 6, 4};
    std::vector<std::string> dist_schemes = {"sphere-bias", "sphere-bias"};
    double dist_r = 1.0;
    long dist_samples = 0;
    std::uint64_t dist_seed = 1;
    std::string dist_out;
    dist_cmd->add_option("--arch", dist_arch, "widths (1, n1, n2)")->delimiter(',');
    dist_cmd->add_option("--schemes", dist_schemes, "schemes of the two hidden layers")
        ->delimiter(',');
    dist_cmd->add_option("--r", dist_r, "data radius");
    dist_cmd->add_option("--samples", dist_samples, "add empirical columns from this many samples");
    dist_cmd->add_option("--seed", dist_seed);
    dist_cmd->add_option("--out", dist_out, "write CSV here instead of stdout");

    // interpolate -------------------------------------------------------------
    auto* interp_cmd = app.add_subcommand("interpolate", "constructive shallow interpolation");
    std::string interp_data, interp_model_out, interp_witness_out;
    int interp_witness_m = 0;
    std::uint64_t interp_seed = 1;
    interp_cmd->add_option("--data", interp_data, "dataset CSV (columns x0..., y)");
    interp_cmd->add_option("--out-model", interp_model_out, "write the network JSON here");
    interp_cmd->add_option("--witness", interp_witness_m,
                           "generate an m-point minimal-width witness dataset instead");
    interp_cmd->add_option("--out", interp_witness_out, "witness CSV output path");
    interp_cmd->add_option("--seed", interp_seed);

    // experiment ---------------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "desk-scale experiment runner");
    auto* exp_list = exp_cmd->add_subcommand("list", "list experiment ids");
    auto* exp_run = exp_cmd->add_subcommand("run", "run one experiment");
    exp_cmd->require_subcommand(1);
    std::string exp_id, exp_config;
    std::string exp_out;
    std::uint64_t exp_seed = 0;
    long exp_samples = 0;
    int exp_replicates = 0;
    exp_run->add_option("id", exp_id, "experiment id")->required();
    exp_run->add_option("--config", exp_config, "JSON config (or a previous manifest)");
    exp_run->add_option("--seed", exp_seed);
    exp_run->add_option("--out", exp_out, "output directory");
    exp_run->add_option("--samples", exp_samples);
    exp_run->add_option("--replicates", exp_replicates);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bdp_cmd->parsed()) return cmd_bdp(bdp_d, bdp_r, bdp_m, bdp_delta, format);

        if (tr_cmd->parsed()) {
            CsvTable table;
            table.header = {"kind", "value", "stderr"};
            if (tr_mode == "shallow") {
                const auto est = shallow_trainability(tr_n, tr_m, tr_d, tr_r, parse_scheme(tr_scheme));
                table.add_row({std::string(to_string(est.kind)), est.value, est.stderr_value});
            } else if (tr_mode == "deep3") {
                const auto est =
                    deep3_trainability(parse_deep3_case(tr_case), tr_n1, tr_n2, tr_m1, tr_m2, tr_r);
                table.add_row({std::string(to_string(est.kind)), est.value, est.stderr_value});
            } else if (tr_mode == "upper1d") {
                const auto est = zero_bias_upper_1d(tr_n, tr_L);
                table.add_row({std::string(to_string(est.kind)), est.value, est.stderr_value});
            } else if (tr_mode == "mc") {
                if (tr_arch.empty() || tr_schemes.empty() || tr_req.empty())
                    throw config_error("mc mode needs --arch, --schemes and --req");
                const auto est = mc_trainability(Architecture(tr_arch), parse_schemes(tr_schemes),
                                                 tr_r, Requirement{tr_req}, tr_samples, tr_seed);
                table.add_row({std::string(to_string(est.kind)), est.value, est.stderr_value});
            } else {
                throw config_error("unknown trainability mode: " + tr_mode);
            }
            print_table(table, format);
            return kExitOk;
        }

        if (dist_cmd->parsed()) {
            CsvTable table;
            if (dist_samples > 0) {
                ExperimentConfig cfg;
                cfg.experiment = "dist-check";
                cfg.arch = dist_arch;
                cfg.schemes = dist_schemes;
                cfg.radius = dist_r;
                cfg.seed = dist_seed;
                cfg.samples = dist_samples;
                table.header = {"layer", "count", "analytic", "empirical", "stderr"};
                for (const auto& row : run_dist_check(cfg))
                    table.add_row({static_cast<long>(row.layer), static_cast<long>(row.count),
                                   row.analytic, row.empirical, row.stderr_value});
            } else {
                if (dist_arch.size() < 3 || dist_arch[0] != 1)
                    throw config_error("dist expects --arch 1,n1,n2");
                const auto s1 = parse_scheme(dist_schemes.at(0));
                const auto s2 = parse_scheme(dist_schemes.at(1));
                const auto layer1 = pi1(dist_arch[1], 1, dist_r, s1);
                const auto layer2 = compose_dist(
                    layer1, {p2_matrix(dist_arch[1], dist_arch[2], dist_r, s1, s2)});
                table.header = {"layer", "count", "probability"};
                for (int k = 0; k < layer1.size(); ++k)
                    table.add_row({1l, static_cast<long>(k), layer1.probs[k]});
                for (int k = 0; k < layer2.size(); ++k)
                    table.add_row({2l, static_cast<long>(k), layer2.probs[k]});
            }
            if (dist_out.empty()) {
                print_table(table, format);
            } else {
                table.save(dist_out);
            }
            return kExitOk;
        }

        if (interp_cmd->parsed()) {
            if (interp_witness_m > 0) {
                if (interp_witness_out.empty())
                    throw config_error("--witness needs --out for the dataset CSV");
                save_dataset_csv(witness_data(interp_witness_m, interp_seed), interp_witness_out);
                std::cout << "wrote witness dataset (" << interp_witness_m << " points) to "
                          << interp_witness_out << '\n';
                return kExitOk;
            }
            if (interp_data.empty()) throw config_error("interpolate needs --data or --witness");
            const auto data = load_dataset_csv(interp_data);
            const auto net = build_interpolant(data, interp_seed);
            double worst = 0.0;
            for (size_t i = 0; i < data.size(); ++i) {
                const auto y = forward(net, data.inputs[i]);
                worst = std::max(worst, std::abs(y[0] - data.targets[i][0]));
            }
            if (!interp_model_out.empty()) {
                std::ofstream f(interp_model_out, std::ios::binary);
                f << to_json(net) << '\n';
            }
            std::cout << "width " << net.arch.widths[1] << " interpolant, max residual "
                      << fmt(worst) << '\n';
            return kExitOk;
        }

        if (exp_cmd->parsed()) {
            if (exp_list->parsed()) {
                for (const auto& id : experiment_ids()) std::cout << id << '\n';
                return kExitOk;
            }
            ExperimentConfig cfg;
            if (!exp_config.empty()) {
                std::ifstream f(exp_config);
                if (!f) throw config_error("cannot open config: " + exp_config);
                nlohmann::json j;
                f >> j;
                cfg = ExperimentConfig::from_json(j);
            }
            cfg.experiment = exp_id;
            if (exp_seed != 0) cfg.seed = exp_seed;
            if (!exp_out.empty()) cfg.out_dir = exp_out;
            if (exp_samples > 0) cfg.samples = exp_samples;
            if (exp_replicates > 0) cfg.replicates = exp_replicates;
            if (cfg.out_dir.empty()) cfg.out_dir = "out";
            cfg.format = format;
            run_experiment(cfg);
            std::cout << "wrote results to " << cfg.out_dir << '\n';
            return kExitOk;
        }
    } catch (const unsupported_case_error& e) {
        std::cerr << "unsupported case: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
