// Copyright 2026 The qcrisk developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcrisk/errors.hpp"
#include "qcrisk/qae.hpp"
#include "qcrisk/resources.hpp"
#include "qcrisk/risk_engine.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSizeGuard = 3;

// Reports round every floating-point value to 12 significant digits so a
// fixed (config, seed) pair reproduces byte-identical files.
double round_sig(double value) {
    if (value == 0.0 || !std::isfinite(value)) {
        return value;
    }
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return std::strtod(buffer, nullptr);
}

std::string format_sig(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (salt + 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ModelConfig {
    std::string portfolio_path;
    std::string model = "gci";
    std::size_t n_latent = 2;
    double z_max = 3.0;
    std::string mode = "linear";
};

struct QaeConfig {
    std::size_t m = 4;
    std::optional<std::size_t> shots;
    std::uint64_t seed = 0;
};

void add_model_flags(CLI::App *cmd, ModelConfig &config) {
    cmd->add_option("--portfolio", config.portfolio_path, "portfolio JSON file")->required();
    cmd->add_option("--model", config.model, "uncertainty model")
        ->check(CLI::IsMember({"gci", "independent"}))
        ->capture_default_str();
    cmd->add_option("--n-z", config.n_latent, "latent register width (gci)")->capture_default_str();
    cmd->add_option("--z-max", config.z_max, "latent truncation in standard deviations")->capture_default_str();
    cmd->add_option("--mode", config.mode, "angle loading mode")
        ->check(CLI::IsMember({"linear", "exact"}))
        ->capture_default_str();
}

qcrisk::Portfolio load_portfolio(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw qcrisk::ConfigError("cannot open portfolio file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw qcrisk::ConfigError("portfolio file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object() || !doc.contains("assets") || !doc["assets"].is_array() || doc["assets"].empty()) {
        throw qcrisk::ConfigError("portfolio file must hold a non-empty \"assets\" array");
    }
    std::vector<qcrisk::Asset> assets;
    std::size_t index = 0;
    for (const auto &entry : doc["assets"]) {
        ++index;
        const std::string where = "asset " + std::to_string(index) + ": ";
        if (!entry.is_object()) {
            throw qcrisk::ConfigError(where + "must be an object with lgd, pd0, rho");
        }
        qcrisk::Asset asset;
        try {
            asset.lgd = entry.at("lgd").get<std::int64_t>();
            asset.pd0 = entry.at("pd0").get<double>();
            asset.rho = entry.value("rho", 0.0);
        } catch (const nlohmann::json::exception &e) {
            throw qcrisk::ConfigError(where + e.what());
        }
        assets.push_back(asset);
    }
    try {
        return qcrisk::Portfolio(std::move(assets));
    } catch (const std::invalid_argument &e) {
        throw qcrisk::ConfigError(e.what());
    }
}

std::optional<qcrisk::LatentGrid> make_grid(const ModelConfig &config) {
    if (config.model == "independent") {
        return std::nullopt;
    }
    if (config.n_latent < 1) {
        throw qcrisk::ConfigError("--n-z must be at least 1 for the gci model");
    }
    if (!(config.z_max > 0.0)) {
        throw qcrisk::ConfigError("--z-max must be positive");
    }
    return qcrisk::build_latent_grid(config.n_latent, config.z_max);
}

qcrisk::LoadingMode parse_mode(const std::string &mode) {
    return mode == "exact" ? qcrisk::LoadingMode::Exact : qcrisk::LoadingMode::Linear;
}

ordered_json config_json(const ModelConfig &model, const qcrisk::Portfolio &portfolio) {
    ordered_json assets = ordered_json::array();
    for (const auto &asset : portfolio.assets()) {
        assets.push_back({{"lgd", asset.lgd}, {"pd0", round_sig(asset.pd0)}, {"rho", round_sig(asset.rho)}});
    }
    ordered_json config;
    config["portfolio_file"] = model.portfolio_path;
    config["assets"] = assets;
    config["model"] = model.model;
    if (model.model == "gci") {
        config["n_z"] = model.n_latent;
        config["z_max"] = round_sig(model.z_max);
        config["mode"] = model.mode;
    }
    config["n_sum"] = portfolio.sum_register_width();
    return config;
}

void append_qae_config(ordered_json &config, const QaeConfig &qae, double alpha) {
    config["alpha"] = round_sig(alpha);
    config["m"] = qae.m;
    if (qae.shots) {
        config["shots"] = *qae.shots;
    }
    config["seed"] = qae.seed;
}

void emit_report(const ordered_json &report, const std::string &output_path) {
    const std::string text = report.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        throw qcrisk::ConfigError("cannot write report file: " + output_path);
    }
    out << text;
}

ordered_json trace_json(const qcrisk::RiskReport &report) {
    ordered_json trace = ordered_json::array();
    for (const auto &probe : report.trace) {
        trace.push_back({{"threshold", probe.threshold},
                         {"estimate", round_sig(probe.estimate)},
                         {"bound", round_sig(probe.bound)}});
    }
    return trace;
}

int run_analyze(const ModelConfig &model, const QaeConfig &qae, double alpha, const std::string &output_path,
                const std::string &csv_path) {
    const qcrisk::Portfolio portfolio = load_portfolio(model.portfolio_path);
    const auto grid = make_grid(model);
    const qcrisk::LoadingMode mode = parse_mode(model.mode);

    qcrisk::QaeRunOptions options{qae.m, mode, qae.shots, qae.seed};
    const qcrisk::RiskReport qae_report = qcrisk::var_bisection_qae(portfolio, grid, alpha, options);
    const qcrisk::RiskReport exact_report = qcrisk::ecr_exact(portfolio, grid, alpha);
    const auto exact_cdf = qcrisk::exact_loss_distribution(portfolio, grid).cumulative();

    ordered_json table = ordered_json::array();
    std::ostringstream csv;
    csv << "x,exact_cdf,qae_estimate,bound\n";
    for (std::size_t x = 0; x < exact_cdf.size(); ++x) {
        const auto point = qcrisk::estimate_cdf_point(portfolio, grid, static_cast<std::int64_t>(x), qae.m, mode,
                                                      qae.shots, mix_seed(qae.seed, x + 1));
        table.push_back({{"x", x},
                         {"exact_cdf", round_sig(exact_cdf[x])},
                         {"qae_estimate", round_sig(point.estimate)},
                         {"bound", round_sig(point.error_bound)}});
        csv << x << ',' << format_sig(exact_cdf[x]) << ',' << format_sig(point.estimate) << ','
            << format_sig(point.error_bound) << '\n';
    }

    ordered_json report;
    report["command"] = "analyze";
    report["config"] = config_json(model, portfolio);
    append_qae_config(report["config"], qae, alpha);
    report["results"] = {{"expected_loss", round_sig(qae_report.expected_loss)},
                         {"var", qae_report.var},
                         {"ecr", round_sig(qae_report.ecr)},
                         {"method", qae_report.method},
                         {"monotone_warning", qae_report.monotone_warning},
                         {"bisection_trace", trace_json(qae_report)},
                         {"exact", {{"var", exact_report.var}, {"ecr", round_sig(exact_report.ecr)}}},
                         {"cdf_table", table}};
    emit_report(report, output_path);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            throw qcrisk::ConfigError("cannot write CSV file: " + csv_path);
        }
        out << csv.str();
    }
    return kExitOk;
}

int run_cdf(const ModelConfig &model, const QaeConfig &qae, std::int64_t threshold, const std::string &output_path) {
    const qcrisk::Portfolio portfolio = load_portfolio(model.portfolio_path);
    const auto grid = make_grid(model);
    const std::int64_t max_loss = (std::int64_t{1} << portfolio.sum_register_width()) - 1;
    if (threshold < 0 || threshold > max_loss) {
        throw qcrisk::ConfigError("--x must lie in [0, " + std::to_string(max_loss) + "] for this portfolio");
    }

    const auto point =
        qcrisk::estimate_cdf_point(portfolio, grid, threshold, qae.m, parse_mode(model.mode), qae.shots, qae.seed);
    const auto exact_cdf = qcrisk::exact_loss_distribution(portfolio, grid).cumulative();

    ordered_json outcome = ordered_json::array();
    for (double p : point.qae.outcome_probs) {
        outcome.push_back(round_sig(p));
    }
    ordered_json report;
    report["command"] = "cdf";
    report["config"] = config_json(model, portfolio);
    append_qae_config(report["config"], qae, 0.0);
    report["config"].erase("alpha");
    report["config"]["x"] = threshold;
    report["results"] = {{"estimate", round_sig(point.estimate)},
                         {"bound", round_sig(point.error_bound)},
                         {"exact_cdf", round_sig(exact_cdf[static_cast<std::size_t>(threshold)])},
                         {"total_qubits", point.qae.total_qubits},
                         {"outcome_probs", outcome}};
    emit_report(report, output_path);
    return kExitOk;
}

int run_mc(const ModelConfig &model, double alpha, std::vector<std::uint64_t> sweep, std::uint64_t samples,
           std::uint64_t seed, std::size_t partitions, const std::string &output_path) {
    const qcrisk::Portfolio portfolio = load_portfolio(model.portfolio_path);
    const auto grid = make_grid(model);
    if (sweep.empty()) {
        sweep.push_back(samples);
    }

    ordered_json runs = ordered_json::array();
    for (std::uint64_t m_samples : sweep) {
        const auto result = qcrisk::simulate_monte_carlo(portfolio, grid, m_samples, alpha, seed, partitions);
        runs.push_back({{"samples", m_samples},
                        {"expected_loss", round_sig(result.report.expected_loss)},
                        {"var", result.report.var},
                        {"ecr", round_sig(result.report.ecr)},
                        {"p_zero_loss", round_sig(result.distribution.probs.front())}});
    }

    ordered_json report;
    report["command"] = "mc";
    report["config"] = config_json(model, portfolio);
    report["config"]["alpha"] = round_sig(alpha);
    report["config"]["seed"] = seed;
    report["config"]["partitions"] = partitions;
    report["config"]["samples"] = sweep;
    report["results"] = {{"runs", runs}};
    try {
        const qcrisk::RiskReport exact = qcrisk::ecr_exact(portfolio, grid, alpha);
        report["results"]["exact"] = {{"var", exact.var},
                                      {"ecr", round_sig(exact.ecr)},
                                      {"expected_loss", round_sig(exact.expected_loss)}};
    } catch (const qcrisk::SizeLimitError &) {
        report["results"]["exact"] = nullptr; // beyond the enumeration budget
    }
    emit_report(report, output_path);
    return kExitOk;
}

int run_resources(const qcrisk::ResourceParams &params, const std::string &output_path) {
    const qcrisk::ResourceReport result = qcrisk::estimate_resources(params);

    ordered_json excluded = ordered_json::array();
    for (const auto &item : result.excluded) {
        excluded.push_back({{"item", item.item}, {"reason", item.reason}});
    }
    ordered_json report;
    report["command"] = "resources";
    report["config"] = {{"assets", params.n_assets},
                        {"n_z", params.n_latent},
                        {"n_s", params.n_sum},
                        {"m", params.m_eval},
                        {"epsilon", round_sig(params.epsilon)},
                        {"gate_time_s", round_sig(params.gate_time_s)},
                        {"qft_free", params.qft_free_halving},
                        {"z_copies", result.z_copy_count}};
    report["results"] = {{"depth_loader", result.depth_loader},
                         {"depth_sum", result.depth_sum},
                         {"depth_comparator", result.depth_comparator},
                         {"depth_oracle", result.depth_oracle},
                         {"depth_oracle_rounded", result.depth_oracle_rounded},
                         {"oracle_calls", result.oracle_calls},
                         {"total_depth", result.total_depth},
                         {"total_depth_rounded", result.total_depth_rounded},
                         {"runtime_s", round_sig(result.runtime_s)},
                         {"runtime_hours", round_sig(result.runtime_s / 3600.0)},
                         {"runtime_rounded_s", round_sig(result.runtime_rounded_s)},
                         {"ancillas",
                          {{"z_copies", result.z_copy_count},
                           {"z_copy_ancillas", result.z_copy_ancillas},
                           {"z_copy_cnot_depth", result.z_copy_cnot_depth}}},
                         {"excluded_costs", excluded},
                         {"notes", result.notes}};
    emit_report(report, output_path);

    std::cerr << "oracle depth " << result.depth_oracle << " (loader " << result.depth_loader << ", sum "
              << result.depth_sum << ", comparator " << result.depth_comparator << ")\n"
              << "total depth " << result.total_depth << ", runtime " << format_sig(result.runtime_s) << " s ("
              << format_sig(result.runtime_s / 60.0) << " min)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"QAE-based credit-risk analysis engine"};
    app.require_subcommand(1);

    ModelConfig model;
    QaeConfig qae;
    double alpha = 0.95;
    std::string output_path;
    std::string csv_path;
    std::int64_t threshold = 0;
    std::uint64_t mc_samples = 100000;
    std::vector<std::uint64_t> mc_sweep;
    std::size_t mc_partitions = 1;
    std::uint64_t mc_seed = 0;
    qcrisk::ResourceParams resource_params;
    double log_epsilon = 10.0;

    auto *analyze = app.add_subcommand("analyze", "VaR and ECR through the QAE bisection");
    add_model_flags(analyze, model);
    analyze->add_option("--alpha", alpha, "confidence level")->capture_default_str();
    analyze->add_option("--m", qae.m, "evaluation qubits")->capture_default_str();
    analyze->add_option("--shots", qae.shots, "sample the outcome distribution instead of exact readout");
    analyze->add_option("--seed", qae.seed, "random seed for shot sampling")->capture_default_str();
    analyze->add_option("--output", output_path, "report path (stdout when omitted)");
    analyze->add_option("--csv", csv_path, "CDF table side file");

    auto *cdf = app.add_subcommand("cdf", "single-point loss-CDF estimate");
    add_model_flags(cdf, model);
    cdf->add_option("--x", threshold, "loss threshold")->required();
    cdf->add_option("--m", qae.m, "evaluation qubits")->capture_default_str();
    cdf->add_option("--shots", qae.shots, "sample the outcome distribution instead of exact readout");
    cdf->add_option("--seed", qae.seed, "random seed for shot sampling")->capture_default_str();
    cdf->add_option("--output", output_path, "report path (stdout when omitted)");

    auto *mc = app.add_subcommand("mc", "classical Monte Carlo baseline");
    add_model_flags(mc, model);
    mc->add_option("--alpha", alpha, "confidence level")->capture_default_str();
    mc->add_option("--samples", mc_samples, "sample count")->capture_default_str();
    mc->add_option("--sweep", mc_sweep, "comma-separated sample counts")->delimiter(',');
    mc->add_option("--seed", mc_seed, "random seed")->capture_default_str();
    mc->add_option("--partitions", mc_partitions, "independent sub-streams")->capture_default_str();
    mc->add_option("--output", output_path, "report path (stdout when omitted)");

    auto *resources = app.add_subcommand("resources", "fault-tolerant depth and runtime estimates");
    resources->add_option("--assets", resource_params.n_assets, "asset count K")->required();
    resources->add_option("--n-z", resource_params.n_latent, "latent register width")->capture_default_str();
    resources->add_option("--n-s", resource_params.n_sum, "sum register width")->capture_default_str();
    resources->add_option("--m", resource_params.m_eval, "evaluation qubits")->capture_default_str();
    resources->add_option("--log2-inv-epsilon", log_epsilon, "rotation synthesis bits, epsilon = 2^-value")
        ->capture_default_str();
    resources->add_option("--gate-time", resource_params.gate_time_s, "seconds per T/Toffoli layer")
        ->capture_default_str();
    resources->add_flag("--qft-free", resource_params.qft_free_halving, "halve the depth for QFT-free estimation");
    std::uint64_t z_copies = 0;
    resources->add_option("--w", z_copies, "entangled latent-register copies (default: K)");
    resources->add_option("--output", output_path, "report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(model, qae, alpha, output_path, csv_path);
        }
        if (cdf->parsed()) {
            return run_cdf(model, qae, threshold, output_path);
        }
        if (mc->parsed()) {
            return run_mc(model, alpha, mc_sweep, mc_samples, mc_seed, mc_partitions, output_path);
        }
        if (resources->parsed()) {
            resource_params.epsilon = std::pow(2.0, -log_epsilon);
            if (z_copies > 0) {
                resource_params.z_copies = z_copies;
            }
            return run_resources(resource_params, output_path);
        }
    } catch (const qcrisk::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qcrisk::SizeLimitError &e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return kExitSizeGuard;
    } catch (const std::invalid_argument &e) {
        // Library-level input validation (confidence levels, sample counts).
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
