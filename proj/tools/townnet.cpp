// townnet: command line front end for the town network generator, network
// attribute tables, single SIR runs, scenario sweeps and sensitivity sweeps.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "townnet/townnet.hpp"

namespace fs = std::filesystem;
using namespace townnet;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 1;
    std::string out = ".";
    std::size_t threads = default_thread_count();
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ModelParams load_config(const std::string& path) {
    if (path.empty()) return default_params();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream text;
    text << in.rdbuf();
    return load_params(text.str());
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_betas(const std::string& csv) {
    std::vector<double> out;
    for (const auto& item : split_csv(csv)) {
        std::size_t used = 0;
        const double b = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad beta '" + item + "'");
        out.push_back(b);
    }
    if (out.empty()) throw std::invalid_argument("no beta values given");
    return out;
}

std::vector<Scenario> parse_scenarios(const std::string& csv) {
    std::vector<Scenario> out;
    for (const auto& name : split_csv(csv)) out.push_back(make_scenario(name));
    if (out.empty()) throw std::invalid_argument("no scenarios given");
    return out;
}

std::optional<std::size_t> parse_sources(const std::string& text) {
    if (text == "all") return std::nullopt;
    std::size_t used = 0;
    const auto value = std::stoull(text, &used);
    if (used != text.size() || value == 0) throw std::invalid_argument("--bfs-sources takes a positive count or 'all'");
    return static_cast<std::size_t>(value);
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const auto path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_meta(const CommonArgs& args, const ModelParams& p, const std::string& command, nlohmann::json extra,
                const std::string& started) {
    nlohmann::json meta = std::move(extra);
    meta["command"] = command;
    meta["version"] = kVersion;
    meta["seed"] = args.seed;
    meta["params"] = to_json(p);
    meta["params_fingerprint"] = params_fingerprint(p, args.seed);
    meta["started_utc"] = started;
    meta["finished_utc"] = utc_now();
    open_output(args.out, "meta.json") << meta.dump(2) << '\n';
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON parameter overrides");
    cmd->add_option("--seed", args.seed, "Master seed");
    cmd->add_option("--out", args.out, "Output directory");
    cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seven-layer town contact network generator and SIR experiment harness"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs args;
    std::string layers_csv;
    std::string betas_csv;
    std::string scenarios_csv;
    std::string sources_text = "1000";
    std::string perturbations_csv;
    std::size_t realizations = 300;
    bool regenerate = false;

    auto* gen = app.add_subcommand("generate", "Generate one network and write its edge list");
    add_common(gen, args);
    gen->add_option("--layers", layers_csv, "Active layers, e.g. L1,L2,L6 (default: all)");

    auto* met = app.add_subcommand("metrics", "Network attribute table");
    add_common(met, args);
    met->add_option("--layers", layers_csv, "Single layer set to measure (default: cumulative prefixes L1..L7)");
    met->add_option("--realizations", realizations, "Networks to average over")->check(CLI::PositiveNumber);
    met->add_option("--bfs-sources", sources_text, "BFS sources per network, or 'all' for exact distances");

    auto* sir = app.add_subcommand("sir", "SIR runs on one layer set or scenario");
    add_common(sir, args);
    sir->add_option("--layers", layers_csv, "Active layers (alternative to --scenarios)");
    sir->add_option("--scenarios", scenarios_csv, "One scenario name, e.g. Base+F");
    sir->add_option("--betas", betas_csv, "Transmission base beta")->required();
    sir->add_option("--realizations", realizations, "Independent runs")->check(CLI::PositiveNumber);

    auto* exp = app.add_subcommand("experiment", "Scenario x beta sweep with median coverage and time");
    add_common(exp, args);
    exp->add_option("--realizations", realizations, "Realizations per cell")->check(CLI::PositiveNumber);
    exp->add_option("--betas", betas_csv, "Beta grid (default: 0.025..0.175 plus 0.13, 0.17)");
    exp->add_option("--scenarios", scenarios_csv, "Scenario list (default: all nine)");
    exp->add_flag("--regenerate", regenerate, "Fresh network for every (scenario, beta, realization)");

    auto* sen = app.add_subcommand("sensitivity", "Baseline sweep plus +/-50% parameter perturbations");
    add_common(sen, args);
    sen->add_option("--realizations", realizations, "Realizations per cell")->check(CLI::PositiveNumber);
    sen->add_option("--betas", betas_csv, "Beta grid");
    sen->add_option("--scenarios", scenarios_csv, "Scenario list");
    sen->add_option("--perturbations", perturbations_csv,
                    "target:factor list, targets mu_L6_L7 sigma_L2_to_L7 sigma_L2_to_L5 sigma_L6_L7 sigma0, "
                    "factors 0.5 or 1.5 (default: mu_L6_L7, sigma_L2_to_L7, sigma0 at both factors)");
    sen->add_flag("--regenerate", regenerate, "Fresh network for every (scenario, beta, realization)");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto started = utc_now();
        const auto params = load_config(args.config);

        if (*gen) {
            const auto layers = layers_csv.empty() ? LayerSet::all() : parse_layer_set(layers_csv);
            const auto net = generate(args.seed, params, layers);
            auto edges = open_output(args.out, "edges.csv");
            write_edge_list(edges, net);
            open_output(args.out, "network.json") << network_metadata(net).dump(2) << '\n';
            for (const auto& w : net.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "generated N=" << net.n << " with " << net.edge_count() << " edges in layers "
                      << layers.to_string() << '\n';
            write_meta(args, params, "generate", {{"layers", layers.to_string()}}, started);
        } else if (*met) {
            AttributeOptions opts;
            opts.bfs_sources = parse_sources(sources_text);
            opts.threads = args.threads;
            if (!layers_csv.empty()) opts.layer_sets = {parse_layer_set(layers_csv)};
            const auto table = run_attribute_table(params, realizations, args.seed, opts);
            auto rows = open_output(args.out, "attributes.csv");
            write_attribute_rows(rows, table.per_realization);
            auto means = open_output(args.out, "attributes_mean.csv");
            write_attribute_rows(means, table.mean, true);
            write_attribute_rows(std::cout, table.mean, true);
            write_meta(args, params, "metrics", {{"realizations", realizations}, {"bfs_sources", sources_text}},
                       started);
        } else if (*sir) {
            Scenario scenario;
            if (!scenarios_csv.empty()) {
                auto list = parse_scenarios(scenarios_csv);
                if (list.size() != 1) throw std::invalid_argument("sir takes exactly one scenario");
                scenario = list.front();
            } else {
                scenario.layers = layers_csv.empty() ? LayerSet::all() : parse_layer_set(layers_csv);
                scenario.name = scenario.layers.label();
            }
            const auto betas = parse_betas(betas_csv);
            SweepOptions opts;
            opts.threads = args.threads;
            const auto result = run_scenario_sweep(params, {scenario}, betas, realizations, args.seed, opts);
            auto runs = open_output(args.out, "runs.csv");
            write_runs(runs, result.runs);
            write_runs(std::cout, result.runs);
            write_meta(args, params, "sir", {{"realizations", realizations}, {"layers", scenario.layers.to_string()}},
                       started);
        } else if (*exp || *sen) {
            const auto betas = betas_csv.empty() ? default_betas() : parse_betas(betas_csv);
            const auto scenarios = scenarios_csv.empty() ? default_scenarios() : parse_scenarios(scenarios_csv);
            SweepOptions opts;
            opts.threads = args.threads;
            opts.pair_networks = !regenerate;
            nlohmann::json extra = {{"realizations", realizations}, {"betas", betas}, {"paired_networks", !regenerate}};
            for (const auto& s : scenarios) extra["scenarios"].push_back(s.name);
            if (*exp) {
                const auto result = run_scenario_sweep(params, scenarios, betas, realizations, args.seed, opts);
                auto table = open_output(args.out, "scenario_table.csv");
                write_scenario_table(table, result.table);
                auto runs = open_output(args.out, "runs.csv");
                write_runs(runs, result.runs);
                write_scenario_table(std::cout, result.table);
                write_meta(args, params, "experiment", extra, started);
            } else {
                std::vector<Perturbation> perts;
                for (const auto& spec : split_csv(perturbations_csv)) perts.push_back(parse_perturbation(spec));
                if (perts.empty()) perts = standard_perturbations();
                const auto result =
                    run_sensitivity(params, perts, scenarios, betas, realizations, args.seed, opts);
                auto baseline = open_output(args.out, "scenario_table.csv");
                write_scenario_table(baseline, result.baseline);
                auto table = open_output(args.out, "sensitivity_table.csv");
                write_sensitivity(table, result);
                write_sensitivity(std::cout, result);
                for (const auto& p : perts) extra["perturbations"].push_back(perturbation_label(p));
                write_meta(args, params, "sensitivity", extra, started);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
