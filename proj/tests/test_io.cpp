#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "townnet/io.hpp"
#include "townnet/layers.hpp"

using namespace townnet;
namespace fs = std::filesystem;

namespace {

ModelParams tiny_params() {
    auto p = default_params();
    p.n_houses = 300;
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("townnet_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TOWNNET_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Layers, ParseAndFormat) {
    EXPECT_EQ(parse_layer("L3"), LayerKind::WhiteCollar);
    EXPECT_EQ(parse_layer("7"), LayerKind::Random);
    EXPECT_EQ(parse_layer("friendship"), LayerKind::Friendship);
    EXPECT_THROW(parse_layer("L8"), std::invalid_argument);
    EXPECT_EQ(parse_layer_set("L1,L2,L6").to_string(), "L1,L2,L6");
    EXPECT_EQ(LayerSet::prefix(4).label(), "[L1-L4]");
    EXPECT_EQ(LayerSet::prefix(1).label(), "[L1]");
    EXPECT_EQ(parse_layer_set("L1,L6").label(), "[L1,L6]");
}

TEST(EdgeList, HeaderAndRows) {
    const auto net = generate(3, tiny_params(), LayerSet{LayerKind::Household, LayerKind::Random});
    std::ostringstream os;
    write_edge_list(os, net);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "layer,u,v,beta_exponent");
    std::size_t rows = 0, random_rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("L7,", 0) == 0) {
            ++random_rows;
            EXPECT_EQ(line.back(), '3');
        } else {
            EXPECT_EQ(line.rfind("L1,", 0), 0u);
            EXPECT_EQ(line.back(), '0');
        }
    }
    EXPECT_EQ(rows, net.edge_count());
    EXPECT_EQ(random_rows, net.layer_edges(LayerKind::Random).size());
}

TEST(EdgeList, MetadataSidecar) {
    const auto net = generate(3, tiny_params(), LayerSet::all());
    const auto meta = network_metadata(net);
    EXPECT_EQ(meta["n"], net.n);
    EXPECT_EQ(meta["seed"], 3);
    EXPECT_EQ(meta["params_fingerprint"], params_fingerprint(tiny_params(), 3));
    EXPECT_EQ(meta["edge_counts"]["L4"], net.layer_edges(LayerKind::School).size());
}

TEST(Csv, ScenarioTableFormat) {
    ScenarioTable t;
    t.rows.push_back({"Base+F", 0.13, 0.25, 12.5, 3, 9});
    std::ostringstream os;
    write_scenario_table(os, t);
    EXPECT_EQ(os.str(), "scenario,beta,median_coverage,median_time,realizations,master_seed\nBase+F,0.13,0.25,12.5,3,9\n");
}

TEST(Csv, AttributeRowsFormat) {
    AttributeRow row;
    row.layers = LayerSet::prefix(2);
    row.seed = 5;
    row.n = 100;
    row.report = {0.5, 12, 4.25, 0.125, false, 10};
    std::ostringstream os;
    write_attribute_rows(os, {row});
    EXPECT_EQ(os.str(), "layers,seed,n,lc_fraction,diameter,aspl,clustering,exact,sources\n[L1-L2],5,100,0.5,12,4.25,0.125,false,10\n");
}

TEST(Cli, GenerateWritesEdgeListAndMetadata) {
    const auto dir = scratch_dir("gen");
    std::ofstream(dir / "cfg.json") << R"({"n_houses": 200})";
    ASSERT_EQ(run_cli("generate --config " + (dir / "cfg.json").string() + " --seed 4 --layers L1,L2,L5 --out " +
                      dir.string()),
              0);
    const auto edges = slurp(dir / "edges.csv");
    EXPECT_EQ(edges.rfind("layer,u,v,beta_exponent\n", 0), 0u);
    const auto meta = nlohmann::json::parse(slurp(dir / "network.json"));
    EXPECT_EQ(meta["layers"], "L1,L2,L5");
    const auto run = nlohmann::json::parse(slurp(dir / "meta.json"));
    EXPECT_EQ(run["seed"], 4);
    EXPECT_EQ(run["params"]["n_houses"], 200);
    fs::remove_all(dir);
}

TEST(Cli, ExperimentIsByteDeterministic) {
    const auto a = scratch_dir("exp_a"), b = scratch_dir("exp_b");
    std::ofstream(a / "cfg.json") << R"({"n_houses": 300})";
    const std::string common = "experiment --config " + (a / "cfg.json").string() +
                               " --seed 11 --realizations 3 --betas 0.05,0.2 --scenarios Base,Base+F,All";
    ASSERT_EQ(run_cli(common + " --threads 1 --out " + a.string()), 0);
    ASSERT_EQ(run_cli(common + " --threads 3 --out " + b.string()), 0);
    EXPECT_EQ(slurp(a / "scenario_table.csv"), slurp(b / "scenario_table.csv"));
    EXPECT_EQ(slurp(a / "runs.csv"), slurp(b / "runs.csv"));
    EXPECT_TRUE(fs::exists(a / "meta.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, MetricsSirAndSensitivityRun) {
    const auto dir = scratch_dir("misc");
    std::ofstream(dir / "cfg.json") << R"({"n_houses": 150})";
    const std::string cfg = " --config " + (dir / "cfg.json").string() + " --out " + dir.string();
    EXPECT_EQ(run_cli("metrics --realizations 2 --bfs-sources all" + cfg), 0);
    EXPECT_TRUE(fs::exists(dir / "attributes.csv"));
    EXPECT_EQ(run_cli("sir --scenarios Base+S --betas 0.1 --realizations 2" + cfg), 0);
    EXPECT_TRUE(fs::exists(dir / "runs.csv"));
    EXPECT_EQ(run_cli("sensitivity --realizations 2 --betas 0.1 --scenarios Base --perturbations sigma0:1.5" + cfg), 0);
    EXPECT_TRUE(fs::exists(dir / "sensitivity_table.csv"));
    fs::remove_all(dir);
}

TEST(Cli, ErrorsExitNonZero) {
    const auto dir = scratch_dir("err");
    std::ofstream(dir / "bad.json") << R"({"gamma_ratioo": 0.2})";
    EXPECT_NE(run_cli("generate --config " + (dir / "bad.json").string() + " --out " + dir.string()), 0);
    EXPECT_NE(run_cli("generate --config " + (dir / "missing.json").string()), 0);
    EXPECT_NE(run_cli("experiment --scenarios Base+Q --out " + dir.string()), 0);
    EXPECT_NE(run_cli("metrics --bfs-sources none --out " + dir.string()), 0);
    EXPECT_NE(run_cli("nosuchcommand"), 0);
    fs::remove_all(dir);
}
