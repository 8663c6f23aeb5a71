#pragma once

// CSV and JSON outputs. Numbers are printed with "%.10g" so that repeated runs
// produce byte-identical files.

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "townnet/experiment.hpp"
#include "townnet/generator.hpp"

namespace townnet {

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// `layer,u,v,beta_exponent`, one row per canonical edge, layers in order.
inline void write_edge_list(std::ostream& os, const MultiLayerNetwork& net) {
    os << "layer,u,v,beta_exponent\n";
    for (auto kind : net.layers.kinds()) {
        const int exponent = net.beta_exponents[layer_index(kind)];
        for (const auto& e : net.layer_edges(kind))
            os << 'L' << layer_number(kind) << ',' << e.u << ',' << e.v << ',' << exponent << '\n';
    }
}

inline nlohmann::json network_metadata(const MultiLayerNetwork& net) {
    nlohmann::json meta;
    meta["n"] = net.n;
    meta["seed"] = net.master_seed;
    meta["params_fingerprint"] = net.params_fingerprint;
    meta["layers"] = net.layers.to_string();
    auto& counts = meta["edge_counts"];
    for (auto kind : net.layers.kinds()) counts["L" + std::to_string(layer_number(kind))] = net.layer_edges(kind).size();
    auto& containers = meta["container_counts"];
    for (auto kind : kAllLayers)
        if (!net.layer_containers(kind).empty())
            containers["L" + std::to_string(layer_number(kind))] = net.layer_containers(kind).size();
    std::size_t teachers = 0;
    for (const auto& t : net.class_teachers) teachers += t.size();
    meta["teachers"] = teachers;
    meta["warnings"] = net.warnings;
    return meta;
}

inline void write_attribute_rows(std::ostream& os, const std::vector<AttributeRow>& rows, bool with_realizations = false) {
    os << "layers,seed,n,lc_fraction,diameter,aspl,clustering,exact,sources";
    if (with_realizations) os << ",realizations";
    os << '\n';
    for (const auto& row : rows) {
        const auto& r = row.report;
        os << row.layers.label() << ',' << row.seed << ',' << row.n << ',' << format_number(r.largest_component_fraction)
           << ',' << format_number(r.diameter) << ',' << format_number(r.avg_shortest_path) << ','
           << format_number(r.avg_clustering) << ',' << (r.exact_distances ? "true" : "false") << ','
           << r.bfs_sources_used;
        if (with_realizations) os << ',' << row.realizations;
        os << '\n';
    }
}

inline void write_scenario_table(std::ostream& os, const ScenarioTable& table) {
    os << "scenario,beta,median_coverage,median_time,realizations,master_seed\n";
    for (const auto& r : table.rows)
        os << r.scenario << ',' << format_number(r.beta) << ',' << format_number(r.median_coverage) << ','
           << format_number(r.median_time) << ',' << r.realizations << ',' << r.master_seed << '\n';
}

inline void write_runs(std::ostream& os, const std::vector<RunRecord>& runs) {
    os << "scenario,beta,realization,seed_vertex,coverage,time\n";
    for (const auto& r : runs)
        os << r.scenario << ',' << format_number(r.beta) << ',' << r.realization << ',' << r.seed_vertex << ','
           << format_number(r.coverage) << ',' << format_number(r.time) << '\n';
}

/// Baseline and perturbed tables stacked, first column naming the perturbation.
inline void write_sensitivity(std::ostream& os, const SensitivityResult& result) {
    os << "perturbation,scenario,beta,median_coverage,median_time,realizations,master_seed\n";
    auto emit = [&os](const std::string& label, const ScenarioTable& table) {
        for (const auto& r : table.rows)
            os << label << ',' << r.scenario << ',' << format_number(r.beta) << ',' << format_number(r.median_coverage)
               << ',' << format_number(r.median_time) << ',' << r.realizations << ',' << r.master_seed << '\n';
    };
    emit("baseline", result.baseline);
    for (const auto& [pert, table] : result.perturbed) emit(perturbation_label(pert), table);
}

}  // namespace townnet
