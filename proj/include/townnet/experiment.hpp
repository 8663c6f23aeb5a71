#pragma once

// Lockdown scenarios, beta sweeps, network attribute tables and parameter
// sensitivity runs.
//
// Seeds: realization r of a run with master seed M uses the network seed
// derive_seed(M, kNetworkTag, r); its SIR stream is
// RngStream(derive_seed(M, kSirTag, layer mask, beta bits), r). Nothing depends
// on thread scheduling or on the order of the scenario/beta lists.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "townnet/generator.hpp"
#include "townnet/metrics.hpp"
#include "townnet/parallel.hpp"
#include "townnet/params.hpp"
#include "townnet/sir.hpp"

namespace townnet {

inline constexpr std::uint64_t kNetworkTag = 0x6e6574;  // "net"
inline constexpr std::uint64_t kSirTag = 0x736972;      // "sir"
inline constexpr std::uint64_t kBfsTag = 0x626673;      // "bfs"

inline constexpr LayerSet kBaseLayers{LayerKind::Household, LayerKind::BlueCollar, LayerKind::Service};

struct Scenario {
    std::string name;
    LayerSet layers;
};

/// "Base" = {L1, L2, L6}; "Base+" followed by any of W (L3), S (L4), F (L5);
/// "All" = every layer.
inline LayerSet scenario_layers(std::string_view name) {
    if (name == "All") return LayerSet::all();
    if (name == "Base") return kBaseLayers;
    constexpr std::string_view prefix = "Base+";
    if (name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix) {
        LayerSet set = kBaseLayers;
        for (char letter : name.substr(prefix.size())) {
            LayerKind kind{};
            switch (letter) {
                case 'W': kind = LayerKind::WhiteCollar; break;
                case 'S': kind = LayerKind::School; break;
                case 'F': kind = LayerKind::Friendship; break;
                default: throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
            }
            if (set.contains(kind)) throw std::invalid_argument("repeated layer in scenario '" + std::string(name) + "'");
            set.insert(kind);
        }
        return set;
    }
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

inline Scenario make_scenario(std::string_view name) { return {std::string(name), scenario_layers(name)}; }

inline std::vector<Scenario> default_scenarios() {
    std::vector<Scenario> out;
    for (auto name : {"Base", "Base+W", "Base+S", "Base+F", "Base+WS", "Base+WF", "Base+SF", "Base+WSF", "All"})
        out.push_back(make_scenario(name));
    return out;
}

/// Seven-point grid plus the two reported Covid-19 transmission rates.
inline std::vector<double> default_betas() { return {0.025, 0.05, 0.075, 0.1, 0.125, 0.13, 0.15, 0.17, 0.175}; }

/// Average of the two middle values for even counts.
inline double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

inline std::uint64_t network_seed(std::uint64_t master_seed, std::size_t realization) {
    return derive_seed(master_seed, kNetworkTag, realization);
}

inline std::uint64_t sir_stream_seed(std::uint64_t master_seed, LayerSet layers, double beta) {
    return derive_seed(master_seed, kSirTag, layers.mask(), std::bit_cast<std::uint64_t>(beta));
}

struct RunRecord {
    std::string scenario;
    double beta = 0.0;
    std::size_t realization = 0;
    Vertex seed_vertex = 0;
    double coverage = 0.0;
    double time = 0.0;
};

struct ScenarioRow {
    std::string scenario;
    double beta = 0.0;
    double median_coverage = 0.0;
    double median_time = 0.0;
    std::size_t realizations = 0;
    std::uint64_t master_seed = 0;
};

struct ScenarioTable {
    std::vector<ScenarioRow> rows;

    const ScenarioRow& at(std::string_view scenario, double beta) const {
        for (const auto& r : rows)
            if (r.scenario == scenario && r.beta == beta) return r;
        throw std::out_of_range("no row for " + std::string(scenario) + " at beta " + std::to_string(beta));
    }
};

struct SweepOptions {
    std::size_t threads = 1;
    /// Reuse realization r's network for every scenario and beta. When false a
    /// fresh network is generated for each (scenario, beta, r).
    bool pair_networks = true;
    double gamma = 1.0;
};

struct SweepResult {
    ScenarioTable table;
    std::vector<RunRecord> runs;  // scenario-major, then beta, then realization
};

namespace detail {

/// SIR runs of one scenario on one network, for every beta.
inline void run_scenario_cell(const MultiLayerNetwork& net, const Scenario& scenario, std::span<const double> betas,
                              std::span<const std::size_t> beta_slots, std::size_t realization,
                              std::uint64_t master_seed, double gamma, std::vector<RunRecord>& runs) {
    const auto merged = merge_layers(net, scenario.layers);
    const auto base = UnionGraph::from_exponents(merged.n, merged.pairs, merged.exponents, 1.0);
    const auto comps = connected_components(base);
    const auto cores = k_core(base);
    for (std::size_t b = 0; b < betas.size(); ++b) {
        const auto g = base.with_beta(betas[b]);
        SirConfig cfg;
        cfg.gamma = gamma;
        cfg.seed_vertex = select_seed(g, comps, cores);
        RngStream rng(sir_stream_seed(master_seed, scenario.layers, betas[b]), realization);
        const auto outcome = simulate_sir(g, cfg, rng);
        auto& rec = runs[beta_slots[b]];
        rec.scenario = scenario.name;
        rec.beta = betas[b];
        rec.realization = realization;
        rec.seed_vertex = cfg.seed_vertex;
        rec.coverage = outcome.coverage;
        rec.time = outcome.time;
    }
}

}  // namespace detail

inline SweepResult run_scenario_sweep(const ModelParams& p, const std::vector<Scenario>& scenarios,
                                      const std::vector<double>& betas, std::size_t realizations,
                                      std::uint64_t master_seed, const SweepOptions& options = {}) {
    if (realizations < 1) throw std::invalid_argument("realizations must be at least 1");
    if (scenarios.empty() || betas.empty()) throw std::invalid_argument("empty scenario or beta list");
    for (double b : betas)
        if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1], got " + std::to_string(b));
    if (auto errors = validate(p); !errors.empty()) throw ConfigError(std::move(errors));

    const std::size_t S = scenarios.size(), B = betas.size(), R = realizations;
    auto slot = [&](std::size_t s, std::size_t b, std::size_t r) { return (s * B + b) * R + r; };
    SweepResult result;
    result.runs.resize(S * B * R);

    if (options.pair_networks) {
        LayerSet needed;
        for (const auto& sc : scenarios) needed = needed | sc.layers;
        parallel_for(R, options.threads, [&](std::size_t r) {
            const auto net = generate(network_seed(master_seed, r), p, needed);
            for (std::size_t s = 0; s < S; ++s) {
                std::vector<std::size_t> slots(B);
                for (std::size_t b = 0; b < B; ++b) slots[b] = slot(s, b, r);
                detail::run_scenario_cell(net, scenarios[s], betas, slots, r, master_seed, options.gamma, result.runs);
            }
        });
    } else {
        parallel_for(S * B * R, options.threads, [&](std::size_t task) {
            const std::size_t r = task % R, b = (task / R) % B, s = task / (R * B);
            const auto seed = derive_seed(master_seed, kNetworkTag, r, scenarios[s].layers.mask(),
                                          std::bit_cast<std::uint64_t>(betas[b]));
            const auto net = generate(seed, p, scenarios[s].layers);
            const std::size_t one_slot[] = {slot(s, b, r)};
            detail::run_scenario_cell(net, scenarios[s], std::span(&betas[b], 1), one_slot, r, master_seed,
                                      options.gamma, result.runs);
        });
    }

    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t b = 0; b < B; ++b) {
            std::vector<double> coverage(R), time(R);
            for (std::size_t r = 0; r < R; ++r) {
                coverage[r] = result.runs[slot(s, b, r)].coverage;
                time[r] = result.runs[slot(s, b, r)].time;
            }
            result.table.rows.push_back(
                {scenarios[s].name, betas[b], median(coverage), median(time), R, master_seed});
        }
    }
    return result;
}

struct AttributeRow {
    LayerSet layers;
    std::uint64_t seed = 0;  // network seed, or master seed for averaged rows
    std::size_t n = 0;       // vertex count, or mean vertex count for averaged rows
    std::size_t realizations = 1;
    AttributeReport report;
};

struct AttributeTable {
    std::vector<AttributeRow> per_realization;  // layer-set-major
    std::vector<AttributeRow> mean;             // one per layer set
};

struct AttributeOptions {
    std::optional<std::size_t> bfs_sources = 1000;  // nullopt = exact
    std::size_t threads = 1;
    /// Layer sets to measure; empty means the cumulative prefixes [L1] .. [L1-L7].
    std::vector<LayerSet> layer_sets;
};

inline std::vector<LayerSet> cumulative_prefixes() {
    std::vector<LayerSet> out;
    for (int k = 1; k <= static_cast<int>(kLayerCount); ++k) out.push_back(LayerSet::prefix(k));
    return out;
}

/// Network attributes per layer set, averaged over realizations. Every layer
/// set of realization r is cut from the same generated network.
inline AttributeTable run_attribute_table(const ModelParams& p, std::size_t realizations, std::uint64_t master_seed,
                                          const AttributeOptions& options = {}) {
    if (realizations < 1) throw std::invalid_argument("realizations must be at least 1");
    const auto sets = options.layer_sets.empty() ? cumulative_prefixes() : options.layer_sets;
    LayerSet needed;
    for (auto s : sets) {
        if (!s.contains(LayerKind::Household)) throw std::invalid_argument("every layer set needs the household layer");
        needed = needed | s;
    }
    const std::size_t P = sets.size();
    AttributeTable table;
    table.per_realization.resize(P * realizations);

    parallel_for(realizations, options.threads, [&](std::size_t r) {
        const auto seed = network_seed(master_seed, r);
        const auto net = generate(seed, p, needed);
        for (std::size_t k = 0; k < P; ++k) {
            const auto g = union_graph(net, sets[k], 1.0);
            RngStream rng(derive_seed(master_seed, kBfsTag, sets[k].mask()), r);
            auto& row = table.per_realization[k * realizations + r];
            row.layers = sets[k];
            row.seed = seed;
            row.n = net.n;
            row.report = attribute_report(g, options.bfs_sources, rng);
        }
    });

    for (std::size_t k = 0; k < P; ++k) {
        AttributeRow mean;
        mean.layers = sets[k];
        mean.seed = master_seed;
        mean.realizations = realizations;
        double n_sum = 0.0;
        std::size_t sources = 0;
        bool exact = true;
        for (std::size_t r = 0; r < realizations; ++r) {
            const auto& row = table.per_realization[k * realizations + r];
            n_sum += static_cast<double>(row.n);
            mean.report.largest_component_fraction += row.report.largest_component_fraction;
            mean.report.diameter += row.report.diameter;
            mean.report.avg_shortest_path += row.report.avg_shortest_path;
            mean.report.avg_clustering += row.report.avg_clustering;
            exact = exact && row.report.exact_distances;
            sources += row.report.bfs_sources_used;
        }
        const double R = static_cast<double>(realizations);
        mean.n = static_cast<std::size_t>(std::llround(n_sum / R));
        mean.report.largest_component_fraction /= R;
        mean.report.diameter /= R;
        mean.report.avg_shortest_path /= R;
        mean.report.avg_clustering /= R;
        mean.report.exact_distances = exact;
        mean.report.bfs_sources_used = sources / realizations;
        table.mean.push_back(mean);
    }
    return table;
}

enum class PerturbTarget {
    MuL6L7,       // mu of service and random layers
    SigmaL2ToL7,  // sigma of layers 2-7
    SigmaL2ToL5,
    SigmaL6L7,
    Sigma0,       // displacement std
};

struct Perturbation {
    PerturbTarget target = PerturbTarget::Sigma0;
    double factor = 1.0;
};

constexpr std::string_view target_name(PerturbTarget t) {
    switch (t) {
        case PerturbTarget::MuL6L7: return "mu_L6_L7";
        case PerturbTarget::SigmaL2ToL7: return "sigma_L2_to_L7";
        case PerturbTarget::SigmaL2ToL5: return "sigma_L2_to_L5";
        case PerturbTarget::SigmaL6L7: return "sigma_L6_L7";
        case PerturbTarget::Sigma0: return "sigma0";
    }
    return "?";
}

inline std::string perturbation_label(const Perturbation& pert) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", pert.factor);
    return std::string(target_name(pert.target)) + "*" + buf;
}

/// Parses "sigma0:1.5" style specs; factors other than 0.5 and 1.5 are rejected.
inline Perturbation parse_perturbation(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("perturbation must look like target:factor");
    const auto name = spec.substr(0, colon);
    const std::string factor_text(spec.substr(colon + 1));
    Perturbation pert;
    bool found = false;
    for (auto t : {PerturbTarget::MuL6L7, PerturbTarget::SigmaL2ToL7, PerturbTarget::SigmaL2ToL5,
                   PerturbTarget::SigmaL6L7, PerturbTarget::Sigma0}) {
        if (target_name(t) == name) {
            pert.target = t;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("unknown perturbation target '" + std::string(name) + "'");
    if (factor_text == "0.5") pert.factor = 0.5;
    else if (factor_text == "1.5") pert.factor = 1.5;
    else throw std::invalid_argument("perturbation factor must be 0.5 or 1.5");
    return pert;
}

/// Increase and decrease by 50% of mu(L6, L7), sigma(L2-L7) and sigma0.
inline std::vector<Perturbation> standard_perturbations() {
    std::vector<Perturbation> out;
    for (auto t : {PerturbTarget::MuL6L7, PerturbTarget::SigmaL2ToL7, PerturbTarget::Sigma0})
        for (double f : {0.5, 1.5}) out.push_back({t, f});
    return out;
}

inline ModelParams apply_perturbation(ModelParams p, const Perturbation& pert) {
    if (!(pert.factor > 0.0)) throw std::invalid_argument("perturbation factor must be positive");
    auto scale_sigma = [&](std::initializer_list<LayerKind> kinds) {
        for (auto k : kinds) p.layer(k).sigma *= pert.factor;
    };
    switch (pert.target) {
        case PerturbTarget::MuL6L7:
            p.layer(LayerKind::Service).mu *= pert.factor;
            p.layer(LayerKind::Random).mu *= pert.factor;
            break;
        case PerturbTarget::SigmaL2ToL7:
            scale_sigma({LayerKind::BlueCollar, LayerKind::WhiteCollar, LayerKind::School, LayerKind::Friendship,
                         LayerKind::Service, LayerKind::Random});
            break;
        case PerturbTarget::SigmaL2ToL5:
            scale_sigma({LayerKind::BlueCollar, LayerKind::WhiteCollar, LayerKind::School, LayerKind::Friendship});
            break;
        case PerturbTarget::SigmaL6L7: scale_sigma({LayerKind::Service, LayerKind::Random}); break;
        case PerturbTarget::Sigma0: p.sigma0 *= pert.factor; break;
    }
    if (auto errors = validate(p); !errors.empty()) throw ConfigError(std::move(errors));
    return p;
}

struct SensitivityResult {
    ScenarioTable baseline;
    std::vector<std::pair<Perturbation, ScenarioTable>> perturbed;
};

/// Baseline sweep plus one sweep per perturbation, all with the same master
/// seed so realization r is comparable across tables.
inline SensitivityResult run_sensitivity(const ModelParams& p, const std::vector<Perturbation>& perturbations,
                                         const std::vector<Scenario>& scenarios, const std::vector<double>& betas,
                                         std::size_t realizations, std::uint64_t master_seed,
                                         const SweepOptions& options = {}) {
    SensitivityResult out;
    out.baseline = run_scenario_sweep(p, scenarios, betas, realizations, master_seed, options).table;
    for (const auto& pert : perturbations) {
        const auto perturbed = apply_perturbation(p, pert);
        out.perturbed.emplace_back(pert,
                                   run_scenario_sweep(perturbed, scenarios, betas, realizations, master_seed, options).table);
    }
    return out;
}

}  // namespace townnet
