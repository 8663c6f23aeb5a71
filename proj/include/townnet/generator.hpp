#pragma once

// Seven-layer town network generator.
//
// Vertices sit on a ring 0..N-1. Containers (houses, workplaces, classes) own
// contiguous ring intervals whose lengths are proportional to their capacity;
// an agent joins the container covering its displaced location. Star layers
// (friendship, service, random) connect an agent to the agents found at
// independently displaced locations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "townnet/graph.hpp"
#include "townnet/layers.hpp"
#include "townnet/params.hpp"
#include "townnet/sampling.hpp"

namespace townnet {

enum class RoleKind : std::uint8_t { None = 0, Blue, White, Student };

struct Role {
    RoleKind kind = RoleKind::None;
    bool is_service_worker = false;
    bool is_teacher = false;

    bool operator==(const Role&) const = default;
};

struct Container {
    LayerKind layer = LayerKind::Household;
    std::size_t index = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    std::int64_t nominal_capacity = 0;
    std::vector<Vertex> members;  // ascending
};

struct MultiLayerNetwork {
    std::size_t n = 0;
    std::uint64_t master_seed = 0;
    std::string params_fingerprint;
    LayerSet layers;  // layers whose edges were generated
    std::array<int, kLayerCount> beta_exponents{};
    std::vector<Role> roles;
    /// Containers per layer; only container layers are populated. L2/L3 are
    /// also populated when only L4 is active, because teachers come from them.
    std::array<std::vector<Container>, kLayerCount> containers;
    /// Canonical sorted edge list per layer.
    std::array<std::vector<Edge>, kLayerCount> edges;
    /// Teachers of each L4 container, same order as containers[School].
    std::vector<std::vector<Vertex>> class_teachers;
    std::vector<std::string> warnings;

    const std::vector<Edge>& layer_edges(LayerKind kind) const { return edges[layer_index(kind)]; }
    const std::vector<Container>& layer_containers(LayerKind kind) const { return containers[layer_index(kind)]; }

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& e : edges) total += e.size();
        return total;
    }
};

/// B_0 = 0, B_k = N * (c_1 + ... + c_k) / sum(c); the last bound is exactly n.
inline std::vector<double> compute_boundaries(std::span<const std::int64_t> capacities, std::int64_t n) {
    if (capacities.empty()) throw std::invalid_argument("compute_boundaries: no capacities");
    if (n < 1) throw std::invalid_argument("compute_boundaries: ring size must be positive");
    std::int64_t total = 0;
    for (auto c : capacities) {
        if (c < 1) throw std::invalid_argument("compute_boundaries: capacities must be positive");
        total += c;
    }
    std::vector<double> bounds(capacities.size() + 1);
    std::int64_t cumulative = 0;
    for (std::size_t k = 0; k < capacities.size(); ++k) {
        cumulative += capacities[k];
        bounds[k + 1] = static_cast<double>(cumulative) * static_cast<double>(n) / static_cast<double>(total);
    }
    bounds.back() = static_cast<double>(n);
    return bounds;
}

/// The k with bounds[k] <= x < bounds[k+1].
inline std::size_t locate_container(std::span<const double> bounds, double x) {
    if (bounds.size() < 2 || !(x >= bounds.front() && x < bounds.back()))
        throw std::out_of_range("locate_container: position " + std::to_string(x) + " outside the ring");
    auto it = std::upper_bound(bounds.begin(), bounds.end(), x);
    return static_cast<std::size_t>(it - bounds.begin()) - 1;
}

namespace detail {

inline void append_clique(std::span<const Vertex> members, std::vector<Edge>& out) {
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) out.push_back(make_edge(members[a], members[b]));
}

inline void sort_unique(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

/// Stream index of each build stage within one network.
enum class Stage : std::uint64_t { Households = 0, Roles = 1, LayerBase = 2 };

inline std::uint64_t layer_stage(LayerKind kind) {
    return static_cast<std::uint64_t>(Stage::LayerBase) + layer_index(kind);
}

constexpr RoleKind layer_role(LayerKind kind) {
    switch (kind) {
        case LayerKind::BlueCollar: return RoleKind::Blue;
        case LayerKind::WhiteCollar: return RoleKind::White;
        case LayerKind::School: return RoleKind::Student;
        default: return RoleKind::None;
    }
}

inline double ring_distance(double a, double b, double n) {
    const double d = std::abs(a - b);
    return std::min(d, n - d);
}

}  // namespace detail

struct Households {
    std::size_t n = 0;
    std::vector<Container> containers;
    std::vector<Edge> edges;
};

/// Draws N_H household sizes (skew-normal, rounded, at least 1) and lays the
/// houses out consecutively on the ring; each house is a clique.
inline Households build_households(RngStream& rng, const ModelParams& p) {
    Households out;
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(p.n_houses));
    for (auto& s : sizes) {
        const double x = std::round(sample_skew_normal(rng, p.household.alpha, p.household.xi, p.household.omega));
        s = x < 1.0 ? 1 : static_cast<std::int64_t>(x);
    }
    const std::int64_t n = std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
    if (n > static_cast<std::int64_t>(UINT32_MAX)) throw std::length_error("network too large for 32-bit vertex ids");
    out.n = static_cast<std::size_t>(n);

    out.containers.reserve(sizes.size());
    Vertex next = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        Container c;
        c.layer = LayerKind::Household;
        c.index = k;
        c.lower_bound = next;
        c.upper_bound = static_cast<double>(next) + static_cast<double>(sizes[k]);
        c.nominal_capacity = sizes[k];
        c.members.resize(static_cast<std::size_t>(sizes[k]));
        std::iota(c.members.begin(), c.members.end(), next);
        next += static_cast<Vertex>(sizes[k]);
        detail::append_clique(c.members, out.edges);
        out.containers.push_back(std::move(c));
    }
    return out;
}

/// One categorical draw per vertex over (blue, white, student, none), then
/// round(gamma_C * N) service workers sampled without replacement from blue.
inline std::vector<Role> assign_roles(RngStream& rng, std::size_t n, const ModelParams& p) {
    const double blue = p.gamma(LayerKind::BlueCollar);
    const double white = blue + p.gamma(LayerKind::WhiteCollar);
    const double student = white + p.gamma(LayerKind::School);

    std::vector<Role> roles(n);
    std::vector<Vertex> blue_vertices;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        if (u < blue) {
            roles[i].kind = RoleKind::Blue;
            blue_vertices.push_back(static_cast<Vertex>(i));
        } else if (u < white) {
            roles[i].kind = RoleKind::White;
        } else if (u < student) {
            roles[i].kind = RoleKind::Student;
        }
    }

    const auto wanted = static_cast<std::size_t>(std::llround(p.gamma(LayerKind::Service) * static_cast<double>(n)));
    const std::size_t take = std::min(wanted, blue_vertices.size());
    // Partial Fisher-Yates: the first `take` slots become a uniform sample.
    for (std::size_t k = 0; k < take; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.uniform_index(blue_vertices.size() - k));
        std::swap(blue_vertices[k], blue_vertices[j]);
        roles[blue_vertices[k]].is_service_worker = true;
    }
    return roles;
}

struct ContainerLayer {
    std::vector<Container> containers;
    std::vector<Edge> edges;
};

/// Workplace or class layer: capacities are drawn until they cover
/// round(gamma * N), the ring is partitioned accordingly, and every agent with
/// the layer's role joins the container at its displaced location.
inline ContainerLayer build_container_layer(RngStream& rng, LayerKind kind, std::span<const Role> roles,
                                            std::size_t n, const ModelParams& p) {
    if (kind != LayerKind::BlueCollar && kind != LayerKind::WhiteCollar && kind != LayerKind::School)
        throw std::invalid_argument("build_container_layer: not a workplace or school layer");
    if (roles.size() != n) throw std::invalid_argument("build_container_layer: one role per vertex required");
    const auto& lp = p.layer(kind);

    const auto target = std::llround(p.gamma(kind) * static_cast<double>(n));
    std::vector<std::int64_t> capacities;
    std::int64_t total = 0;
    do {
        capacities.push_back(sample_count(rng, lp.mu, lp.sigma, 1));
        total += capacities.back();
    } while (total < target);

    const auto bounds = compute_boundaries(capacities, static_cast<std::int64_t>(n));
    ContainerLayer out;
    out.containers.resize(capacities.size());
    for (std::size_t k = 0; k < capacities.size(); ++k) {
        auto& c = out.containers[k];
        c.layer = kind;
        c.index = k;
        c.lower_bound = bounds[k];
        c.upper_bound = bounds[k + 1];
        c.nominal_capacity = capacities[k];
    }

    const RoleKind role = detail::layer_role(kind);
    const double mean = p.displacement_mean(kind);
    const double stddev = p.displacement_std(kind);
    for (std::size_t i = 0; i < n; ++i) {
        if (roles[i].kind != role) continue;
        const Vertex at = displace(static_cast<Vertex>(i), rng.normal(mean, stddev), n);
        out.containers[locate_container(bounds, at)].members.push_back(static_cast<Vertex>(i));
    }
    for (const auto& c : out.containers) detail::append_clique(c.members, out.edges);
    detail::sort_unique(out.edges);
    return out;
}

struct TeacherAssignment {
    std::vector<std::vector<Vertex>> class_teachers;
    std::vector<Edge> edges;
    std::vector<std::string> warnings;
};

/// For each class in index order, take `t` not-yet-teaching employees (lowest
/// vertex index first) from the nearest workplace (midpoint ring distance,
/// ties by lower workplace index) that can supply all of them. If none can,
/// the class collects what it can from workplaces nearest-first and a warning
/// is recorded. Teachers are clique-connected with the class and each other.
inline TeacherAssignment assign_teachers(std::span<const Container> classes, std::span<const Container> workplaces,
                                         std::vector<Role>& roles, std::int64_t t, std::size_t n) {
    TeacherAssignment out;
    out.class_teachers.resize(classes.size());
    if (t <= 0 || classes.empty()) return out;
    const auto want = static_cast<std::size_t>(t);
    const double ring = static_cast<double>(n);

    std::vector<double> work_mid(workplaces.size());
    for (std::size_t w = 0; w < workplaces.size(); ++w)
        work_mid[w] = 0.5 * (workplaces[w].lower_bound + workplaces[w].upper_bound);
    std::vector<std::size_t> available(workplaces.size(), 0);
    for (std::size_t w = 0; w < workplaces.size(); ++w)
        for (auto v : workplaces[w].members)
            if (!roles[v].is_teacher) ++available[w];

    std::vector<std::size_t> order(workplaces.size());
    std::vector<double> dist(workplaces.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& cls = classes[c];
        const double mid = 0.5 * (cls.lower_bound + cls.upper_bound);
        for (std::size_t w = 0; w < workplaces.size(); ++w) dist[w] = detail::ring_distance(mid, work_mid[w], ring);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });

        auto& teachers = out.class_teachers[c];
        auto take_from = [&](std::size_t w, std::size_t count) {
            for (auto v : workplaces[w].members) {
                if (count == 0) break;
                if (roles[v].is_teacher) continue;
                roles[v].is_teacher = true;
                teachers.push_back(v);
                --available[w];
                --count;
            }
        };

        auto supplier = std::find_if(order.begin(), order.end(), [&](std::size_t w) { return available[w] >= want; });
        if (supplier != order.end()) {
            take_from(*supplier, want);
        } else {
            for (auto w : order) {
                if (teachers.size() == want) break;
                take_from(w, std::min(want - teachers.size(), available[w]));
            }
            out.warnings.push_back("class " + std::to_string(c) + ": only " + std::to_string(teachers.size()) +
                                   " of " + std::to_string(want) + " teachers available");
        }

        for (std::size_t a = 0; a < teachers.size(); ++a) {
            for (auto s : cls.members) out.edges.push_back(make_edge(teachers[a], s));
            for (std::size_t b = a + 1; b < teachers.size(); ++b)
                out.edges.push_back(make_edge(teachers[a], teachers[b]));
        }
    }
    detail::sort_unique(out.edges);
    return out;
}

/// Star layer: each eligible agent i draws k_i ~ round(N(mu, sigma)) >= 0,
/// then (in index order) makes contact attempts, each at an independently
/// displaced location. In Degree mode k_i caps i's contacts in the layer: i
/// attempts k_i minus the contacts it already holds, and hits on eligible
/// agents that are full are dropped. In Outgoing mode i attempts k_i times with
/// no cap. Self hits and repeated pairs are dropped, not redrawn.
inline std::vector<Edge> build_star_layer(RngStream& rng, LayerKind kind, std::span<const Vertex> eligible,
                                          std::size_t n, const ModelParams& p) {
    if (!is_star_layer(kind)) throw std::invalid_argument("build_star_layer: not a star layer");
    const auto& lp = p.layer(kind);
    const double mean = p.displacement_mean(kind);
    const double stddev = p.displacement_std(kind);
    const bool degree_mode = p.star_count == StarCountMode::Degree;

    std::vector<std::vector<Vertex>> adjacent(n);
    std::vector<std::int64_t> capacity(n, std::numeric_limits<std::int64_t>::max());
    for (auto i : eligible) {
        if (i >= n) throw std::out_of_range("build_star_layer: eligible vertex out of range");
        capacity[i] = sample_count(rng, lp.mu, lp.sigma, 0);
    }
    std::vector<Edge> edges;
    for (auto i : eligible) {
        const auto have = static_cast<std::int64_t>(adjacent[i].size());
        const std::int64_t attempts = degree_mode ? std::max<std::int64_t>(0, capacity[i] - have) : capacity[i];
        for (std::int64_t a = 0; a < attempts; ++a) {
            const Vertex j = displace(i, rng.normal(mean, stddev), n);
            if (j == i || std::find(adjacent[i].begin(), adjacent[i].end(), j) != adjacent[i].end()) continue;
            if (degree_mode && static_cast<std::int64_t>(adjacent[j].size()) >= capacity[j]) continue;
            adjacent[i].push_back(j);
            adjacent[j].push_back(i);
            edges.push_back(make_edge(i, j));
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

/// Builds the layers in `active` (which must contain the household layer).
/// Each stage draws from RngStream(master_seed, stage), so a layer's edges do
/// not depend on which other layers are active.
inline MultiLayerNetwork generate(std::uint64_t master_seed, const ModelParams& p, LayerSet active) {
    if (!active.contains(LayerKind::Household))
        throw std::invalid_argument("generate: the household layer is required");
    if (auto errors = validate(p); !errors.empty()) throw ConfigError(std::move(errors));

    MultiLayerNetwork net;
    net.master_seed = master_seed;
    net.params_fingerprint = params_fingerprint(p, master_seed);
    net.layers = active;
    for (auto kind : kAllLayers) net.beta_exponents[layer_index(kind)] = p.beta_exponent(kind);

    {
        RngStream rng(master_seed, static_cast<std::uint64_t>(detail::Stage::Households));
        auto houses = build_households(rng, p);
        net.n = houses.n;
        net.containers[layer_index(LayerKind::Household)] = std::move(houses.containers);
        net.edges[layer_index(LayerKind::Household)] = std::move(houses.edges);
    }
    {
        RngStream rng(master_seed, static_cast<std::uint64_t>(detail::Stage::Roles));
        net.roles = assign_roles(rng, net.n, p);
    }

    const bool school = active.contains(LayerKind::School);
    for (auto kind : {LayerKind::BlueCollar, LayerKind::WhiteCollar, LayerKind::School}) {
        if (!active.contains(kind) && !(school && kind != LayerKind::School)) continue;
        RngStream rng(master_seed, detail::layer_stage(kind));
        auto layer = build_container_layer(rng, kind, net.roles, net.n, p);
        net.containers[layer_index(kind)] = std::move(layer.containers);
        if (active.contains(kind)) net.edges[layer_index(kind)] = std::move(layer.edges);
    }

    if (school) {
        std::vector<Container> workplaces = net.containers[layer_index(LayerKind::BlueCollar)];
        const auto& white = net.containers[layer_index(LayerKind::WhiteCollar)];
        workplaces.insert(workplaces.end(), white.begin(), white.end());
        auto teachers = assign_teachers(net.containers[layer_index(LayerKind::School)], workplaces, net.roles,
                                        p.teachers_per_class, net.n);
        auto& school_edges = net.edges[layer_index(LayerKind::School)];
        school_edges.insert(school_edges.end(), teachers.edges.begin(), teachers.edges.end());
        detail::sort_unique(school_edges);
        net.class_teachers = std::move(teachers.class_teachers);
        net.warnings = std::move(teachers.warnings);
    }

    std::vector<Vertex> everyone(net.n);
    std::iota(everyone.begin(), everyone.end(), Vertex{0});
    for (auto kind : {LayerKind::Friendship, LayerKind::Service, LayerKind::Random}) {
        if (!active.contains(kind)) continue;
        RngStream rng(master_seed, detail::layer_stage(kind));
        if (kind == LayerKind::Service) {
            std::vector<Vertex> workers;
            for (std::size_t i = 0; i < net.n; ++i)
                if (net.roles[i].is_service_worker) workers.push_back(static_cast<Vertex>(i));
            net.edges[layer_index(kind)] = build_star_layer(rng, kind, workers, net.n, p);
        } else {
            net.edges[layer_index(kind)] = build_star_layer(rng, kind, everyone, net.n, p);
        }
    }
    return net;
}

/// Pairs and per-pair minimum exponent of the union of `active` layers.
struct LayerUnion {
    std::size_t n = 0;
    std::vector<Edge> pairs;
    std::vector<std::uint8_t> exponents;
};

inline LayerUnion merge_layers(const MultiLayerNetwork& net, LayerSet active) {
    if (!active.is_subset_of(net.layers))
        throw std::invalid_argument("union_graph: layers " + active.to_string() + " not all present in network (" +
                                    net.layers.to_string() + ")");
    struct Tagged {
        Edge e;
        std::uint8_t exponent;
    };
    std::vector<Tagged> all;
    std::size_t total = 0;
    for (auto kind : active.kinds()) total += net.layer_edges(kind).size();
    all.reserve(total);
    for (auto kind : active.kinds()) {
        const auto exponent = static_cast<std::uint8_t>(net.beta_exponents[layer_index(kind)]);
        for (const auto& e : net.layer_edges(kind)) all.push_back({e, exponent});
    }
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
        return a.e != b.e ? a.e < b.e : a.exponent < b.exponent;
    });
    LayerUnion out;
    out.n = net.n;
    out.pairs.reserve(all.size());
    out.exponents.reserve(all.size());
    for (const auto& t : all) {
        if (!out.pairs.empty() && out.pairs.back() == t.e) continue;  // first one has the min exponent
        out.pairs.push_back(t.e);
        out.exponents.push_back(t.exponent);
    }
    return out;
}

/// Simple weighted union of the active layers; an edge shared by several
/// layers gets beta^(smallest exponent among them).
inline UnionGraph union_graph(const MultiLayerNetwork& net, LayerSet active, double beta) {
    auto merged = merge_layers(net, active);
    return UnionGraph::from_exponents(merged.n, merged.pairs, merged.exponents, beta);
}

}  // namespace townnet
