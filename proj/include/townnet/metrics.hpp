#pragma once

// Structural analysis of a UnionGraph. Distances are unweighted hop counts;
// k-cores use unweighted degree; strength sums edge weights.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "townnet/graph.hpp"
#include "townnet/sampling.hpp"

namespace townnet {

struct Components {
    std::vector<std::uint32_t> id;  // id 0 is the largest component
    std::vector<std::size_t> size;  // size[id]

    std::size_t largest_size() const { return size.empty() ? 0 : size.front(); }
};

/// Component ids dense from 0, ordered by size descending, ties by the smallest member.
inline Components connected_components(const UnionGraph& g) {
    const std::size_t n = g.vertex_count();
    constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> raw(n, unseen);
    std::vector<std::size_t> raw_size;
    std::vector<Vertex> queue;
    queue.reserve(n);
    for (Vertex s = 0; s < n; ++s) {
        if (raw[s] != unseen) continue;
        const auto label = static_cast<std::uint32_t>(raw_size.size());
        queue.clear();
        queue.push_back(s);
        raw[s] = label;
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (auto u : g.neighbors(queue[head]))
                if (raw[u] == unseen) {
                    raw[u] = label;
                    queue.push_back(u);
                }
        raw_size.push_back(queue.size());
    }
    // Raw labels follow smallest-member order, so a stable sort by size keeps the tie rule.
    std::vector<std::uint32_t> order(raw_size.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw_size[a] > raw_size[b]; });
    std::vector<std::uint32_t> relabel(raw_size.size());
    Components out;
    out.size.resize(raw_size.size());
    for (std::uint32_t k = 0; k < order.size(); ++k) {
        relabel[order[k]] = k;
        out.size[k] = raw_size[order[k]];
    }
    out.id.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.id[v] = relabel[raw[v]];
    return out;
}

/// Members of component 0, ascending.
inline std::vector<Vertex> largest_component(const Components& c) {
    std::vector<Vertex> out;
    out.reserve(c.largest_size());
    for (std::size_t v = 0; v < c.id.size(); ++v)
        if (c.id[v] == 0) out.push_back(static_cast<Vertex>(v));
    return out;
}

struct DistanceStats {
    double diameter = 0.0;
    double aspl = 0.0;
    bool exact = true;
    std::size_t sources_used = 0;
};

namespace detail {

/// BFS over the whole graph from `source`. Returns (sum of distances, eccentricity, a farthest vertex).
struct BfsResult {
    std::uint64_t distance_sum = 0;
    std::uint32_t eccentricity = 0;
    Vertex farthest = 0;
    std::size_t reached = 0;
};

class BfsWorkspace {
public:
    explicit BfsWorkspace(std::size_t n) : dist_(n, kUnreached), queue_(n) {}

    BfsResult run(const UnionGraph& g, Vertex source) {
        BfsResult r;
        std::size_t head = 0, tail = 0;
        queue_[tail++] = source;
        dist_[source] = 0;
        r.farthest = source;
        while (head < tail) {
            const Vertex v = queue_[head++];
            const std::uint32_t dv = dist_[v];
            r.distance_sum += dv;
            if (dv > r.eccentricity) {
                r.eccentricity = dv;
                r.farthest = v;
            }
            for (auto u : g.neighbors(v)) {
                if (dist_[u] != kUnreached) continue;
                dist_[u] = dv + 1;
                queue_[tail++] = u;
            }
        }
        r.reached = tail;
        for (std::size_t k = 0; k < tail; ++k) dist_[queue_[k]] = kUnreached;
        return r;
    }

private:
    static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist_;
    std::vector<Vertex> queue_;
};

}  // namespace detail

/// Diameter and average shortest path length of the largest component.
/// With `sources` unset (or >= component size) every member is a BFS source
/// and the result is exact. Otherwise `sources` members are sampled without
/// replacement, aspl averages their rows, and the diameter is the largest
/// eccentricity seen, refined by one more BFS from the farthest vertex found.
inline DistanceStats distance_stats(const UnionGraph& g, const Components& comps, std::optional<std::size_t> sources,
                                    RngStream& rng) {
    DistanceStats out;
    auto lc = largest_component(comps);
    if (lc.size() < 2) {
        out.diameter = 1.0;
        out.aspl = 1.0;
        out.exact = true;
        out.sources_used = lc.size();
        return out;
    }
    const bool exact = !sources || *sources >= lc.size();
    std::size_t count = lc.size();
    if (!exact) {
        count = std::max<std::size_t>(*sources, 1);
        for (std::size_t k = 0; k < count; ++k) {
            const auto j = k + static_cast<std::size_t>(rng.uniform_index(lc.size() - k));
            std::swap(lc[k], lc[j]);
        }
    }

    detail::BfsWorkspace bfs(g.vertex_count());
    const double others = static_cast<double>(lc.size() - 1);
    double row_sum = 0.0;
    std::uint32_t diameter = 0;
    Vertex far = lc.front();
    for (std::size_t k = 0; k < count; ++k) {
        const auto r = bfs.run(g, lc[k]);
        row_sum += static_cast<double>(r.distance_sum) / others;
        if (r.eccentricity > diameter || k == 0) {
            diameter = std::max(diameter, r.eccentricity);
            far = r.farthest;
        }
    }
    if (!exact) diameter = std::max(diameter, bfs.run(g, far).eccentricity);

    out.aspl = row_sum / static_cast<double>(count);
    out.diameter = diameter;
    out.exact = exact;
    out.sources_used = count;
    return out;
}

inline DistanceStats distance_stats(const UnionGraph& g, std::optional<std::size_t> sources, RngStream& rng) {
    return distance_stats(g, connected_components(g), sources, rng);
}

/// Local clustering 2T(v) / (k(k-1)), zero for degree < 2, averaged over all vertices.
inline std::vector<double> local_clustering(const UnionGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<double> out(n, 0.0);
    std::vector<std::uint32_t> mark(n, std::numeric_limits<std::uint32_t>::max());
    for (Vertex v = 0; v < n; ++v) {
        const auto nb = g.neighbors(v);
        if (nb.size() < 2) continue;
        for (auto u : nb) mark[u] = v;
        std::uint64_t links = 0;  // each triangle counted twice
        for (auto u : nb)
            for (auto w : g.neighbors(u))
                if (mark[w] == v) ++links;
        const double k = static_cast<double>(nb.size());
        out[v] = static_cast<double>(links) / (k * (k - 1.0));
    }
    return out;
}

inline double average_clustering(const UnionGraph& g) {
    const auto local = local_clustering(g);
    if (local.empty()) return 0.0;
    return std::accumulate(local.begin(), local.end(), 0.0) / static_cast<double>(local.size());
}

inline double strength(const UnionGraph& g, Vertex v) {
    if (v >= g.vertex_count()) throw std::out_of_range("strength: vertex out of range");
    const auto w = g.weights(v);
    return std::accumulate(w.begin(), w.end(), 0.0);
}

/// Core numbers by bucket peeling (Batagelj-Zaversnik), O(n + m).
inline std::vector<std::uint32_t> k_core(const UnionGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint32_t> deg(n);
    std::uint32_t max_deg = 0;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(g.degree(v));
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 2, 0);
    for (auto d : deg) ++bin[d];
    std::size_t start = 0;
    for (auto& b : bin) {
        const auto count = b;
        b = start;
        start += count;
    }
    std::vector<Vertex> order(n);
    std::vector<std::size_t> pos(n);
    for (Vertex v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        order[pos[v]] = v;
    }
    for (std::size_t d = bin.size() - 1; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (std::size_t k = 0; k < n; ++k) {
        const Vertex v = order[k];
        for (auto u : g.neighbors(v)) {
            if (deg[u] <= deg[v]) continue;
            const std::uint32_t du = deg[u];
            const std::size_t pu = pos[u];
            const std::size_t pw = bin[du];
            const Vertex w = order[pw];
            if (u != w) {
                std::swap(order[pu], order[pw]);
                pos[u] = pw;
                pos[w] = pu;
            }
            ++bin[du];
            --deg[u];
        }
    }
    return deg;
}

/// Worst-case initial infected: within the largest component, among the
/// vertices of maximal core number, the one of largest strength (lowest index on ties).
inline Vertex select_seed(const UnionGraph& g, const Components& comps, std::span<const std::uint32_t> cores) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw std::invalid_argument("select_seed: empty graph");
    std::uint32_t top_core = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (comps.id[v] == 0) top_core = std::max(top_core, cores[v]);
    Vertex best = 0;
    double best_strength = -1.0;
    for (Vertex v = 0; v < n; ++v) {
        if (comps.id[v] != 0 || cores[v] != top_core) continue;
        const double s = strength(g, v);
        if (s > best_strength) {
            best_strength = s;
            best = v;
        }
    }
    return best;
}

inline Vertex select_seed(const UnionGraph& g) {
    const auto comps = connected_components(g);
    const auto cores = k_core(g);
    return select_seed(g, comps, cores);
}

struct AttributeReport {
    double largest_component_fraction = 0.0;
    double diameter = 0.0;
    double avg_shortest_path = 0.0;
    double avg_clustering = 0.0;
    bool exact_distances = true;
    std::size_t bfs_sources_used = 0;
};

inline AttributeReport attribute_report(const UnionGraph& g, std::optional<std::size_t> sources, RngStream& rng) {
    AttributeReport r;
    const auto comps = connected_components(g);
    const auto n = g.vertex_count();
    r.largest_component_fraction = n == 0 ? 0.0 : static_cast<double>(comps.largest_size()) / static_cast<double>(n);
    const auto d = distance_stats(g, comps, sources, rng);
    r.diameter = d.diameter;
    r.avg_shortest_path = d.aspl;
    r.exact_distances = d.exact;
    r.bfs_sources_used = d.sources_used;
    r.avg_clustering = average_clustering(g);
    return r;
}

}  // namespace townnet
