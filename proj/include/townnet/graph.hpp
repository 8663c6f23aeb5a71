#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "townnet/layers.hpp"

namespace townnet {

/// Canonical undirected pair, u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct WeightedEdge {
    Vertex u = 0;
    Vertex v = 0;
    double weight = 1.0;
};

/// Simple undirected weighted graph in compressed adjacency form. Neighbor
/// lists are sorted by vertex index and every entry is mirrored. Instances are
/// immutable; reweighting shares the topology.
class UnionGraph {
public:
    UnionGraph() : topology_(std::make_shared<Topology>()), weights_(std::make_shared<std::vector<double>>()) {
        topology_->offsets.push_back(0);
    }

    /// Builds from arbitrary edges; duplicates keep the largest weight.
    /// Throws on self-loops, out-of-range endpoints, or weights outside (0, 1].
    static UnionGraph from_edges(std::size_t n, std::span<const WeightedEdge> edges) {
        std::vector<WeightedEdge> canon;
        canon.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
            if (e.u == e.v) throw std::invalid_argument("self-loop in edge list");
            if (!(e.weight > 0.0 && e.weight <= 1.0))
                throw std::invalid_argument("edge weight must lie in (0, 1], got " + std::to_string(e.weight));
            canon.push_back(e.u < e.v ? e : WeightedEdge{e.v, e.u, e.weight});
        }
        std::sort(canon.begin(), canon.end(), [](const auto& a, const auto& b) {
            return a.u != b.u ? a.u < b.u : (a.v != b.v ? a.v < b.v : a.weight > b.weight);
        });
        canon.erase(std::unique(canon.begin(), canon.end(),
                                [](const auto& a, const auto& b) { return a.u == b.u && a.v == b.v; }),
                    canon.end());

        std::vector<Edge> pairs;
        std::vector<double> pair_weights;
        pairs.reserve(canon.size());
        pair_weights.reserve(canon.size());
        for (const auto& e : canon) {
            pairs.push_back({e.u, e.v});
            pair_weights.push_back(e.weight);
        }
        return build(n, pairs, [&](std::size_t k) { return pair_weights[k]; }, {});
    }

    /// Builds from canonical, sorted, duplicate-free pairs with a per-pair
    /// exponent; weight = beta^exponent.
    static UnionGraph from_exponents(std::size_t n, std::span<const Edge> pairs,
                                     std::span<const std::uint8_t> exponents, double beta) {
        check_beta(beta);
        if (pairs.size() != exponents.size()) throw std::invalid_argument("one exponent per edge required");
        for (std::size_t k = 1; k < pairs.size(); ++k)
            if (!(pairs[k - 1] < pairs[k])) throw std::invalid_argument("edges must be sorted and unique");
        for (const auto& e : pairs)
            if (!(e.u < e.v)) throw std::invalid_argument("edges must be canonical (u < v)");
        const auto table = power_table(beta);
        std::vector<std::uint8_t> exps(exponents.begin(), exponents.end());
        auto g = build(n, pairs, [&](std::size_t k) { return table.at(exponents[k]); }, std::move(exps));
        g.beta_ = beta;
        return g;
    }

    /// Same topology, weights recomputed for a new beta. Only valid for graphs
    /// built from exponents.
    UnionGraph with_beta(double beta) const {
        check_beta(beta);
        if (!has_exponents())
            throw std::logic_error("with_beta: graph was not built from layer exponents");
        const auto table = power_table(beta);
        auto weights = std::make_shared<std::vector<double>>(topology_->neighbors.size());
        for (std::size_t k = 0; k < weights->size(); ++k) (*weights)[k] = table[topology_->exponents[k]];
        UnionGraph g;
        g.topology_ = topology_;
        g.weights_ = std::move(weights);
        g.beta_ = beta;
        return g;
    }

    std::size_t vertex_count() const { return topology_->offsets.size() - 1; }
    std::size_t edge_count() const { return topology_->neighbors.size() / 2; }
    std::size_t degree(Vertex v) const { return topology_->offsets[v + 1] - topology_->offsets[v]; }

    std::span<const Vertex> neighbors(Vertex v) const {
        const auto& t = *topology_;
        return {t.neighbors.data() + t.offsets[v], t.offsets[v + 1] - t.offsets[v]};
    }
    std::span<const double> weights(Vertex v) const {
        const auto& t = *topology_;
        return {weights_->data() + t.offsets[v], t.offsets[v + 1] - t.offsets[v]};
    }
    /// Layer exponent of each adjacency entry; empty span for graphs built from raw weights.
    std::span<const std::uint8_t> exponents(Vertex v) const {
        const auto& t = *topology_;
        if (!has_exponents()) return {};
        return {t.exponents.data() + t.offsets[v], t.offsets[v + 1] - t.offsets[v]};
    }

    bool has_exponents() const { return !topology_->exponents.empty() || topology_->neighbors.empty(); }
    /// Beta the weights were computed for, 0 for graphs built from raw weights.
    double beta() const { return beta_; }

    /// Weight of edge (u, v), 0 if absent.
    double weight(Vertex u, Vertex v) const {
        auto nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v) return 0.0;
        return weights(u)[static_cast<std::size_t>(it - nb.begin())];
    }

private:
    struct Topology {
        std::vector<std::size_t> offsets;
        std::vector<Vertex> neighbors;
        std::vector<std::uint8_t> exponents;
    };

    static void check_beta(double beta) {
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("beta must lie in (0, 1], got " + std::to_string(beta));
    }

    static std::array<double, 4> power_table(double beta) {
        return {1.0, beta, beta * beta, beta * beta * beta};
    }

    template <class WeightOf>
    static UnionGraph build(std::size_t n, std::span<const Edge> pairs, WeightOf weight_of,
                            std::vector<std::uint8_t> pair_exponents) {
        auto topo = std::make_shared<Topology>();
        topo->offsets.assign(n + 1, 0);
        for (const auto& e : pairs) {
            if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
            if (e.u == e.v) throw std::invalid_argument("self-loop in edge list");
            ++topo->offsets[e.u + 1];
            ++topo->offsets[e.v + 1];
        }
        for (std::size_t v = 0; v < n; ++v) topo->offsets[v + 1] += topo->offsets[v];

        const std::size_t entries = topo->offsets[n];
        topo->neighbors.resize(entries);
        auto weights = std::make_shared<std::vector<double>>(entries);
        const bool with_exp = !pair_exponents.empty();
        if (with_exp) topo->exponents.resize(entries);

        // Pairs are sorted by (u, v). Filling all "smaller neighbor" entries first,
        // then all "larger neighbor" entries, leaves every list ascending.
        std::vector<std::size_t> cursor(topo->offsets.begin(), topo->offsets.end() - 1);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto& e = pairs[k];
            const double w = weight_of(k);
            const std::size_t slot = cursor[e.v]++;
            topo->neighbors[slot] = e.u;
            (*weights)[slot] = w;
            if (with_exp) topo->exponents[slot] = pair_exponents[k];
        }
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto& e = pairs[k];
            const double w = weight_of(k);
            const std::size_t slot = cursor[e.u]++;
            topo->neighbors[slot] = e.v;
            (*weights)[slot] = w;
            if (with_exp) topo->exponents[slot] = pair_exponents[k];
        }

        UnionGraph g;
        g.topology_ = std::move(topo);
        g.weights_ = std::move(weights);
        return g;
    }

    std::shared_ptr<Topology> topology_;
    std::shared_ptr<const std::vector<double>> weights_;
    double beta_ = 0.0;
};

}  // namespace townnet
