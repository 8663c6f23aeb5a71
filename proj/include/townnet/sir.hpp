#pragma once

// Continuous-time Markovian SIR, event driven.
//
// An S-I edge of weight w transmits at rate w, an infected vertex recovers at
// rate gamma. When a vertex is infected its recovery time is drawn at once,
// and each susceptible neighbour gets a tentative infection time if the
// transmission would fire before that recovery. Only the earliest tentative
// time per vertex stays valid; stale queue entries are skipped when popped.
// A weight-1 household edge therefore transmits with probability 1/(1+gamma),
// not with certainty.

#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "townnet/graph.hpp"
#include "townnet/sampling.hpp"

namespace townnet {

struct SirConfig {
    double gamma = 1.0;
    Vertex seed_vertex = 0;
};

struct SirOutcome {
    double coverage = 0.0;
    double time = 0.0;
    std::size_t ever_infected_count = 0;
};

inline SirOutcome simulate_sir(const UnionGraph& g, const SirConfig& cfg, RngStream& rng) {
    const std::size_t n = g.vertex_count();
    if (cfg.seed_vertex >= n) throw std::out_of_range("simulate_sir: seed vertex out of range");
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("simulate_sir: gamma must be positive");

    enum class State : std::uint8_t { Susceptible, Infected, Recovered };
    struct Event {
        double time;
        Vertex vertex;
        bool recovery;
        bool operator>(const Event& o) const { return time > o.time; }
    };

    constexpr double never = std::numeric_limits<double>::infinity();
    std::vector<State> state(n, State::Susceptible);
    std::vector<double> pending(n, never);
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

    pending[cfg.seed_vertex] = 0.0;
    queue.push({0.0, cfg.seed_vertex, false});

    SirOutcome out;
    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.recovery) {
            state[ev.vertex] = State::Recovered;
            out.time = ev.time;
            continue;
        }
        if (state[ev.vertex] != State::Susceptible || ev.time != pending[ev.vertex]) continue;

        state[ev.vertex] = State::Infected;
        ++out.ever_infected_count;
        out.time = ev.time;
        const double recovery = ev.time + rng.exponential(cfg.gamma);
        queue.push({recovery, ev.vertex, true});

        const auto nb = g.neighbors(ev.vertex);
        const auto w = g.weights(ev.vertex);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const Vertex u = nb[k];
            if (state[u] != State::Susceptible) continue;
            const double at = ev.time + rng.exponential(w[k]);
            if (at < recovery && at < pending[u]) {
                pending[u] = at;
                queue.push({at, u, false});
            }
        }
    }
    out.coverage = static_cast<double>(out.ever_infected_count) / static_cast<double>(n);
    return out;
}

}  // namespace townnet
