#pragma once

// Bounded breadth-first exploration of the reachable marking set.  Node order
// is deterministic: BFS levels with a places-lexicographic tie-break inside
// each level, so golden outputs are stable across runs and platforms.

#include <map>
#include <vector>

#include "petriform/net.hpp"

namespace petriform {

struct MarkingGraph {
    std::vector<Marking> nodes;  // BFS order, origin first
    struct Arc {
        int from;
        int transition;
        int to;
    };
    std::vector<Arc> arcs;  // sorted by (from, transition)
    bool truncated = false;
    Marking origin;

    int index_of(const Marking& m) const {
        auto it = index.find(m);
        return it == index.end() ? -1 : it->second;
    }
    std::map<Marking, int> index;
};

inline MarkingGraph reachability(const PetriNet& net, std::size_t cap = 100000) {
    if (cap < 1) throw PreconditionError("reachability cap must be >= 1");
    MarkingGraph g;
    g.origin = net.initial_marking;
    g.nodes.push_back(g.origin);
    g.index[g.origin] = 0;

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::map<Marking, int> discovered;  // lex-ordered next level
        for (int from : frontier) {
            for (std::size_t t = 0; t < net.transitions.size(); ++t) {
                if (!is_enabled(net, g.nodes[from], static_cast<int>(t))) continue;
                Marking next = fire(net, g.nodes[from], static_cast<int>(t));
                if (g.index.find(next) == g.index.end() && discovered.find(next) == discovered.end())
                    discovered[next] = -1;
            }
        }
        std::vector<int> next_frontier;
        for (auto& [m, idx] : discovered) {
            if (g.nodes.size() >= cap) {
                g.truncated = true;
                break;
            }
            idx = static_cast<int>(g.nodes.size());
            g.nodes.push_back(m);
            g.index[m] = idx;
            next_frontier.push_back(idx);
        }
        frontier = std::move(next_frontier);
    }

    for (int from = 0; from < static_cast<int>(g.nodes.size()); ++from) {
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            if (!is_enabled(net, g.nodes[from], static_cast<int>(t))) continue;
            Marking next = fire(net, g.nodes[from], static_cast<int>(t));
            int to = g.index_of(next);
            if (to >= 0) g.arcs.push_back({from, static_cast<int>(t), to});
        }
    }
    return g;
}

// Strong connectivity of an arbitrary arc list over n nodes (iterative
// Tarjan); used for marking graphs, reaction graphs and generator patterns.
inline std::vector<int> strongly_connected_components(
    int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges)
        if (u != v) adj[u].push_back(v);

    std::vector<int> comp(n, -1), low(n, 0), disc(n, -1), stack_mem;
    std::vector<bool> on_stack(n, false);
    int timer = 0, ncomp = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int start = 0; start < n; ++start) {
        if (disc[start] != -1) continue;
        std::vector<Frame> call{{start, 0}};
        disc[start] = low[start] = timer++;
        stack_mem.push_back(start);
        on_stack[start] = true;
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child < adj[v].size()) {
                int w = adj[v][child++];
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    stack_mem.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                if (low[v] == disc[v]) {
                    while (true) {
                        int w = stack_mem.back();
                        stack_mem.pop_back();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
                int done = v;
                call.pop_back();
                if (!call.empty()) {
                    int parent = call.back().v;
                    low[parent] = std::min(low[parent], low[done]);
                }
            }
        }
    }
    return comp;
}

inline bool is_strongly_connected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n <= 1) return true;
    auto comp = strongly_connected_components(n, edges);
    for (int c : comp)
        if (c != comp[0]) return false;
    return true;
}

inline bool marking_graph_strongly_connected(const MarkingGraph& g) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.arcs.size());
    for (const auto& a : g.arcs) edges.emplace_back(a.from, a.to);
    return is_strongly_connected(static_cast<int>(g.nodes.size()), edges);
}

}  // namespace petriform
