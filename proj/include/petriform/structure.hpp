#pragma once

// Structural layer: complexes, reaction graph, exact incidence matrices N and
// A, deficiency, weak reversibility, clusters and net-class predicates.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "petriform/matrix.hpp"
#include "petriform/net.hpp"
#include "petriform/reach.hpp"

namespace petriform {

// A complex is a multiset over places; the all-zero vector is the empty
// complex arising from source/sink transitions.
using Complex = Marking;

// Complexes are ordered descending-lexicographically by exponent vector.
// This reproduces the conventional presentation order (e.g. 2p, p+q+r, 2q for
// the three-complex cycle) and makes A and B reproducible.
inline std::vector<Complex> complexes(const PetriNet& net) {
    std::vector<Complex> out;
    auto add = [&](const Complex& c) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    for (const auto& t : net.transitions) {
        add(t.input);
        add(t.output);
    }
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) { return a > b; });
    if (out.size() > 2 * net.transitions.size())
        throw std::logic_error("complex count exceeds 2|T|; parser bug");
    return out;
}

struct ReactionGraph {
    std::vector<Complex> nodes;
    struct Arc {
        int from;
        int transition;
        int to;
    };
    std::vector<Arc> arcs;
    std::vector<int> component;  // weak component id per node
    int component_count = 0;    // the paper's l

    int index_of(const Complex& c) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == c) return static_cast<int>(i);
        return -1;
    }
};

inline ReactionGraph reaction_graph(const PetriNet& net) {
    ReactionGraph g;
    g.nodes = complexes(net);
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        int u = g.index_of(net.transitions[t].input);
        int v = g.index_of(net.transitions[t].output);
        g.arcs.push_back({u, static_cast<int>(t), v});
    }
    // weak components by union-find
    std::vector<int> parent(g.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& a : g.arcs) {
        int ru = find(a.from), rv = find(a.to);
        if (ru != rv) parent[ru] = rv;
    }
    g.component.assign(g.nodes.size(), -1);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        int root = find(static_cast<int>(i));
        if (g.component[root] == -1) g.component[root] = g.component_count++;
        g.component[i] = g.component[root];
    }
    return g;
}

inline bool is_weakly_reversible(const ReactionGraph& g) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& a : g.arcs) edges.emplace_back(a.from, a.to);
    auto scc = strongly_connected_components(static_cast<int>(g.nodes.size()), edges);
    // WR iff each weak component is a single SCC.
    for (const auto& a : g.arcs)
        if (scc[a.from] != scc[a.to]) return false;
    return true;
}

inline bool is_weakly_reversible(const PetriNet& net) {
    return is_weakly_reversible(reaction_graph(net));
}

// N_{s,t} = O(t)_s - I(t)_s
inline RationalMatrix incidence_N(const PetriNet& net) {
    RationalMatrix n(static_cast<int>(net.places.size()),
                     static_cast<int>(net.transitions.size()));
    for (int t = 0; t < n.cols(); ++t)
        for (int s = 0; s < n.rows(); ++s)
            n.at(s, t) = Rat(static_cast<long>(net.transitions[t].output[s] -
                                               net.transitions[t].input[s]));
    return n;
}

// A_{u,t} = -1 if I(t)=u, +1 if O(t)=u (one of each per column)
inline RationalMatrix incidence_A(const PetriNet& net, const ReactionGraph& g) {
    RationalMatrix a(static_cast<int>(g.nodes.size()),
                     static_cast<int>(net.transitions.size()));
    for (const auto& arc : g.arcs) {
        a.at(arc.from, arc.transition) -= 1;
        a.at(arc.to, arc.transition) += 1;
    }
    return a;
}

inline RationalMatrix incidence_A(const PetriNet& net) {
    return incidence_A(net, reaction_graph(net));
}

struct StructureReport {
    int complex_count = 0;
    int component_count = 0;  // l
    int rank_n = 0;
    int rank_a = 0;
    int deficiency = 0;
    bool weakly_reversible = false;
    bool free_choice = false;
    bool state_machine = false;
    bool generalized_state_machine = false;
    bool weighted = false;
    // cluster partition of places and transitions, by name (empty for
    // weighted nets where clusters are undefined)
    std::vector<std::vector<std::string>> clusters;
};

struct ClassFlags {
    bool free_choice = false;
    bool state_machine = false;
    bool generalized_state_machine = false;
    bool weighted = false;
};

inline ClassFlags classify(const PetriNet& net) {
    ClassFlags f;
    f.weighted = is_weighted(net);
    if (f.weighted) return f;

    auto support = [](const Marking& bag) {
        std::vector<int> s;
        for (std::size_t p = 0; p < bag.size(); ++p)
            if (bag[p] > 0) s.push_back(static_cast<int>(p));
        return s;
    };
    f.state_machine = true;
    f.generalized_state_machine = true;
    for (const auto& t : net.transitions) {
        auto in = support(t.input), out = support(t.output);
        if (in.size() != 1 || out.size() != 1) f.state_machine = false;
        if (in.size() > 1 || out.size() > 1) f.generalized_state_machine = false;
    }
    f.free_choice = true;
    for (std::size_t i = 0; i < net.transitions.size() && f.free_choice; ++i)
        for (std::size_t j = i + 1; j < net.transitions.size(); ++j) {
            const auto& a = net.transitions[i].input;
            const auto& b = net.transitions[j].input;
            if (a == b) continue;
            bool disjoint = true;
            for (std::size_t p = 0; p < a.size(); ++p)
                if (a[p] > 0 && b[p] > 0) disjoint = false;
            if (!disjoint) {
                f.free_choice = false;
                break;
            }
        }
    return f;
}

// Least fixed point of: t in [x] => pre(t) in [x];  p in [x] => post(p) in
// [x].  Both rules union across the place->transition arcs, so clusters are
// the connected components of that bipartite restriction.
inline std::vector<std::vector<std::string>> clusters(const PetriNet& net) {
    if (is_weighted(net)) throw WeightedNetError("clusters are defined for non-weighted nets");
    int np = static_cast<int>(net.places.size());
    int nt = static_cast<int>(net.transitions.size());
    std::vector<int> parent(np + nt);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    };
    for (int t = 0; t < nt; ++t)
        for (int p = 0; p < np; ++p)
            if (net.transitions[t].input[p] > 0) unite(p, np + t);

    std::map<int, std::vector<std::string>> groups;
    for (int p = 0; p < np; ++p) groups[find(p)].push_back(net.places[p]);
    for (int t = 0; t < nt; ++t) groups[find(np + t)].push_back(net.transitions[t].id);
    std::vector<std::vector<std::string>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

inline StructureReport analyze_structure(const PetriNet& net) {
    StructureReport r;
    ReactionGraph g = reaction_graph(net);
    r.complex_count = static_cast<int>(g.nodes.size());
    r.component_count = g.component_count;
    r.rank_n = rank(incidence_N(net));
    r.rank_a = rank(incidence_A(net, g));
    if (r.rank_a != r.complex_count - r.component_count)
        throw std::logic_error("rank(A) != |C| - l; structural invariant violated");
    r.deficiency = r.complex_count - r.component_count - r.rank_n;
    if (r.deficiency < 0) throw std::logic_error("negative deficiency; structural invariant violated");
    r.weakly_reversible = is_weakly_reversible(g);
    ClassFlags f = classify(net);
    r.free_choice = f.free_choice;
    r.state_machine = f.state_machine;
    r.generalized_state_machine = f.generalized_state_machine;
    r.weighted = f.weighted;
    if (!f.weighted) r.clusters = clusters(net);
    return r;
}

inline int deficiency(const PetriNet& net) { return analyze_structure(net).deficiency; }

}  // namespace petriform
