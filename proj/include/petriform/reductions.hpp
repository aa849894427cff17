#pragma once

// Transformations between net classes: GSM -> associated SM, weakly
// reversible free-choice net -> reduced GSM, Markovian (G)SM <-> Jackson
// network.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "petriform/matrix.hpp"
#include "petriform/net.hpp"
#include "petriform/structure.hpp"

namespace petriform {

namespace detail {
inline std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
    return base;
}
inline int bag_size(const Marking& bag) {
    int n = 0;
    for (auto v : bag) n += static_cast<int>(v);
    return n;
}
}  // namespace detail

inline bool is_gsm(const PetriNet& net) {
    if (is_weighted(net)) return false;
    for (const auto& t : net.transitions)
        if (detail::bag_size(t.input) > 1 || detail::bag_size(t.output) > 1) return false;
    return true;
}

// Adds one fresh place wired to every source and sink transition; the result
// is a state machine whose Petri graph is isomorphic to the GSM's reaction
// graph.  The fresh place is named "env" (suffixed with underscores on
// collision) and starts empty.
inline PetriNet associated_sm(const PetriNet& net) {
    if (!is_gsm(net)) throw NotGsmError("associated SM requires a generalized state machine");
    PetriNet out = net;
    std::string env = detail::fresh_name(out.places, "env");
    out.places.push_back(env);
    std::size_t env_idx = out.places.size() - 1;
    out.initial_marking.push_back(0);
    for (auto& t : out.transitions) {
        t.input.push_back(0);
        t.output.push_back(0);
        if (detail::bag_size(t.input) == 0) t.input[env_idx] = 1;
        if (detail::bag_size(t.output) == 0) t.output[env_idx] = 1;
    }
    return out;
}

// Collapses each non-empty complex of a weakly reversible free-choice net
// into one place.  Refuses non-WR inputs unless `force` is set because the
// marking-graph isomorphism fails without weak reversibility.
inline PetriNet rgsm(const PetriNet& net, bool force = false) {
    ClassFlags flags = classify(net);
    if (flags.weighted || !flags.free_choice)
        throw NotFreeChoiceError("RGSM requires a non-weighted free-choice net");
    if (!force && !is_weakly_reversible(net))
        throw NotWeaklyReversibleError(
            "RGSM of a non weakly reversible net loses the marking-graph isomorphism (use force "
            "to build it anyway)");

    std::vector<Complex> cs = complexes(net);
    Complex empty(net.places.size(), 0);

    PetriNet out;
    out.kinetics = net.kinetics;
    std::vector<int> complex_place(cs.size(), -1);  // complex index -> new place
    for (std::size_t c = 0; c < cs.size(); ++c) {
        if (cs[c] == empty) continue;
        std::string name;
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (cs[c][p] > 0) name += (name.empty() ? "" : "_") + net.places[p];
        complex_place[c] = static_cast<int>(out.places.size());
        out.places.push_back(detail::fresh_name(out.places, name));
    }
    // initial marking by the min rule
    out.initial_marking.assign(out.places.size(), 0);
    for (std::size_t c = 0; c < cs.size(); ++c) {
        if (complex_place[c] < 0) continue;
        std::int64_t lo = -1;
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (cs[c][p] > 0 && (lo < 0 || net.initial_marking[p] < lo))
                lo = net.initial_marking[p];
        out.initial_marking[complex_place[c]] = lo;
    }
    auto complex_index = [&](const Complex& bag) {
        for (std::size_t c = 0; c < cs.size(); ++c)
            if (cs[c] == bag) return static_cast<int>(c);
        return -1;
    };
    for (const auto& t : net.transitions) {
        Transition nt;
        nt.id = t.id;
        nt.rate = t.rate;
        nt.input.assign(out.places.size(), 0);
        nt.output.assign(out.places.size(), 0);
        int ci = complex_place[complex_index(t.input)];
        int co = complex_place[complex_index(t.output)];
        if (ci >= 0) nt.input[ci] = 1;
        if (co >= 0) nt.output[co] = 1;
        out.transitions.push_back(std::move(nt));
    }
    return out;
}

// f(M)_C = min_{p in C} M(p): the marking-graph isomorphism of the reduction.
inline Marking rgsm_marking_map(const PetriNet& net, const PetriNet& reduced, const Marking& m) {
    std::vector<Complex> cs = complexes(net);
    Complex empty(net.places.size(), 0);
    Marking out(reduced.places.size(), 0);
    int next = 0;
    for (const auto& c : cs) {
        if (c == empty) continue;
        std::int64_t lo = -1;
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (c[p] > 0 && (lo < 0 || m[p] < lo)) lo = m[p];
        out[next++] = lo;
    }
    return out;
}

struct JacksonNetwork {
    std::vector<std::string> queues;  // one per place
    std::vector<Rat> service_rate;    // mu_s = sum of rates of transitions consuming s
    RationalMatrix routing;           // substochastic; rows sum to 1 for closed networks
    std::vector<Rat> arrival_rate;    // external Poisson arrivals (0 for closed)
    std::vector<std::int64_t> initial;  // initial queue lengths
    bool open = false;
};

inline JacksonNetwork to_jackson(const PetriNet& net) {
    if (!is_gsm(net)) throw NotGsmError("Jackson translation requires a GSM");
    if (net.kinetics != Kinetics::Constant)
        throw NotConstantRatesError("Jackson translation requires constant rates");
    if (!is_weakly_reversible(net))
        throw NotWeaklyReversibleError("Jackson translation requires weak reversibility");

    int np = static_cast<int>(net.places.size());
    JacksonNetwork j;
    j.queues = net.places;
    j.initial = net.initial_marking;
    j.service_rate.assign(np, Rat(0));
    j.arrival_rate.assign(np, Rat(0));
    j.routing = RationalMatrix(np, np);

    auto single_index = [](const Marking& bag) {
        for (std::size_t p = 0; p < bag.size(); ++p)
            if (bag[p] > 0) return static_cast<int>(p);
        return -1;
    };
    for (const auto& t : net.transitions) {
        int u = single_index(t.input);
        int v = single_index(t.output);
        if (u >= 0) j.service_rate[u] += t.rate;
        if (u < 0 && v >= 0) j.arrival_rate[v] += t.rate;
        if (u < 0 || v < 0) j.open = true;
    }
    for (int p = 0; p < np; ++p) {
        bool touched = false;
        for (const auto& t : net.transitions)
            touched |= (t.input[p] > 0 || t.output[p] > 0);
        if (touched && j.service_rate[p] == 0)
            throw PreconditionError("place '" + net.places[p] +
                                    "' has no consuming transition; no service rate");
    }
    for (const auto& t : net.transitions) {
        int u = single_index(t.input);
        int v = single_index(t.output);
        if (u >= 0 && v >= 0) j.routing.at(u, v) += t.rate / j.service_rate[u];
    }
    return j;
}

// Reverse construction: one place per queue, a transition per positive
// routing entry, departure transitions for substochastic rows and arrival
// transitions per positive arrival rate.  Transition ids are positional.
inline PetriNet from_jackson(const JacksonNetwork& j) {
    int np = static_cast<int>(j.queues.size());
    PetriNet net;
    net.places = j.queues;
    net.initial_marking = j.initial.empty() ? Marking(np, 0) : j.initial;
    net.kinetics = Kinetics::Constant;
    int counter = 0;
    auto bag = [&](int idx) {
        Marking m(np, 0);
        if (idx >= 0) m[idx] = 1;
        return m;
    };
    auto add = [&](int u, int v, Rat kappa) {
        net.transitions.push_back({"t" + std::to_string(++counter), bag(u), bag(v), kappa});
    };
    for (int u = 0; u < np; ++u) {
        Rat row_sum(0);
        for (int v = 0; v < np; ++v) {
            if (j.routing.at(u, v) < 0) throw InvalidRoutingError("negative routing probability");
            row_sum += j.routing.at(u, v);
            if (j.routing.at(u, v) > 0) add(u, v, j.service_rate[u] * j.routing.at(u, v));
        }
        if (row_sum > 1) throw InvalidRoutingError("routing row sums to more than 1");
        Rat leftover = j.service_rate[u] * (Rat(1) - row_sum);
        if (leftover > 0) add(u, -1, leftover);
    }
    for (int v = 0; v < np; ++v)
        if (j.arrival_rate[v] > 0) add(-1, v, j.arrival_rate[v]);
    return net;
}

// Per-queue geometric kernel rho of the Jackson product form.  Open networks
// solve the traffic equations lambda = a + lambda P exactly; closed networks
// use visit ratios y = y P per weak component, anchored at the first queue of
// the component.  pi(n) is proportional to prod_s rho_s^{n_s}.
inline std::vector<Rat> jackson_kernel(const JacksonNetwork& j) {
    int np = static_cast<int>(j.queues.size());
    for (int s = 0; s < np; ++s)
        if (j.service_rate[s] <= 0)
            throw PreconditionError("queue '" + j.queues[s] + "' has no positive service rate");
    if (j.open) {
        // lambda (I - P) = a, i.e. (I - P)^T lambda^T = a^T
        RationalMatrix m(np, np);
        for (int u = 0; u < np; ++u) {
            m.at(u, u) = 1;
            for (int v = 0; v < np; ++v) m.at(v, u) -= j.routing.at(u, v);
        }
        std::vector<Rat> rhs(np);
        for (int v = 0; v < np; ++v) rhs[v] = j.arrival_rate[v];
        auto lambda = solve_exact(m, rhs);
        if (!lambda) throw PreconditionError("open Jackson traffic equations are inconsistent");
        std::vector<Rat> rho(np);
        for (int s = 0; s < np; ++s) rho[s] = (*lambda)[s] / j.service_rate[s];
        return rho;
    }
    // weak components of the routing graph
    std::vector<int> parent(np);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int u = 0; u < np; ++u)
        for (int v = 0; v < np; ++v)
            if (j.routing.at(u, v) > 0) {
                int ru = find(u), rv = find(v);
                if (ru != rv) parent[ru] = rv;
            }
    std::vector<Rat> rho(np, Rat(0));
    std::vector<bool> done(np, false);
    for (int root = 0; root < np; ++root) {
        std::vector<int> members;
        for (int u = 0; u < np; ++u)
            if (find(u) == find(root)) members.push_back(u);
        if (done[members.front()]) continue;
        int m_sz = static_cast<int>(members.size());
        auto local = [&](int u) {
            for (int k = 0; k < m_sz; ++k)
                if (members[k] == u) return k;
            return -1;
        };
        // y P = y with y anchored to 1 at the component's first queue
        RationalMatrix sys(m_sz + 1, m_sz);
        for (int a = 0; a < m_sz; ++a)
            for (int b = 0; b < m_sz; ++b) {
                sys.at(b, a) += j.routing.at(members[a], members[b]);
                if (a == b) sys.at(b, a) -= 1;
            }
        for (int k = 0; k < m_sz; ++k) sys.at(m_sz, k) = (k == 0) ? Rat(1) : Rat(0);
        std::vector<Rat> rhs(m_sz + 1, Rat(0));
        rhs[m_sz] = 1;
        auto y = solve_exact(sys, rhs);
        if (!y) throw PreconditionError("closed Jackson visit-ratio equations are inconsistent");
        for (int k = 0; k < m_sz; ++k) {
            rho[members[k]] = (*y)[k] / j.service_rate[members[k]];
            done[members[k]] = true;
        }
    }
    return rho;
}

}  // namespace petriform
