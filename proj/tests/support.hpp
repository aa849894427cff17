#pragma once

// Shared test utilities: fixture loading, hand-built paper nets, random net
// generators (seeded SplitMix64, reproducible) and small independent oracles.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "petriform/petriform.hpp"

#ifndef PETRIFORM_FIXTURES_DIR
#define PETRIFORM_FIXTURES_DIR "fixtures"
#endif

namespace pftest {

using namespace petriform;

inline std::string fixture_path(const std::string& name) {
    return std::string(PETRIFORM_FIXTURES_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PetriNet load_fixture(const std::string& name) {
    return parse_net(slurp(fixture_path(name)));
}

// The detailed three-complex example net (2p -> p+q+r -> 2q -> 2p) with
// adjustable rates and initial p-count.
inline PetriNet cycle_net(Rat k1, Rat k2, Rat k3, std::int64_t initial_p = 2,
                          Kinetics kin = Kinetics::Constant) {
    PetriNet net;
    net.places = {"p", "q", "r"};
    net.kinetics = kin;
    net.initial_marking = {initial_p, 0, 0};
    net.transitions = {
        {"t1", {2, 0, 0}, {1, 1, 1}, k1},
        {"t2", {0, 2, 0}, {2, 0, 0}, k2},
        {"t3", {1, 1, 1}, {0, 2, 0}, k3},
    };
    return net;
}

// The not-weakly-reversible counterexample net with adjustable rates.
inline PetriNet counterexample_net(Rat m1, Rat m2, Rat m3, Marking init = {1, 1, 0, 0}) {
    PetriNet net;
    net.places = {"p1", "p2", "p3", "p4"};
    net.initial_marking = std::move(init);
    net.transitions = {
        {"t1", {1, 0, 0, 0}, {0, 1, 0, 1}, m1},
        {"t2", {0, 1, 0, 0}, {0, 0, 1, 0}, m2},
        {"t3", {0, 0, 1, 1}, {1, 0, 0, 0}, m3},
    };
    return net;
}

// The six-transition reversible-pairs net with adjustable rates.
inline PetriNet pairs_net(std::vector<Rat> kappa, Marking init = {2, 0, 0, 1}) {
    PetriNet net;
    net.places = {"p1", "p2", "p3", "p4"};
    net.initial_marking = std::move(init);
    net.transitions = {
        {"t1", {1, 0, 0, 0}, {0, 1, 0, 0}, kappa[0]},
        {"t2", {0, 1, 0, 0}, {1, 0, 0, 0}, kappa[1]},
        {"t3", {0, 0, 1, 0}, {0, 0, 0, 1}, kappa[2]},
        {"t4", {0, 0, 0, 1}, {0, 0, 1, 0}, kappa[3]},
        {"t5", {1, 0, 1, 0}, {0, 1, 0, 1}, kappa[4]},
        {"t6", {0, 1, 0, 1}, {1, 0, 1, 0}, kappa[5]},
    };
    return net;
}

// ---------------------------------------------------------------------------
// Random net generation (reproducible; weights <= 2, sizes per caller)

inline Rat random_rate(SplitMix64& rng) {
    // positive rationals roughly in [1/10, 10]
    long num = static_cast<long>(rng.next_u64() % 20) + 1;
    long den = static_cast<long>(rng.next_u64() % 10) + 1;
    return make_rat(num, den);
}

inline Marking random_bag(SplitMix64& rng, int places, int max_weight, bool allow_empty) {
    Marking bag(places, 0);
    for (;;) {
        for (int p = 0; p < places; ++p) {
            std::uint64_t roll = rng.next_u64() % 10;
            if (roll < 6)
                bag[p] = 0;
            else
                bag[p] = static_cast<std::int64_t>(roll % max_weight) + 1;
        }
        bool empty = true;
        for (auto v : bag) empty &= (v == 0);
        if (!empty || allow_empty) return bag;
    }
}

// Arbitrary net: random bags, duplicate pairs merged, self-loops skipped.
inline PetriNet random_net(SplitMix64& rng, int max_places = 6, int max_transitions = 8,
                           int max_weight = 2) {
    int np = 2 + static_cast<int>(rng.next_u64() % (max_places - 1));
    int nt = 1 + static_cast<int>(rng.next_u64() % max_transitions);
    PetriNet net;
    for (int p = 0; p < np; ++p) net.places.push_back("p" + std::to_string(p + 1));
    net.kinetics = (rng.next_u64() % 2 == 0) ? Kinetics::Constant : Kinetics::MassAction;
    std::set<std::pair<Marking, Marking>> seen;
    for (int t = 0; t < nt; ++t) {
        Marking in = random_bag(rng, np, max_weight, true);
        Marking out = random_bag(rng, np, max_weight, true);
        bool both_empty = true;
        for (int p = 0; p < np; ++p) both_empty &= (in[p] == 0 && out[p] == 0);
        if (in == out || both_empty || seen.count({in, out})) continue;
        seen.insert({in, out});
        net.transitions.push_back(
            {"t" + std::to_string(net.transitions.size() + 1), in, out, random_rate(rng)});
    }
    if (net.transitions.empty())
        net.transitions.push_back({"t1", Marking(np, 0), [&] {
                                       Marking m(np, 0);
                                       m[0] = 1;
                                       return m;
                                   }(),
                                   random_rate(rng)});
    net.initial_marking.assign(np, 0);
    for (int p = 0; p < np; ++p) net.initial_marking[p] = static_cast<std::int64_t>(rng.next_u64() % 3);
    return net;
}

// Weakly reversible by construction: distinct complexes arranged in directed
// cycles (one cycle per component), plus optional chords inside a component.
inline PetriNet random_wr_net(SplitMix64& rng, int max_places = 6, int max_complexes = 6,
                              int max_weight = 2) {
    int np = 2 + static_cast<int>(rng.next_u64() % (max_places - 1));
    PetriNet net;
    for (int p = 0; p < np; ++p) net.places.push_back("p" + std::to_string(p + 1));
    net.kinetics = (rng.next_u64() % 2 == 0) ? Kinetics::Constant : Kinetics::MassAction;

    int ncomplex = 2 + static_cast<int>(rng.next_u64() % (max_complexes - 1));
    std::vector<Marking> cs;
    std::set<Marking> seen;
    for (int i = 0; i < ncomplex * 4 && static_cast<int>(cs.size()) < ncomplex; ++i) {
        Marking c = random_bag(rng, np, max_weight, cs.empty() && rng.next_u64() % 4 == 0);
        if (!seen.count(c)) {
            seen.insert(c);
            cs.push_back(c);
        }
    }
    // split into cycles of length >= 2
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    while (i < cs.size()) {
        std::size_t remain = cs.size() - i;
        std::size_t len = remain < 4 ? remain : 2 + rng.next_u64() % 3;
        if (remain - len == 1) len = remain;
        if (len < 2) break;
        std::vector<int> cycle;
        for (std::size_t k = 0; k < len; ++k) cycle.push_back(static_cast<int>(i + k));
        cycles.push_back(cycle);
        i += len;
    }
    if (cycles.empty()) {
        // fall back to one 2-cycle on fresh singleton complexes
        Marking a(np, 0), b(np, 0);
        a[0] = 1;
        b[np - 1] = 2;
        cs = {a, b};
        cycles = {{0, 1}};
    }
    int tid = 0;
    std::set<std::pair<int, int>> arcs;
    auto add_arc = [&](int u, int v) {
        if (u == v || arcs.count({u, v})) return;
        arcs.insert({u, v});
        net.transitions.push_back({"t" + std::to_string(++tid), cs[u], cs[v], random_rate(rng)});
    };
    for (const auto& cycle : cycles) {
        for (std::size_t k = 0; k < cycle.size(); ++k)
            add_arc(cycle[k], cycle[(k + 1) % cycle.size()]);
        // chords keep strong connectivity
        if (cycle.size() > 2 && rng.next_u64() % 2 == 0)
            add_arc(cycle[rng.next_u64() % cycle.size()], cycle[rng.next_u64() % cycle.size()]);
    }
    net.initial_marking.assign(np, 0);
    for (int p = 0; p < np; ++p) net.initial_marking[p] = static_cast<std::int64_t>(rng.next_u64() % 3);
    return net;
}

// Strongly connected GSM on a cycle of places (closed: a state machine) or,
// when `open` is set, with the empty complex spliced into the cycle.
inline PetriNet random_wr_gsm(SplitMix64& rng, bool open, int max_places = 5) {
    int np = 2 + static_cast<int>(rng.next_u64() % (max_places - 1));
    PetriNet net;
    for (int p = 0; p < np; ++p) net.places.push_back("q" + std::to_string(p + 1));
    net.kinetics = Kinetics::Constant;
    // nodes 0..np-1 are places; node np is the empty complex when open
    int nn = np + (open ? 1 : 0);
    auto bag = [&](int node) {
        Marking m(np, 0);
        if (node < np) m[node] = 1;
        return m;
    };
    int tid = 0;
    std::set<std::pair<int, int>> arcs;
    auto add_arc = [&](int u, int v) {
        if (u == v || arcs.count({u, v})) return;
        arcs.insert({u, v});
        net.transitions.push_back({"t" + std::to_string(++tid), bag(u), bag(v), random_rate(rng)});
    };
    for (int u = 0; u < nn; ++u) add_arc(u, (u + 1) % nn);
    int extra = static_cast<int>(rng.next_u64() % (nn + 1));
    for (int e = 0; e < extra; ++e)
        add_arc(static_cast<int>(rng.next_u64() % nn), static_cast<int>(rng.next_u64() % nn));
    net.initial_marking.assign(np, 0);
    std::int64_t tokens = 1 + static_cast<std::int64_t>(rng.next_u64() % 3);
    for (std::int64_t k = 0; k < tokens; ++k)
        net.initial_marking[rng.next_u64() % np] += 1;
    return net;
}

// WR free-choice net built by expanding the places of a WR state machine
// into disjoint complexes of size 1..2.
inline PetriNet random_wr_free_choice(SplitMix64& rng, int max_macro = 4) {
    PetriNet sm = random_wr_gsm(rng, false, max_macro);
    int macro = static_cast<int>(sm.places.size());
    PetriNet net;
    net.kinetics = Kinetics::Constant;
    std::vector<std::vector<int>> expand(macro);
    for (int m = 0; m < macro; ++m) {
        int size = 1 + static_cast<int>(rng.next_u64() % 2);
        for (int k = 0; k < size; ++k) {
            expand[m].push_back(static_cast<int>(net.places.size()));
            net.places.push_back("p" + std::to_string(net.places.size() + 1));
        }
    }
    auto bag = [&](const Marking& sm_bag) {
        Marking out(net.places.size(), 0);
        for (int m = 0; m < macro; ++m)
            if (sm_bag[m] > 0)
                for (int p : expand[m]) out[p] = 1;
        return out;
    };
    for (const auto& t : sm.transitions)
        net.transitions.push_back({t.id, bag(t.input), bag(t.output), t.rate});
    net.initial_marking.assign(net.places.size(), 0);
    for (int m = 0; m < macro; ++m)
        for (int p : expand[m]) net.initial_marking[p] = sm.initial_marking[m];
    return net;
}

// Least-squares fit of log pi(x) = log C + sum_p x_p log a_p over the support
// of a distribution, then the max relative pointwise error of the fitted
// product-form ansatz.  A genuinely product-form distribution fits to within
// numeric noise; a non-product-form one stays bounded away from it.
inline double best_product_form_fit_error(const PetriNet& net, const MarkingGraph& graph,
                                          const StationaryDistribution& dist) {
    int n = static_cast<int>(dist.support.size());
    int np = static_cast<int>(net.places.size());
    Eigen::MatrixXd design(n, np + 1);
    Eigen::VectorXd target(n);
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < np; ++p) design(i, p) = static_cast<double>(dist.support[i][p]);
        design(i, np) = 1.0;
        target(i) = std::log(dist.probabilities[i]);
    }
    Eigen::VectorXd coeff = design.colPivHouseholderQr().solve(target);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double fitted = std::exp(design.row(i).dot(coeff));
        double denom = std::max(fitted, dist.probabilities[i]);
        worst = std::max(worst, std::abs(fitted - dist.probabilities[i]) / denom);
    }
    (void)graph;
    return worst;
}

}  // namespace pftest
