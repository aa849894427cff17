#pragma once

// Independent ground truth: the exact CTMC generator on the finite reachable
// set, a dense LU stationary solve, and a seeded continuous-time simulation
// of the race policy.
//
// PRNG: SplitMix64 (Steele, Lea & Flood's splittable generator).  State
// advances by the golden-gamma constant and the output is a finalized mix of
// the state; it is seedable, splittable (a split draws a child seed from the
// parent stream) and gives bit-identical streams on every platform.
// Exponential variates use the inverse CDF -log(1-U)/lambda.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "petriform/product_form.hpp"
#include "petriform/reach.hpp"

namespace petriform {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double next_exponential(double rate) { return -std::log1p(-next_double()) / rate; }
    SplitMix64 split() { return SplitMix64(next_u64()); }
};

struct Generator {
    Eigen::MatrixXd q;             // row sums zero, off-diagonals >= 0
    std::vector<Marking> nodes;    // shared index space with the marking graph
    std::map<Marking, int> index;
};

namespace detail {
inline Generator build_generator(const PetriNet& net, const MarkingGraph& graph) {
    Generator gen;
    gen.nodes = graph.nodes;
    gen.index = graph.index;
    int n = static_cast<int>(graph.nodes.size());
    gen.q = Eigen::MatrixXd::Zero(n, n);
    for (const auto& arc : graph.arcs) {
        double r = to_double(rate(net, graph.nodes[arc.from], arc.transition));
        gen.q(arc.from, arc.to) += r;
        gen.q(arc.from, arc.from) -= r;
    }
    return gen;
}
}  // namespace detail

inline Generator generator(const PetriNet& net, const MarkingGraph& graph) {
    if (graph.truncated)
        throw TruncatedError("generator requires a non-truncated reachability set");
    return detail::build_generator(net, graph);
}

// Diagnostic-only variant for truncated explorations: outgoing rates into
// unexplored markings are dropped, i.e. the chain is reflected at the cap.
inline Generator generator_reflecting(const PetriNet& net, const MarkingGraph& graph) {
    return detail::build_generator(net, graph);
}

// Dense stationary solve by GTH elimination (Grassmann-Taksar-Heyman).  The
// elimination uses only additions, multiplications and divisions of
// nonnegative numbers, so every stationary probability comes out with full
// relative accuracy even when the distribution spans many orders of
// magnitude; a plain LU on the balance system cannot achieve that.
inline StationaryDistribution stationary_numeric(const Generator& gen) {
    int n = static_cast<int>(gen.nodes.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && gen.q(i, j) > 0) edges.emplace_back(i, j);
    if (!is_strongly_connected(n, edges))
        throw NotIrreducibleError("generator is not irreducible");

    Eigen::MatrixXd a = gen.q;
    std::vector<double> exit_sum(n, 0.0);
    for (int k = n - 1; k >= 1; --k) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += a(k, j);
        if (!(s > 0)) throw SingularBeyondToleranceError("GTH pivot vanished; chain not irreducible");
        exit_sum[k] = s;
        for (int i = 0; i < k; ++i) {
            double f = a(i, k) / s;
            if (f == 0.0) continue;
            for (int j = 0; j < k; ++j)
                if (j != i) a(i, j) += f * a(k, j);
        }
    }
    std::vector<double> pi(n, 0.0);
    pi[0] = 1.0;
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += pi[i] * a(i, k);
        pi[k] = acc / exit_sum[k];
    }
    double sum = 0.0;
    for (double p : pi) sum += p;

    StationaryDistribution d;
    d.support = gen.nodes;
    d.probabilities.resize(n);
    for (int i = 0; i < n; ++i) d.probabilities[i] = pi[i] / sum;

    Eigen::Map<const Eigen::VectorXd> pv(d.probabilities.data(), n);
    double residual = (pv.transpose() * gen.q).cwiseAbs().maxCoeff();
    if (!pv.allFinite() || residual > 1e-10)
        throw SingularBeyondToleranceError("stationary solve residual " + std::to_string(residual));
    d.normalizing_constant = 1.0;
    return d;
}

// Stationary diagnostic for reflected truncations.  Dropping the arcs that
// leave the explored set can strand a few boundary markings (no enabled
// transition stays inside), so the chain is first peeled down to the largest
// set that still communicates with the origin before solving.
inline StationaryDistribution truncated_stationary_diagnostic(const PetriNet& net,
                                                              const MarkingGraph& graph) {
    int n = static_cast<int>(graph.nodes.size());
    std::vector<int> keep(n);
    std::iota(keep.begin(), keep.end(), 0);
    for (;;) {
        std::vector<int> local(n, -1);
        for (std::size_t k = 0; k < keep.size(); ++k) local[keep[k]] = static_cast<int>(k);
        std::vector<std::pair<int, int>> edges;
        for (const auto& arc : graph.arcs)
            if (local[arc.from] >= 0 && local[arc.to] >= 0 && arc.from != arc.to)
                edges.emplace_back(local[arc.from], local[arc.to]);
        auto comp = strongly_connected_components(static_cast<int>(keep.size()), edges);
        int origin_comp = comp[local[0]];
        std::vector<int> next;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (comp[k] == origin_comp) next.push_back(keep[k]);
        if (next.size() == keep.size()) break;
        if (next.empty()) throw NotIrreducibleError("origin does not communicate after reflection");
        keep = std::move(next);
    }
    Generator gen;
    gen.q = Eigen::MatrixXd::Zero(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
    std::vector<int> local(n, -1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        local[keep[k]] = static_cast<int>(k);
        gen.nodes.push_back(graph.nodes[keep[k]]);
        gen.index[graph.nodes[keep[k]]] = static_cast<int>(k);
    }
    for (const auto& arc : graph.arcs) {
        if (local[arc.from] < 0 || local[arc.to] < 0) continue;
        double r = to_double(rate(net, graph.nodes[arc.from], arc.transition));
        gen.q(local[arc.from], local[arc.to]) += r;
        gen.q(local[arc.from], local[arc.from]) -= r;
    }
    return stationary_numeric(gen);
}

// Max relative pointwise deviation between two distributions on the same
// support set.
inline double compare(const StationaryDistribution& a, const StationaryDistribution& b) {
    if (a.support.size() != b.support.size())
        throw SupportMismatchError("distributions have different support sizes");
    std::map<Marking, double> bmap;
    for (std::size_t i = 0; i < b.support.size(); ++i) bmap[b.support[i]] = b.probabilities[i];
    double worst = 0.0;
    for (std::size_t i = 0; i < a.support.size(); ++i) {
        auto it = bmap.find(a.support[i]);
        if (it == bmap.end()) throw SupportMismatchError("support sets differ");
        double x = a.probabilities[i], y = it->second;
        double denom = std::max(x, y);
        if (denom > 0) worst = std::max(worst, std::abs(x - y) / denom);
    }
    return worst;
}

inline double total_variation(const std::map<Marking, double>& a,
                              const std::map<Marking, double>& b) {
    double acc = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            acc += std::abs(ia->second);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            acc += std::abs(ib->second);
            ++ib;
        } else {
            acc += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return acc / 2.0;
}

struct SimulationResult {
    std::uint64_t seed = 0;
    double horizon = 0.0;
    std::map<Marking, double> occupation;  // time-weighted, sums to 1
    std::uint64_t jump_count = 0;
    bool deadlocked = false;
};

// Continuous-time race: the holding time at M is Exponential(sum of enabled
// rates) and the winning transition is drawn proportionally to its rate.
inline SimulationResult simulate(const PetriNet& net, std::uint64_t seed, double horizon) {
    if (!(horizon > 0)) throw PreconditionError("simulation horizon must be positive");
    SplitMix64 rng(seed);
    SimulationResult result;
    result.seed = seed;
    result.horizon = horizon;

    Marking current = net.initial_marking;
    double t = 0.0;
    std::vector<double> rates(net.transitions.size());
    while (t < horizon) {
        double total = 0.0;
        for (std::size_t i = 0; i < net.transitions.size(); ++i) {
            rates[i] = to_double(rate(net, current, static_cast<int>(i)));
            total += rates[i];
        }
        if (total <= 0.0) {
            result.occupation[current] += horizon - t;
            result.deadlocked = true;
            break;
        }
        double hold = rng.next_exponential(total);
        if (t + hold >= horizon) {
            result.occupation[current] += horizon - t;
            break;
        }
        result.occupation[current] += hold;
        t += hold;
        double pick = rng.next_double() * total;
        int chosen = -1;
        for (std::size_t i = 0; i < rates.size(); ++i) {
            if (rates[i] <= 0.0) continue;
            chosen = static_cast<int>(i);
            if (pick < rates[i]) break;
            pick -= rates[i];
        }
        current = fire(net, current, chosen);
        ++result.jump_count;
    }
    for (auto& [m, w] : result.occupation) w /= horizon;
    return result;
}

}  // namespace petriform
