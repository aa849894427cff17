#pragma once

// Product-form invariant measures pi(x) = Phi(x)^-1 prod_p u_p^{x_p} and
// their normalization over finite reachability sets.  Everything is evaluated
// in log space; normalization uses log-sum-exp.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "petriform/net.hpp"
#include "petriform/reach.hpp"

namespace petriform {

// General Phi hook from the rate shape; only the two instantiations used by
// the paper-level kinetics are shipped (Phi == 1 and Phi(x) = prod x_p!).
using LogPhi = std::function<double(const Marking&)>;

inline double log_phi_constant(const Marking&) { return 0.0; }

inline double log_phi_mass_action(const Marking& m) {
    double acc = 0.0;
    for (auto v : m) acc += std::lgamma(static_cast<double>(v) + 1.0);
    return acc;
}

struct InvariantMeasure {
    std::vector<double> log_u;
    Kinetics kinetics = Kinetics::Constant;
    LogPhi log_phi = log_phi_constant;

    double log_pi(const Marking& m) const {
        double acc = -log_phi(m);
        for (std::size_t p = 0; p < m.size(); ++p) acc += static_cast<double>(m[p]) * log_u[p];
        return acc;
    }
    double pi(const Marking& m) const { return std::exp(log_pi(m)); }
};

inline InvariantMeasure invariant_measure(const std::vector<double>& u, Kinetics kinetics) {
    InvariantMeasure m;
    m.log_u.reserve(u.size());
    for (double x : u) {
        if (!(x > 0)) throw NonPositiveInputError("invariant measure requires strictly positive u");
        m.log_u.push_back(std::log(x));
    }
    m.kinetics = kinetics;
    m.log_phi = kinetics == Kinetics::MassAction ? LogPhi(log_phi_mass_action)
                                                 : LogPhi(log_phi_constant);
    return m;
}

struct StationaryDistribution {
    std::vector<Marking> support;
    std::vector<double> probabilities;
    double normalizing_constant = 0.0;  // K with pi/K the distribution
};

inline StationaryDistribution normalize(const InvariantMeasure& measure, const MarkingGraph& graph) {
    if (graph.truncated)
        throw TruncatedError("cannot normalize over a truncated reachability set");
    if (!marking_graph_strongly_connected(graph))
        throw NotIrreducibleError("marking graph is not strongly connected");
    StationaryDistribution d;
    d.support = graph.nodes;
    std::vector<double> logs(graph.nodes.size());
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        logs[i] = measure.log_pi(graph.nodes[i]);
        max_log = std::max(max_log, logs[i]);
    }
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - max_log);
    double log_k = max_log + std::log(sum);
    d.normalizing_constant = std::exp(log_k);
    d.probabilities.resize(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) d.probabilities[i] = std::exp(logs[i] - log_k);
    return d;
}

enum class Ergodicity { ErgodicFinite, ErgodicMassAction, ConditionallyErgodic, Unknown };

struct ErgodicityReport {
    Ergodicity verdict = Ergodicity::Unknown;
    std::string note;
};

inline ErgodicityReport ergodicity_report(const PetriNet& net, const std::vector<double>& u,
                                          const MarkingGraph& graph) {
    for (double x : u)
        if (!(x > 0)) throw NonPositiveInputError("ergodicity report requires strictly positive u");
    ErgodicityReport r;
    if (net.kinetics == Kinetics::MassAction) {
        double mass = 0.0;
        for (double x : u) mass += x;
        r.verdict = Ergodicity::ErgodicMassAction;
        r.note = "mass-action kinetics: total mass exp(sum u_p) = " +
                 std::to_string(std::exp(mass)) + " is finite";
        return r;
    }
    if (!graph.truncated && marking_graph_strongly_connected(graph)) {
        r.verdict = Ergodicity::ErgodicFinite;
        r.note = "finite strongly connected marking graph (" + std::to_string(graph.nodes.size()) +
                 " states)";
        return r;
    }
    if (graph.truncated) {
        InvariantMeasure m = invariant_measure(u, net.kinetics);
        double explored = 0.0;
        for (const auto& node : graph.nodes) explored += m.pi(node);
        r.verdict = Ergodicity::ConditionallyErgodic;
        r.note = "state space truncated; ergodicity depends on the rates; explored mass " +
                 std::to_string(explored) + " is a lower bound on the total";
        return r;
    }
    r.verdict = Ergodicity::Unknown;
    r.note = "finite but not strongly connected marking graph";
    return r;
}

// Relative residual of the balance equations at each reachable marking,
// maximised over the graph.  When `interior_only` is set, markings with a
// potential predecessor or successor outside the explored set are skipped
// (useful on truncations).
inline double balance_residual(const PetriNet& net, const InvariantMeasure& measure,
                               const MarkingGraph& graph, bool interior_only = false) {
    double worst = 0.0;
    for (const auto& m : graph.nodes) {
        double outflow = 0.0, inflow = 0.0;
        bool interior = true;
        double pim = measure.pi(m);
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            if (is_enabled(net, m, static_cast<int>(t))) {
                Marking next = fire(net, m, static_cast<int>(t));
                if (graph.index_of(next) < 0) interior = false;
                outflow += pim * to_double(rate(net, m, static_cast<int>(t)));
            }
            // predecessor candidate m' = m + I(t) - O(t), valid if m >= O(t)
            const auto& tr = net.transitions[t];
            Marking prev = m;
            bool ok = true;
            for (std::size_t p = 0; p < m.size(); ++p) {
                prev[p] += tr.input[p] - tr.output[p];
                if (prev[p] < 0) ok = false;
            }
            if (!ok) continue;
            if (!is_enabled(net, prev, static_cast<int>(t))) continue;
            if (graph.index_of(prev) < 0) {
                interior = false;
                continue;
            }
            inflow += measure.pi(prev) * to_double(rate(net, prev, static_cast<int>(t)));
        }
        if (interior_only && !interior) continue;
        double denom = std::max(outflow, inflow);
        if (denom > 0) worst = std::max(worst, std::abs(outflow - inflow) / denom);
    }
    return worst;
}

}  // namespace petriform
