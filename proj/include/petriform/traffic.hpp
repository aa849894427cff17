#pragma once

// Traffic equations.  The linear traffic equations (LTE) are the balance
// equations of the reaction process, one unknown per complex; they are solved
// exactly over the rationals per weak component of the reaction graph.  When
// the deficiency is zero a rational matrix B with BN = A transfers an LTE
// solution to a strictly positive solution of the non-linear traffic
// equations (NLTE) via  log u_p = sum_C B_{C,p} log v_C.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "petriform/matrix.hpp"
#include "petriform/net.hpp"
#include "petriform/structure.hpp"

namespace petriform {

struct LteSolution {
    std::vector<Rat> v;  // indexed like complexes(net); all entries > 0
    std::string normalization_note;
};

// Attempts the exact per-component solve regardless of weak reversibility and
// then checks strict positivity, so the equivalence "strictly positive LTE
// solution <=> WR" can be exercised as two independent routes.
inline std::optional<LteSolution> solve_lte(const PetriNet& net) {
    ReactionGraph g = reaction_graph(net);
    int nc = static_cast<int>(g.nodes.size());
    std::vector<Rat> v(nc, Rat(0));
    Complex empty_complex(net.places.size(), 0);
    std::string note;

    for (int comp = 0; comp < g.component_count; ++comp) {
        std::vector<int> members;
        for (int i = 0; i < nc; ++i)
            if (g.component[i] == comp) members.push_back(i);
        int m = static_cast<int>(members.size());
        auto local = [&](int node) {
            for (int k = 0; k < m; ++k)
                if (members[k] == node) return k;
            return -1;
        };
        // anchor: the empty complex if present, else the first complex of the
        // component in the global (lexicographic) order
        int anchor = 0;
        for (int k = 0; k < m; ++k)
            if (g.nodes[members[k]] == empty_complex) anchor = k;

        // balance rows: for each complex c, sum_u y_u q(u,c) - y_c * out(c) = 0
        RationalMatrix sys(m + 1, m);
        for (const auto& arc : g.arcs) {
            if (g.component[arc.from] != comp) continue;
            const Rat& kappa = net.transitions[arc.transition].rate;
            sys.at(local(arc.to), local(arc.from)) += kappa;
            sys.at(local(arc.from), local(arc.from)) -= kappa;
        }
        for (int k = 0; k < m; ++k) sys.at(m, k) = (k == anchor) ? Rat(1) : Rat(0);
        std::vector<Rat> rhs(m + 1, Rat(0));
        rhs[m] = 1;

        auto sol = solve_exact(sys, rhs);
        if (!sol) return std::nullopt;
        for (int k = 0; k < m; ++k) {
            if ((*sol)[k] <= 0) return std::nullopt;
            v[members[k]] = (*sol)[k];
        }
        note += (note.empty() ? "" : "; ") + std::string("component ") + std::to_string(comp) +
                " scaled so v(" + format_complex(net, g.nodes[members[anchor]]) + ") = 1";
    }
    return LteSolution{std::move(v), std::move(note)};
}

// Exact verification of the LTE at a candidate vector.
inline bool satisfies_lte(const PetriNet& net, const std::vector<Rat>& v) {
    ReactionGraph g = reaction_graph(net);
    for (int c = 0; c < static_cast<int>(g.nodes.size()); ++c) {
        Rat lhs(0), rhs(0);
        for (const auto& arc : g.arcs) {
            if (arc.from == c) lhs += net.transitions[arc.transition].rate;
            if (arc.to == c) rhs += net.transitions[arc.transition].rate * v[arc.from];
        }
        if (v[c] * lhs != rhs) return false;
    }
    return true;
}

// B with BN = A, which exists iff the deficiency is zero.  Row C of B solves
// b_C N = A_C; all rows are solved in one elimination of N^T with the free
// variables pinned to zero under the fixed column-pivot order.
inline std::optional<RationalMatrix> solve_b_matrix(const PetriNet& net) {
    StructureReport rep = analyze_structure(net);
    if (rep.deficiency != 0) return std::nullopt;
    RationalMatrix n = incidence_N(net);
    RationalMatrix a = incidence_A(net);
    auto bt = solve_exact(n.transposed(), a.transposed());
    if (!bt)
        throw std::logic_error("deficiency 0 but BN=A inconsistent; structural invariant violated");
    RationalMatrix b = bt->transposed();
    if (!(b * n == a))
        throw std::logic_error("B*N != A after solve; structural invariant violated");
    return b;
}

struct NlteSolution {
    std::vector<double> log_u;      // per place
    std::vector<double> u;          // exp(log_u)
    std::vector<double> residuals;  // per complex, relative residual of the NLTE
    double max_residual = 0.0;
};

// Relative residual of the NLTE at a strictly positive u, maximised over
// complexes.  Out parameter variant keeps the per-complex values.
inline double verify_nlte(const PetriNet& net, const std::vector<double>& u,
                          std::vector<double>* per_complex = nullptr) {
    for (double x : u)
        if (!(x > 0)) throw NonPositiveInputError("verify_nlte requires strictly positive u");
    ReactionGraph g = reaction_graph(net);
    auto bag_product = [&](const Marking& bag) {
        double prod = 1.0;
        for (std::size_t p = 0; p < bag.size(); ++p)
            if (bag[p] != 0) prod *= std::pow(u[p], static_cast<double>(bag[p]));
        return prod;
    };
    double worst = 0.0;
    if (per_complex) per_complex->assign(g.nodes.size(), 0.0);
    for (int c = 0; c < static_cast<int>(g.nodes.size()); ++c) {
        double lhs = 0.0, rhs = 0.0;
        for (const auto& arc : g.arcs) {
            if (arc.from == c) lhs += to_double(net.transitions[arc.transition].rate);
            if (arc.to == c)
                rhs += to_double(net.transitions[arc.transition].rate) *
                       bag_product(net.transitions[arc.transition].input);
        }
        lhs *= bag_product(g.nodes[c]);
        double denom = std::max(lhs, rhs);
        double res = denom == 0.0 ? 0.0 : std::abs(lhs - rhs) / denom;
        if (per_complex) (*per_complex)[c] = res;
        worst = std::max(worst, res);
    }
    return worst;
}

inline NlteSolution nlte_from_lte(const PetriNet& net, const LteSolution& lte,
                                  const RationalMatrix& b, double tol = 1e-9) {
    int np = static_cast<int>(net.places.size());
    NlteSolution out;
    out.log_u.assign(np, 0.0);
    for (int p = 0; p < np; ++p) {
        double acc = 0.0;
        for (int c = 0; c < b.rows(); ++c) {
            if (b.at(c, p) == 0) continue;
            acc += to_double(b.at(c, p)) * std::log(to_double(lte.v[c]));
        }
        out.log_u[p] = acc;
    }
    out.u.assign(np, 0.0);
    for (int p = 0; p < np; ++p) out.u[p] = std::exp(out.log_u[p]);
    out.max_residual = verify_nlte(net, out.u, &out.residuals);
    if (out.max_residual > tol)
        throw ResidualTooLargeError("NLTE residual " + std::to_string(out.max_residual) +
                                    " exceeds tolerance");
    return out;
}

enum class NlteStatus { Solved, NotWeaklyReversible, DeficiencyPositiveUnknown };

struct NlteOutcome {
    NlteStatus status = NlteStatus::Solved;
    std::optional<NlteSolution> solution;
    std::optional<LteSolution> lte;
    std::optional<RationalMatrix> b_matrix;
    int deficiency = 0;
};

// Full pipeline: WR and deficiency 0 guarantee a strictly positive NLTE
// solution; non-WR nets never have one; WR nets with positive deficiency are
// genuinely rate-dependent and reported as unknown.
inline NlteOutcome solve_nlte(const PetriNet& net, double tol = 1e-9) {
    NlteOutcome out;
    StructureReport rep = analyze_structure(net);
    out.deficiency = rep.deficiency;
    if (!rep.weakly_reversible) {
        out.status = NlteStatus::NotWeaklyReversible;
        return out;
    }
    if (rep.deficiency > 0) {
        out.status = NlteStatus::DeficiencyPositiveUnknown;
        return out;
    }
    out.lte = solve_lte(net);
    if (!out.lte) throw std::logic_error("WR net without positive LTE solution");
    out.b_matrix = solve_b_matrix(net);
    if (!out.b_matrix) throw std::logic_error("deficiency 0 net without B matrix");
    out.solution = nlte_from_lte(net, *out.lte, *out.b_matrix, tol);
    out.status = NlteStatus::Solved;
    return out;
}

// v_C = prod_p u_p^{C_p}: transfers an NLTE solution back to the LTE side.
inline std::vector<double> lte_from_nlte(const PetriNet& net, const std::vector<double>& u) {
    ReactionGraph g = reaction_graph(net);
    std::vector<double> v(g.nodes.size(), 1.0);
    for (std::size_t c = 0; c < g.nodes.size(); ++c)
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (g.nodes[c][p] != 0) v[c] *= std::pow(u[p], static_cast<double>(g.nodes[c][p]));
    return v;
}

}  // namespace petriform
