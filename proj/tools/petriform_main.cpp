// petriform: structural product-form analysis of Markovian Petri nets.
//
// Subcommands: analyze, solve, invariant, verify, simulate, reduce, export.
// Every subcommand reads a net file, emits a human-readable report or (with
// --json) a versioned JSON report, and exits 0 iff no error-level diagnostic
// was raised.  Exit codes: 2 parse error, 3 precondition violation, 4 numeric
// failure, 64 usage error.

#include "CLI11.hpp"
#include "petriform/petriform.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace pf = petriform;
using pf::json;

namespace {

struct GlobalOptions {
    double tol = 1e-9;
    std::size_t cap = 100000;
    std::uint64_t seed = 1;
    bool emit_json = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pf::PreconditionError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedNet {
    pf::PetriNet net;
    std::vector<pf::Diagnostic> diagnostics;
};

LoadedNet load_net(const std::string& path) {
    LoadedNet l;
    l.net = pf::parse_net(read_file(path), &l.diagnostics);
    return l;
}

json diagnostics_to_json(const std::vector<pf::Diagnostic>& diags) {
    json arr = json::array();
    for (const auto& d : diags)
        arr.push_back({{"level", d.level == pf::Diagnostic::Level::Warning ? "warning" : "error"},
                       {"message", d.message}});
    return arr;
}

void emit(const GlobalOptions& opts, const std::string& command, const LoadedNet& l,
          const json& payload, const std::string& human) {
    if (opts.emit_json) {
        json report;
        report["schema_version"] = pf::kSchemaVersion;
        report["command"] = command;
        report["net_digest"] = pf::net_digest(l.net);
        report["payload"] = payload;
        report["diagnostics"] = diagnostics_to_json(l.diagnostics);
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& d : l.diagnostics) std::cerr << "warning: " << d.message << "\n";
        std::cout << human;
    }
}

std::string ergodicity_name(pf::Ergodicity e) {
    switch (e) {
        case pf::Ergodicity::ErgodicFinite: return "ErgodicFinite";
        case pf::Ergodicity::ErgodicMassAction: return "ErgodicMassAction";
        case pf::Ergodicity::ConditionallyErgodic: return "ConditionallyErgodic";
        default: return "Unknown";
    }
}

int run_analyze(const GlobalOptions& opts, const std::string& file, const std::string& dot) {
    LoadedNet l = load_net(file);
    if (dot == "reaction") {
        std::cout << pf::dot_reaction_graph(l.net);
        return 0;
    }
    if (dot == "marking") {
        std::cout << pf::dot_marking_graph(l.net, pf::reachability(l.net, opts.cap));
        return 0;
    }
    auto rep = pf::analyze_structure(l.net);
    json payload = pf::structure_report_to_json(rep, l.net);
    std::ostringstream h;
    h << "places: " << l.net.places.size() << "  transitions: " << l.net.transitions.size()
      << "\n"
      << "complexes: " << rep.complex_count << "  components: " << rep.component_count << "\n"
      << "rank(N) = " << rep.rank_n << "  rank(A) = " << rep.rank_a << "\n"
      << "deficiency = " << rep.deficiency << "\n"
      << "weakly reversible: " << (rep.weakly_reversible ? "yes" : "no") << "\n"
      << "classes: " << (rep.weighted ? "weighted" : "non-weighted")
      << (rep.free_choice ? ", free-choice" : "")
      << (rep.generalized_state_machine ? ", GSM" : "")
      << (rep.state_machine ? ", SM" : "") << "\n";
    if (!rep.clusters.empty()) {
        h << "clusters:";
        for (const auto& cl : rep.clusters) {
            h << " {";
            for (std::size_t i = 0; i < cl.size(); ++i) h << (i ? " " : "") << cl[i];
            h << "}";
        }
        h << "\n";
    }
    emit(opts, "analyze", l, payload, h.str());
    return 0;
}

int run_solve(const GlobalOptions& opts, const std::string& file, bool show_b) {
    LoadedNet l = load_net(file);
    auto outcome = pf::solve_nlte(l.net, opts.tol);
    auto cs = pf::complexes(l.net);

    json payload;
    std::ostringstream h;
    switch (outcome.status) {
        case pf::NlteStatus::Solved: {
            payload["status"] = "solved";
            payload["deficiency"] = outcome.deficiency;
            json v = json::object();
            for (std::size_t c = 0; c < cs.size(); ++c)
                v[pf::format_complex(l.net, cs[c])] = pf::to_string(outcome.lte->v[c]);
            payload["lte"] = v;
            payload["lte_normalization"] = outcome.lte->normalization_note;
            json u = json::object(), logu = json::object(), res = json::object();
            for (std::size_t p = 0; p < l.net.places.size(); ++p) {
                u[l.net.places[p]] = outcome.solution->u[p];
                logu[l.net.places[p]] = outcome.solution->log_u[p];
            }
            for (std::size_t c = 0; c < cs.size(); ++c)
                res[pf::format_complex(l.net, cs[c])] = outcome.solution->residuals[c];
            payload["u"] = u;
            payload["log_u"] = logu;
            payload["residuals"] = res;
            payload["max_residual"] = outcome.solution->max_residual;
            if (outcome.b_matrix) {
                json b = json::array();
                for (int r = 0; r < outcome.b_matrix->rows(); ++r) {
                    json row = json::array();
                    for (int c = 0; c < outcome.b_matrix->cols(); ++c)
                        row.push_back(pf::to_string(outcome.b_matrix->at(r, c)));
                    b.push_back(row);
                }
                payload["b_matrix"] = b;
            }
            h << "LTE solution (per complex):\n";
            for (std::size_t c = 0; c < cs.size(); ++c)
                h << "  v(" << pf::format_complex(l.net, cs[c]) << ") = "
                  << pf::to_string(outcome.lte->v[c]) << "\n";
            if (show_b && outcome.b_matrix) {
                h << "B matrix (complexes x places), BN = A:\n";
                for (int r = 0; r < outcome.b_matrix->rows(); ++r) {
                    h << " ";
                    for (int c = 0; c < outcome.b_matrix->cols(); ++c)
                        h << " " << pf::to_string(outcome.b_matrix->at(r, c));
                    h << "\n";
                }
            }
            h << "NLTE solution (per place):\n";
            for (std::size_t p = 0; p < l.net.places.size(); ++p)
                h << "  u(" << l.net.places[p] << ") = " << std::setprecision(17)
                  << outcome.solution->u[p] << "\n";
            h << "max NLTE residual: " << outcome.solution->max_residual << "\n";
            break;
        }
        case pf::NlteStatus::NotWeaklyReversible:
            payload["status"] = "no-solution";
            payload["reason"] = "NotWeaklyReversible";
            payload["deficiency"] = outcome.deficiency;
            h << "no strictly positive NLTE solution: net is not weakly reversible\n";
            break;
        case pf::NlteStatus::DeficiencyPositiveUnknown:
            payload["status"] = "unknown";
            payload["reason"] = "DeficiencyPositive";
            payload["deficiency"] = outcome.deficiency;
            h << "existence unknown: net is weakly reversible but deficiency = "
              << outcome.deficiency << " (rate-dependent)\n";
            break;
    }
    emit(opts, "solve", l, payload, h.str());
    return 0;
}

int run_invariant(const GlobalOptions& opts, const std::string& file, bool do_normalize) {
    LoadedNet l = load_net(file);
    auto outcome = pf::solve_nlte(l.net, opts.tol);
    json payload;
    std::ostringstream h;
    if (outcome.status != pf::NlteStatus::Solved) {
        payload["status"] = outcome.status == pf::NlteStatus::NotWeaklyReversible
                                ? "no-solution"
                                : "unknown";
        payload["deficiency"] = outcome.deficiency;
        h << "no product form certificate (status: " << payload["status"].get<std::string>()
          << ", deficiency " << outcome.deficiency << ")\n";
        emit(opts, "invariant", l, payload, h.str());
        return 0;
    }
    auto graph = pf::reachability(l.net, opts.cap);
    auto measure = pf::invariant_measure(outcome.solution->u, l.net.kinetics);
    auto verdict = pf::ergodicity_report(l.net, outcome.solution->u, graph);

    payload["status"] = "solved";
    json u = json::object();
    for (std::size_t p = 0; p < l.net.places.size(); ++p)
        u[l.net.places[p]] = outcome.solution->u[p];
    payload["u"] = u;
    payload["ergodicity"] = ergodicity_name(verdict.verdict);
    payload["ergodicity_note"] = verdict.note;
    payload["reachable_states"] = graph.nodes.size();
    payload["truncated"] = graph.truncated;

    h << "u (per place):\n";
    for (std::size_t p = 0; p < l.net.places.size(); ++p)
        h << "  u(" << l.net.places[p] << ") = " << std::setprecision(17)
          << outcome.solution->u[p] << "\n";
    h << "ergodicity: " << ergodicity_name(verdict.verdict) << " (" << verdict.note << ")\n";

    if (do_normalize) {
        auto dist = pf::normalize(measure, graph);
        payload["normalizing_constant"] = dist.normalizing_constant;
        json probs = json::array();
        for (std::size_t i = 0; i < dist.support.size(); ++i)
            probs.push_back({{"marking", pf::marking_to_json(dist.support[i])},
                             {"probability", dist.probabilities[i]}});
        payload["distribution"] = probs;
        h << "stationary distribution over " << dist.support.size()
          << " states (normalizing constant " << dist.normalizing_constant << "):\n";
        for (std::size_t i = 0; i < dist.support.size(); ++i)
            h << "  pi" << pf::format_marking(dist.support[i]) << " = " << dist.probabilities[i]
              << "\n";
    } else {
        json pis = json::array();
        for (const auto& m : graph.nodes)
            pis.push_back({{"marking", pf::marking_to_json(m)}, {"pi", measure.pi(m)}});
        payload["measure"] = pis;
        h << "invariant measure over " << graph.nodes.size() << " explored states"
          << (graph.truncated ? " (truncated)" : "") << "\n";
    }
    emit(opts, "invariant", l, payload, h.str());
    return 0;
}

int run_verify(const GlobalOptions& opts, const std::string& file) {
    LoadedNet l = load_net(file);
    auto outcome = pf::solve_nlte(l.net, opts.tol);
    json payload;
    std::ostringstream h;
    if (outcome.status != pf::NlteStatus::Solved) {
        throw pf::PreconditionError(
            outcome.status == pf::NlteStatus::NotWeaklyReversible
                ? "net is not weakly reversible; no product form certificate to verify"
                : "deficiency positive; no product form certificate to verify");
    }
    auto graph = pf::reachability(l.net, opts.cap);
    if (graph.truncated)
        throw pf::TruncatedError("reachable set exceeds cap " + std::to_string(opts.cap) +
                                 "; oracle comparison needs a finite state space");
    auto measure = pf::invariant_measure(outcome.solution->u, l.net.kinetics);
    auto product = pf::normalize(measure, graph);
    auto gen = pf::generator(l.net, graph);
    auto oracle = pf::stationary_numeric(gen);
    double err = pf::compare(product, oracle);
    double balance = pf::balance_residual(l.net, measure, graph);

    payload["states"] = graph.nodes.size();
    payload["max_relative_error"] = err;
    payload["balance_residual"] = balance;
    payload["nlte_residual"] = outcome.solution->max_residual;
    payload["within_tolerance"] = err < opts.tol;
    h << "states: " << graph.nodes.size() << "\n"
      << "product form vs oracle max relative error: " << err << "\n"
      << "balance residual of product form: " << balance << "\n"
      << (err < opts.tol ? "OK" : "MISMATCH") << " (tolerance " << opts.tol << ")\n";
    emit(opts, "verify", l, payload, h.str());
    if (err >= opts.tol)
        throw pf::NumericError("product form deviates from oracle by " + std::to_string(err));
    return 0;
}

int run_simulate(const GlobalOptions& opts, const std::string& file, double horizon) {
    LoadedNet l = load_net(file);
    auto result = pf::simulate(l.net, opts.seed, horizon);
    json payload;
    payload["seed"] = result.seed;
    payload["horizon"] = result.horizon;
    payload["jumps"] = result.jump_count;
    payload["deadlocked"] = result.deadlocked;
    json occ = json::array();
    for (const auto& [m, w] : result.occupation)
        occ.push_back({{"marking", pf::marking_to_json(m)}, {"weight", w}});
    payload["occupation"] = occ;
    std::ostringstream h;
    h << "seed " << result.seed << ", horizon " << result.horizon << ", " << result.jump_count
      << " jumps" << (result.deadlocked ? " (deadlocked)" : "") << "\n";
    for (const auto& [m, w] : result.occupation)
        h << "  " << pf::format_marking(m) << "  " << w << "\n";
    emit(opts, "simulate", l, payload, h.str());
    return 0;
}

int run_reduce(const GlobalOptions& opts, const std::string& file, const std::string& to,
               bool force) {
    LoadedNet l = load_net(file);
    json payload;
    std::ostringstream h;
    if (to == "sm") {
        auto sm = pf::associated_sm(l.net);
        payload["kind"] = "associated_sm";
        payload["net"] = pf::net_to_json(sm);
        h << pf::serialize_net(sm);
    } else if (to == "rgsm") {
        auto rn = pf::rgsm(l.net, force);
        payload["kind"] = "rgsm";
        payload["forced"] = force && !pf::is_weakly_reversible(l.net);
        payload["net"] = pf::net_to_json(rn);
        if (payload["forced"].get<bool>())
            h << "# forced: input is not weakly reversible; marking graphs are unrelated\n";
        h << pf::serialize_net(rn);
    } else if (to == "jackson") {
        auto jn = pf::to_jackson(l.net);
        payload["kind"] = "jackson";
        payload["network"] = pf::jackson_to_json(jn);
        h << (jn.open ? "open" : "closed") << " Jackson network with " << jn.queues.size()
          << " queues\n";
        for (std::size_t s = 0; s < jn.queues.size(); ++s) {
            h << "  queue " << jn.queues[s] << ": mu = " << pf::to_string(jn.service_rate[s]);
            if (jn.arrival_rate[s] != 0)
                h << ", external arrivals " << pf::to_string(jn.arrival_rate[s]);
            h << ", routing [";
            for (int v = 0; v < jn.routing.cols(); ++v)
                h << (v ? " " : "") << pf::to_string(jn.routing.at(static_cast<int>(s), v));
            h << "]\n";
        }
    } else {
        throw CLI::ValidationError("--to must be sm, rgsm or jackson");
    }
    emit(opts, "reduce", l, payload, h.str());
    return 0;
}

int run_export(const GlobalOptions& opts, const std::string& file, const std::string& dot) {
    LoadedNet l = load_net(file);
    if (dot == "reaction")
        std::cout << pf::dot_reaction_graph(l.net);
    else
        std::cout << pf::dot_marking_graph(l.net, pf::reachability(l.net, opts.cap));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"product-form analysis of Markovian Petri nets"};
    app.require_subcommand(1);

    GlobalOptions opts;
    if (const char* env_cap = std::getenv("PETRIFORM_CAP")) opts.cap = std::stoull(env_cap);
    app.add_option("--tol", opts.tol, "numeric tolerance")->capture_default_str();
    app.add_option("--cap", opts.cap, "reachability state cap")->capture_default_str();
    app.add_option("--seed", opts.seed, "simulation seed")->capture_default_str();
    app.add_flag("--json", opts.emit_json, "emit a JSON report");

    std::string file, dot_kind, reduce_to;
    double horizon = 1000.0;
    bool show_b = false, do_normalize = false, force = false;

    auto* analyze = app.add_subcommand("analyze", "structural report");
    analyze->add_option("file", file)->required();
    analyze->add_option("--dot", dot_kind, "emit DOT instead (reaction|marking)")
        ->check(CLI::IsMember({"reaction", "marking"}));

    auto* solve = app.add_subcommand("solve", "traffic equations and NLTE solution");
    solve->add_option("file", file)->required();
    solve->add_flag("--show-b", show_b, "print the B matrix");

    auto* invariant = app.add_subcommand("invariant", "product-form invariant measure");
    invariant->add_option("file", file)->required();
    invariant->add_flag("--normalize", do_normalize, "normalize over the reachable set");

    auto* verify = app.add_subcommand("verify", "compare product form with the CTMC oracle");
    verify->add_option("file", file)->required();

    auto* simulate = app.add_subcommand("simulate", "race-policy simulation");
    simulate->add_option("file", file)->required();
    simulate->add_option("--horizon", horizon, "model-time horizon")->capture_default_str();

    auto* reduce = app.add_subcommand("reduce", "net-class reductions");
    reduce->add_option("file", file)->required();
    reduce->add_option("--to", reduce_to, "target: sm|rgsm|jackson")
        ->required()
        ->check(CLI::IsMember({"sm", "rgsm", "jackson"}));
    reduce->add_flag("--force", force, "build the RGSM even for non-WR inputs");

    auto* exp = app.add_subcommand("export", "DOT export");
    exp->add_option("file", file)->required();
    exp->add_option("--dot", dot_kind, "reaction|marking")
        ->required()
        ->check(CLI::IsMember({"reaction", "marking"}));

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (analyze->parsed()) return run_analyze(opts, file, dot_kind);
        if (solve->parsed()) return run_solve(opts, file, show_b);
        if (invariant->parsed()) return run_invariant(opts, file, do_normalize);
        if (verify->parsed()) return run_verify(opts, file);
        if (simulate->parsed()) return run_simulate(opts, file, horizon);
        if (reduce->parsed()) return run_reduce(opts, file, reduce_to, force);
        if (exp->parsed()) return run_export(opts, file, dot_kind);
    } catch (const pf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pf::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const pf::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 64;
}
