#pragma once

// JSON and Graphviz exports.  JSON schemas are versioned and stable; exact
// rationals are serialized as "a/b" strings, never as floats.

#include "json.hpp"

#include <sstream>
#include <string>

#include "petriform/ctmc.hpp"
#include "petriform/net.hpp"
#include "petriform/reach.hpp"
#include "petriform/reductions.hpp"
#include "petriform/structure.hpp"
#include "petriform/traffic.hpp"

namespace petriform {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json marking_to_json(const Marking& m) {
    json arr = json::array();
    for (auto v : m) arr.push_back(v);
    return arr;
}

inline json net_to_json(const PetriNet& net) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["places"] = net.places;
    j["kinetics"] = net.kinetics == Kinetics::MassAction ? "mass-action" : "constant";
    j["initial_marking"] = marking_to_json(net.initial_marking);
    json ts = json::array();
    for (const auto& t : net.transitions) {
        json tj;
        tj["id"] = t.id;
        json in = json::object(), out = json::object();
        for (std::size_t p = 0; p < net.places.size(); ++p) {
            if (t.input[p] > 0) in[net.places[p]] = t.input[p];
            if (t.output[p] > 0) out[net.places[p]] = t.output[p];
        }
        tj["input"] = in;
        tj["output"] = out;
        tj["rate"] = to_string(t.rate);
        ts.push_back(tj);
    }
    j["transitions"] = ts;
    return j;
}

inline PetriNet net_from_json(const json& j) {
    PetriNet net;
    net.places = j.at("places").get<std::vector<std::string>>();
    net.kinetics =
        j.at("kinetics").get<std::string>() == "mass-action" ? Kinetics::MassAction : Kinetics::Constant;
    for (const auto& v : j.at("initial_marking")) net.initial_marking.push_back(v.get<std::int64_t>());
    for (const auto& tj : j.at("transitions")) {
        Transition t;
        t.id = tj.at("id").get<std::string>();
        t.input.assign(net.places.size(), 0);
        t.output.assign(net.places.size(), 0);
        for (auto& [name, count] : tj.at("input").items())
            t.input[net.place_index(name)] = count.get<std::int64_t>();
        for (auto& [name, count] : tj.at("output").items())
            t.output[net.place_index(name)] = count.get<std::int64_t>();
        auto r = parse_rational(tj.at("rate").get<std::string>());
        if (!r) throw PreconditionError("malformed rate in net JSON");
        t.rate = *r;
        net.transitions.push_back(std::move(t));
    }
    validate_net(net);
    return net;
}

inline json marking_graph_to_json(const PetriNet& net, const MarkingGraph& g) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["origin"] = marking_to_json(g.origin);
    j["truncated"] = g.truncated;
    json nodes = json::array();
    for (const auto& m : g.nodes) nodes.push_back(marking_to_json(m));
    j["nodes"] = nodes;
    json arcs = json::array();
    for (const auto& a : g.arcs)
        arcs.push_back({{"from", a.from}, {"transition", net.transitions[a.transition].id}, {"to", a.to}});
    j["arcs"] = arcs;
    return j;
}

inline json structure_report_to_json(const StructureReport& r, const PetriNet& net) {
    json j;
    j["complex_count"] = r.complex_count;
    j["component_count"] = r.component_count;
    j["rank_N"] = r.rank_n;
    j["rank_A"] = r.rank_a;
    j["deficiency"] = r.deficiency;
    j["weakly_reversible"] = r.weakly_reversible;
    j["free_choice"] = r.free_choice;
    j["state_machine"] = r.state_machine;
    j["generalized_state_machine"] = r.generalized_state_machine;
    j["weighted"] = r.weighted;
    json cs = json::array();
    for (const auto& c : complexes(net)) cs.push_back(format_complex(net, c));
    j["complexes"] = cs;
    j["clusters"] = r.clusters;
    return j;
}

inline json jackson_to_json(const JacksonNetwork& jn) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["queues"] = jn.queues;
    json mu = json::array(), arr = json::array(), init = json::array();
    for (const auto& r : jn.service_rate) mu.push_back(to_string(r));
    for (const auto& r : jn.arrival_rate) arr.push_back(to_string(r));
    for (auto v : jn.initial) init.push_back(v);
    j["service_rates"] = mu;
    j["arrival_rates"] = arr;
    j["initial"] = init;
    json rows = json::array();
    for (int u = 0; u < jn.routing.rows(); ++u) {
        json row = json::array();
        for (int v = 0; v < jn.routing.cols(); ++v) row.push_back(to_string(jn.routing.at(u, v)));
        rows.push_back(row);
    }
    j["routing"] = rows;
    j["open"] = jn.open;
    return j;
}

inline JacksonNetwork jackson_from_json(const json& j) {
    JacksonNetwork jn;
    jn.queues = j.at("queues").get<std::vector<std::string>>();
    int np = static_cast<int>(jn.queues.size());
    auto rats = [&](const json& arr) {
        std::vector<Rat> out;
        for (const auto& s : arr) {
            auto r = parse_rational(s.get<std::string>());
            if (!r) throw PreconditionError("malformed rational in Jackson JSON");
            out.push_back(*r);
        }
        return out;
    };
    jn.service_rate = rats(j.at("service_rates"));
    jn.arrival_rate = rats(j.at("arrival_rates"));
    for (const auto& v : j.at("initial")) jn.initial.push_back(v.get<std::int64_t>());
    jn.routing = RationalMatrix(np, np);
    const auto& rows = j.at("routing");
    for (int u = 0; u < np; ++u)
        for (int v = 0; v < np; ++v) {
            auto r = parse_rational(rows[u][v].get<std::string>());
            if (!r) throw PreconditionError("malformed routing entry");
            jn.routing.at(u, v) = *r;
        }
    jn.open = j.at("open").get<bool>();
    return jn;
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string dot_reaction_graph(const PetriNet& net) {
    ReactionGraph g = reaction_graph(net);
    std::ostringstream out;
    out << "digraph reaction {\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        out << "  c" << i << " [label=\"" << dot_escape(format_complex(net, g.nodes[i])) << "\"];\n";
    for (const auto& a : g.arcs)
        out << "  c" << a.from << " -> c" << a.to << " [label=\""
            << dot_escape(net.transitions[a.transition].id) << "\"];\n";
    out << "}\n";
    return out.str();
}

inline std::string dot_marking_graph(const PetriNet& net, const MarkingGraph& g) {
    std::ostringstream out;
    out << "digraph marking {\n";
    if (g.truncated) out << "  // truncated exploration\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        out << "  m" << i << " [label=\"" << format_marking(g.nodes[i]) << "\"];\n";
    for (const auto& a : g.arcs)
        out << "  m" << a.from << " -> m" << a.to << " [label=\""
            << dot_escape(net.transitions[a.transition].id) << "\"];\n";
    out << "}\n";
    return out.str();
}

// FNV-1a over the normalized serialization; stable across platforms.
inline std::string net_digest(const PetriNet& net) {
    std::string s = serialize_net(net);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace petriform
