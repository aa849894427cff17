#pragma once

// Petri net data model, textual parser/serializer, firing semantics and rate
// evaluation.  Everything is immutable after construction; all operations are
// pure functions over const references.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "petriform/errors.hpp"
#include "petriform/rational.hpp"

namespace petriform {

// Token counts / bag weights indexed by place position.
using Marking = std::vector<std::int64_t>;

enum class Kinetics { Constant, MassAction };

struct Transition {
    std::string id;
    Marking input;   // I(t)
    Marking output;  // O(t)
    Rat rate;        // kappa_t > 0
};

struct Diagnostic {
    enum class Level { Warning, Error };
    Level level = Level::Warning;
    std::string message;
};

struct PetriNet {
    std::vector<std::string> places;
    std::vector<Transition> transitions;
    Marking initial_marking;
    Kinetics kinetics = Kinetics::Constant;

    int place_index(std::string_view name) const {
        for (std::size_t i = 0; i < places.size(); ++i)
            if (places[i] == name) return static_cast<int>(i);
        return -1;
    }
    int transition_index(std::string_view id) const {
        for (std::size_t i = 0; i < transitions.size(); ++i)
            if (transitions[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

inline bool is_weighted(const PetriNet& net) {
    for (const auto& t : net.transitions)
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (t.input[p] > 1 || t.output[p] > 1) return true;
    return false;
}

// Applies the two normalizations assumed by the structural theory: transitions
// with I(t)=O(t) are dropped and transitions sharing the same (I,O) pair are
// merged by summing their rates.  Neither changes deficiency or weak
// reversibility.
inline PetriNet normalize_net(PetriNet net, std::vector<Diagnostic>* diags = nullptr) {
    std::vector<Transition> kept;
    for (auto& t : net.transitions) {
        if (t.input == t.output) {
            if (diags)
                diags->push_back({Diagnostic::Level::Warning,
                                  "transition '" + t.id + "' has equal input and output bags; dropped"});
            continue;
        }
        bool merged = false;
        for (auto& k : kept) {
            if (k.input == t.input && k.output == t.output) {
                k.rate += t.rate;
                merged = true;
                if (diags)
                    diags->push_back({Diagnostic::Level::Warning,
                                      "transition '" + t.id + "' duplicates '" + k.id +
                                          "'; rates summed"});
                break;
            }
        }
        if (!merged) kept.push_back(std::move(t));
    }
    net.transitions = std::move(kept);
    return net;
}

inline void validate_net(const PetriNet& net) {
    if (net.places.empty()) throw PreconditionError("net has no places");
    if (net.initial_marking.size() != net.places.size())
        throw PreconditionError("initial marking length does not match place count");
    for (std::size_t i = 0; i < net.places.size(); ++i)
        for (std::size_t j = i + 1; j < net.places.size(); ++j)
            if (net.places[i] == net.places[j])
                throw PreconditionError("duplicate place '" + net.places[i] + "'");
    for (std::size_t i = 0; i < net.transitions.size(); ++i) {
        const auto& t = net.transitions[i];
        if (t.input.size() != net.places.size() || t.output.size() != net.places.size())
            throw PreconditionError("transition '" + t.id + "' bag length mismatch");
        if (t.rate <= 0) throw PreconditionError("transition '" + t.id + "' has non-positive rate");
        for (std::size_t j = i + 1; j < net.transitions.size(); ++j)
            if (net.transitions[j].id == t.id)
                throw PreconditionError("duplicate transition id '" + t.id + "'");
    }
}

// ---------------------------------------------------------------------------
// Firing semantics

inline bool is_enabled(const PetriNet& net, const Marking& m, int t) {
    const auto& tr = net.transitions[t];
    for (std::size_t p = 0; p < m.size(); ++p)
        if (m[p] < tr.input[p]) return false;
    return true;
}

inline std::vector<std::string> enabled(const PetriNet& net, const Marking& m) {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        if (is_enabled(net, m, static_cast<int>(t))) out.push_back(net.transitions[t].id);
    return out;
}

inline Marking fire(const PetriNet& net, const Marking& m, int t) {
    if (!is_enabled(net, m, t))
        throw NotEnabledError("transition '" + net.transitions[t].id + "' not enabled");
    const auto& tr = net.transitions[t];
    Marking out = m;
    for (std::size_t p = 0; p < m.size(); ++p) out[p] += tr.output[p] - tr.input[p];
    return out;
}

inline Marking fire(const PetriNet& net, const Marking& m, std::string_view id) {
    int t = net.transition_index(id);
    if (t < 0) throw PreconditionError("unknown transition '" + std::string(id) + "'");
    return fire(net, m, t);
}

// mu_t(M): 0 when disabled, kappa_t under constant kinetics, and the falling
// factorial form kappa_t * prod_p M_p!/(M_p - I_p)! under mass-action.
inline Rat rate(const PetriNet& net, const Marking& m, int t) {
    if (!is_enabled(net, m, t)) return Rat(0);
    const auto& tr = net.transitions[t];
    if (net.kinetics == Kinetics::Constant) return tr.rate;
    Int factor = 1;
    for (std::size_t p = 0; p < m.size(); ++p)
        for (std::int64_t k = 0; k < tr.input[p]; ++k) factor *= Int(static_cast<long>(m[p] - k));
    return tr.rate * Rat(factor);
}

inline Rat rate(const PetriNet& net, const Marking& m, std::string_view id) {
    int t = net.transition_index(id);
    if (t < 0) throw PreconditionError("unknown transition '" + std::string(id) + "'");
    return rate(net, m, t);
}

// ---------------------------------------------------------------------------
// Textual format
//
//   # comment
//   places: p q r            (optional; otherwise inferred in appearance order)
//   kinetics: mass-action    (or "constant", the default)
//   init: p=2 r=1            (unlisted places default to 0)
//   t1: 2*p -> p + q + r @ 1/2
//   p <-> q @ 1, 3/2         (expands into two transitions)
//
// Terms are `0` (the empty bag) or `+`-separated `k*place` atoms with k a
// positive integer defaulting to 1.  Rates are decimals or fractions a/b.

namespace detail {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat(std::string_view s) {
        skip_ws();
        if (text.substr(pos, s.size()) == s) {
            pos += s.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line, static_cast<int>(pos) + 1);
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        auto ok = [&](char c, bool first) {
            return c == '_' || std::isalpha(static_cast<unsigned char>(c)) ||
                   (!first && std::isdigit(static_cast<unsigned char>(c)));
        };
        if (pos < text.size() && ok(text[pos], true)) {
            ++pos;
            while (pos < text.size() && ok(text[pos], false)) ++pos;
        }
        if (start == pos) fail("expected identifier");
        return std::string(text.substr(start, pos - start));
    }
    std::optional<std::int64_t> integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) return std::nullopt;
        return std::stoll(std::string(text.substr(start, pos - start)));
    }
    std::string rate_token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '.' || text[pos] == '/' || text[pos] == '-' ||
                                     text[pos] == '+'))
            ++pos;
        if (start == pos) fail("expected rate");
        return std::string(text.substr(start, pos - start));
    }
};

// A raw bag keyed by place name; resolved to an index vector once the full
// place list is known.
using RawBag = std::map<std::string, std::int64_t>;

inline RawBag parse_term(Cursor& c) {
    RawBag bag;
    c.skip_ws();
    if (c.pos < c.text.size() && c.text[c.pos] == '0') {
        std::size_t save = c.pos;
        ++c.pos;
        c.skip_ws();
        // lone 0 is the empty bag; "0" followed by '*' is a weight error
        if (c.pos >= c.text.size() || c.text[c.pos] == '-' || c.text[c.pos] == '<' ||
            c.text[c.pos] == '@')
            return bag;
        c.pos = save;
    }
    while (true) {
        std::int64_t weight = 1;
        if (auto k = c.integer()) {
            if (*k <= 0) c.fail("bag weight must be a positive integer");
            weight = *k;
            if (!c.eat('*')) c.fail("expected '*' after weight");
        }
        bag[c.ident()] += weight;
        if (!c.eat('+')) break;
    }
    return bag;
}

}  // namespace detail

inline PetriNet parse_net(std::string_view text, std::vector<Diagnostic>* diags = nullptr) {
    struct RawTransition {
        std::string id;
        detail::RawBag input, output;
        Rat rate;
        int line;
    };
    std::vector<std::string> declared_places;
    bool has_places_line = false;
    std::vector<std::pair<std::string, std::int64_t>> init_entries;
    std::optional<Kinetics> kinetics;
    std::vector<RawTransition> raw;
    int auto_id = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        detail::Cursor c{line, 0, lineno};
        if (c.done()) continue;

        if (c.eat("places:")) {
            has_places_line = true;
            while (!c.done()) declared_places.push_back(c.ident());
            continue;
        }
        if (c.eat("init:")) {
            while (!c.done()) {
                std::string p = c.ident();
                if (!c.eat('=')) c.fail("expected '=' in init entry");
                auto k = c.integer();
                if (!k || *k < 0) c.fail("expected nonnegative token count");
                init_entries.emplace_back(p, *k);
            }
            continue;
        }
        if (c.eat("kinetics:")) {
            if (kinetics) c.fail("duplicate kinetics line");
            if (c.eat("mass-action"))
                kinetics = Kinetics::MassAction;
            else if (c.eat("constant"))
                kinetics = Kinetics::Constant;
            else
                c.fail("kinetics must be 'constant' or 'mass-action'");
            if (!c.done()) c.fail("trailing input after kinetics");
            continue;
        }

        // reaction line: [id:] TERM (->|<->) TERM @ RATE[, RATE]
        std::string id;
        {
            detail::Cursor probe = c;
            bool has_id = false;
            if (probe.pos < probe.text.size()) {
                try {
                    std::string candidate = probe.ident();
                    if (probe.eat(':')) {
                        id = candidate;
                        has_id = true;
                    }
                } catch (const ParseError&) {
                }
            }
            if (has_id) c = probe;
        }
        detail::RawBag lhs = detail::parse_term(c);
        bool reversible = false;
        if (c.eat("<->"))
            reversible = true;
        else if (!c.eat("->"))
            c.fail("expected '->' or '<->'");
        detail::RawBag rhs = detail::parse_term(c);
        if (!c.eat('@')) c.fail("expected '@' before rate");
        auto fwd = parse_rational(c.rate_token());
        if (!fwd) c.fail("malformed rate");
        if (*fwd <= 0) c.fail("rate must be positive");
        std::optional<Rat> bwd;
        if (reversible) {
            if (!c.eat(',')) c.fail("reversible reaction needs ', RATE_BWD'");
            bwd = parse_rational(c.rate_token());
            if (!bwd) c.fail("malformed backward rate");
            if (*bwd <= 0) c.fail("rate must be positive");
        }
        if (!c.done()) c.fail("trailing input after reaction");

        std::string fwd_id = id.empty() ? "t" + std::to_string(++auto_id) : id;
        raw.push_back({fwd_id, lhs, rhs, *fwd, lineno});
        if (reversible) {
            std::string bwd_id = id.empty() ? "t" + std::to_string(++auto_id) : id + "_rev";
            raw.push_back({bwd_id, rhs, lhs, *bwd, lineno});
        }
    }

    PetriNet net;
    if (has_places_line) {
        net.places = declared_places;
    } else {
        auto add = [&](const std::string& p) {
            if (net.place_index(p) < 0) net.places.push_back(p);
        };
        for (const auto& t : raw) {
            for (const auto& [p, k] : t.input) add(p);
            for (const auto& [p, k] : t.output) add(p);
        }
    }
    auto resolve = [&](const detail::RawBag& bag, int line) {
        Marking m(net.places.size(), 0);
        for (const auto& [p, k] : bag) {
            int idx = net.place_index(p);
            if (idx < 0) throw ParseError("unknown place '" + p + "'", line, 1);
            m[idx] += k;
        }
        return m;
    };
    for (const auto& t : raw)
        net.transitions.push_back({t.id, resolve(t.input, t.line), resolve(t.output, t.line), t.rate});

    net.initial_marking.assign(net.places.size(), 0);
    for (const auto& [p, k] : init_entries) {
        int idx = net.place_index(p);
        if (idx < 0) throw ParseError("unknown place '" + p + "' in init line", lineno, 1);
        net.initial_marking[idx] = k;
    }
    net.kinetics = kinetics.value_or(Kinetics::Constant);

    net = normalize_net(std::move(net), diags);
    try {
        validate_net(net);
    } catch (const PreconditionError& e) {
        throw ParseError(e.what(), lineno, 1);
    }
    return net;
}

inline std::string format_bag(const PetriNet& net, const Marking& bag, const char* mult = "*") {
    std::string out;
    for (std::size_t p = 0; p < bag.size(); ++p) {
        if (bag[p] == 0) continue;
        if (!out.empty()) out += " + ";
        if (bag[p] != 1) out += std::to_string(bag[p]) + mult;
        out += net.places[p];
    }
    return out.empty() ? "0" : out;
}

// Compact complex notation: "2p+q", "0" for the empty complex.
inline std::string format_complex(const PetriNet& net, const Marking& bag) {
    std::string out;
    for (std::size_t p = 0; p < bag.size(); ++p) {
        if (bag[p] == 0) continue;
        if (!out.empty()) out += "+";
        if (bag[p] != 1) out += std::to_string(bag[p]);
        out += net.places[p];
    }
    return out.empty() ? "0" : out;
}

// Round-trips through parse_net to an identical net: same place order, same
// transition order, same exact rationals.
inline std::string serialize_net(const PetriNet& net) {
    std::ostringstream out;
    out << "places:";
    for (const auto& p : net.places) out << " " << p;
    out << "\n";
    out << "kinetics: " << (net.kinetics == Kinetics::MassAction ? "mass-action" : "constant")
        << "\n";
    bool any_init = false;
    for (auto v : net.initial_marking) any_init |= (v != 0);
    if (any_init) {
        out << "init:";
        for (std::size_t p = 0; p < net.places.size(); ++p)
            if (net.initial_marking[p] != 0)
                out << " " << net.places[p] << "=" << net.initial_marking[p];
        out << "\n";
    }
    for (const auto& t : net.transitions)
        out << t.id << ": " << format_bag(net, t.input) << " -> " << format_bag(net, t.output)
            << " @ " << to_string(t.rate) << "\n";
    return out.str();
}

inline std::string format_marking(const Marking& m) {
    std::string out = "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(m[i]);
    }
    return out + ")";
}

}  // namespace petriform
