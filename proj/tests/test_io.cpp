#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace pftest;

TEST_CASE("net JSON round-trips") {
    for (const char* name : {"fig1.net", "sec24.net", "sec27.net", "gsm.net"}) {
        auto net = load_fixture(name);
        auto j = net_to_json(net);
        auto again = net_from_json(j);
        CHECK(serialize_net(again) == serialize_net(net));
        CHECK(net_to_json(again) == j);
    }
}

TEST_CASE("jackson JSON round-trips with exact rationals") {
    auto net = parse_net(
        "places: s a b\ninit: s=2\n"
        "t1: s -> a @ 1/3\nt2: s -> b @ 2/3\nr1: a -> s @ 1\nr2: b -> s @ 5/7\n");
    auto j = to_jackson(net);
    auto js = jackson_to_json(j);
    auto again = jackson_from_json(js);
    CHECK(again.queues == j.queues);
    CHECK(again.service_rate == j.service_rate);
    CHECK(again.arrival_rate == j.arrival_rate);
    CHECK(again.routing == j.routing);
    CHECK(again.open == j.open);
    CHECK(js["service_rates"][0].get<std::string>() == "1");  // exact "a/b" strings
    CHECK(js["routing"][0][1].get<std::string>() == "1/3");
}

TEST_CASE("marking graph JSON lists nodes and labeled arcs") {
    auto net = cycle_net(make_rat(1), make_rat(1), make_rat(1));
    auto g = reachability(net);
    auto j = marking_graph_to_json(net, g);
    CHECK(j["nodes"].size() == 3);
    CHECK(j["arcs"].size() == 3);
    CHECK(j["truncated"].get<bool>() == false);
    CHECK(j["origin"] == json::array({2, 0, 0}));
}

TEST_CASE("DOT exports label complexes and markings") {
    auto net = cycle_net(make_rat(1), make_rat(1), make_rat(1));
    auto dot_r = dot_reaction_graph(net);
    CHECK(dot_r.find("\"2p\"") != std::string::npos);
    CHECK(dot_r.find("\"p+q+r\"") != std::string::npos);
    CHECK(dot_r.find("label=\"t1\"") != std::string::npos);
    auto dot_m = dot_marking_graph(net, reachability(net));
    CHECK(dot_m.find("\"(2,0,0)\"") != std::string::npos);
    CHECK(dot_m.find("digraph marking") != std::string::npos);
}

TEST_CASE("digest is stable and sensitive to the net") {
    auto a = load_fixture("sec24.net");
    auto b = load_fixture("sec24.net");
    CHECK(net_digest(a) == net_digest(b));
    auto c = load_fixture("fig1.net");
    CHECK(net_digest(a) != net_digest(c));
}

TEST_CASE("structure report JSON carries the complexes in display form") {
    auto net = cycle_net(make_rat(1), make_rat(1), make_rat(1));
    auto j = structure_report_to_json(analyze_structure(net), net);
    CHECK(j["deficiency"].get<int>() == 0);
    CHECK(j["weakly_reversible"].get<bool>() == true);
    std::vector<std::string> cs = j["complexes"].get<std::vector<std::string>>();
    CHECK(cs == std::vector<std::string>{"2p", "p+q+r", "2q"});
}
