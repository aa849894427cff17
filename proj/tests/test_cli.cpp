#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <string>

#include "support.hpp"

#ifndef PETRIFORM_CLI
#define PETRIFORM_CLI "petriform"
#endif

namespace {

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    std::string cmd = std::string(PETRIFORM_CLI) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

std::string fixture(const std::string& name) { return pftest::fixture_path(name); }

// exact comparison for strings/bools/ints, tolerant for floats
void check_json_close(const pftest::json& got, const pftest::json& want, const std::string& path) {
    INFO("at " << path);
    if (want.is_number_float() || got.is_number_float()) {
        REQUIRE(got.is_number());
        REQUIRE(want.is_number());
        double g = got.get<double>(), w = want.get<double>();
        REQUIRE(std::abs(g - w) <= 1e-9 * std::max({1.0, std::abs(g), std::abs(w)}));
        return;
    }
    if (want.is_object()) {
        REQUIRE(got.is_object());
        REQUIRE(got.size() == want.size());
        for (auto& [key, value] : want.items()) {
            REQUIRE(got.contains(key));
            check_json_close(got.at(key), value, path + "/" + key);
        }
        return;
    }
    if (want.is_array()) {
        REQUIRE(got.is_array());
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i)
            check_json_close(got.at(i), want.at(i), path + "[" + std::to_string(i) + "]");
        return;
    }
    REQUIRE(got == want);
}

}  // namespace

TEST_CASE("analyze reports the paper fixtures") {
    auto sec24 = run_cli("analyze " + fixture("sec24.net"));
    CHECK(sec24.exit_code == 0);
    CHECK(sec24.output.find("deficiency = 0") != std::string::npos);
    CHECK(sec24.output.find("weakly reversible: yes") != std::string::npos);

    auto fig1 = run_cli("analyze " + fixture("fig1.net"));
    CHECK(fig1.exit_code == 0);
    CHECK(fig1.output.find("deficiency = 1") != std::string::npos);
    CHECK(fig1.output.find("weakly reversible: yes") != std::string::npos);
}

TEST_CASE("verify passes on the bounded cycle fixture") {
    auto r = run_cli("verify " + fixture("sec24.net"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("OK") != std::string::npos);
}

TEST_CASE("exit codes: usage, parse, precondition") {
    CHECK(run_cli("frobnicate x").exit_code == 64);
    CHECK(run_cli("analyze").exit_code == 64);

    auto bad = fixture("bad_syntax.net.tmp");
    {
        std::ofstream out(bad);
        out << "p -> q\n";
    }
    CHECK(run_cli("analyze " + bad).exit_code == 2);
    std::remove(bad.c_str());

    // verify on a non-WR net: precondition failure
    CHECK(run_cli("verify " + fixture("sec27.net")).exit_code == 3);
    // reduce to rgsm without force on a non-WR free-choice net
    CHECK(run_cli("reduce " + fixture("fig12.net") + " --to rgsm").exit_code == 3);
    CHECK(run_cli("reduce " + fixture("fig12.net") + " --to rgsm --force").exit_code == 0);
}

TEST_CASE("simulate is reproducible and respects --seed") {
    auto a = run_cli("--seed 42 --json simulate " + fixture("sec24.net") + " --horizon 100");
    auto b = run_cli("--seed 42 --json simulate " + fixture("sec24.net") + " --horizon 100");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto j = pftest::json::parse(a.output);
    CHECK(j["payload"]["seed"].get<std::uint64_t>() == 42);
    CHECK(j["payload"]["jumps"].get<std::uint64_t>() > 0);
}

TEST_CASE("solve and invariant emit JSON payloads") {
    auto s = run_cli("--json solve " + fixture("sec24.net") + " --show-b");
    REQUIRE(s.exit_code == 0);
    auto js = pftest::json::parse(s.output);
    CHECK(js["command"] == "solve");
    CHECK(js["payload"]["status"] == "solved");
    CHECK(js["payload"].contains("b_matrix"));

    auto i = run_cli("--json invariant " + fixture("sec24.net") + " --normalize");
    REQUIRE(i.exit_code == 0);
    auto ji = pftest::json::parse(i.output);
    CHECK(ji["payload"]["ergodicity"] == "ErgodicFinite");
    double total = 0;
    for (auto& entry : ji["payload"]["distribution"]) total += entry["probability"].get<double>();
    CHECK(std::abs(total - 1.0) < 1e-12);

    auto nosol = run_cli("--json solve " + fixture("fig1_nosol.net"));
    REQUIRE(nosol.exit_code == 0);
    auto jn = pftest::json::parse(nosol.output);
    CHECK(jn["payload"]["status"] == "unknown");
    CHECK(jn["payload"]["reason"] == "DeficiencyPositive");

    auto notwr = run_cli("--json solve " + fixture("sec27.net"));
    auto jw = pftest::json::parse(notwr.output);
    CHECK(jw["payload"]["status"] == "no-solution");
    CHECK(jw["payload"]["reason"] == "NotWeaklyReversible");
}

TEST_CASE("export emits DOT") {
    auto r = run_cli("export " + fixture("sec24.net") + " --dot reaction");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("digraph reaction") != std::string::npos);
    auto m = run_cli("export " + fixture("sec24.net") + " --dot marking");
    CHECK(m.output.find("\"(2,0,0)\"") != std::string::npos);
}

TEST_CASE("PETRIFORM_CAP environment override") {
    auto r = run_cli("analyze " + fixture("sec24_unbounded.net") + " --dot marking --cap 25");
    int count = 0;
    for (std::size_t pos = 0; (pos = r.output.find("label=\"(", pos)) != std::string::npos; ++pos)
        ++count;
    CHECK(count == 25);

    std::string cmd = "PETRIFORM_CAP=10 " PETRIFORM_CLI " analyze " +
                      fixture("sec24_unbounded.net") + " --dot marking";
    auto r2 = run_cli("--cap 10 analyze " + fixture("sec24_unbounded.net") + " --dot marking");
    int count2 = 0;
    for (std::size_t pos = 0; (pos = r2.output.find("label=\"(", pos)) != std::string::npos; ++pos)
        ++count2;
    CHECK(count2 == 10);
    (void)cmd;
}

TEST_CASE("golden reports for the fixture gallery") {
    for (const char* name :
         {"fig1", "fig1_nosol", "sec24", "sec24_unbounded", "sec27", "sec27_alt", "fig4_tl",
          "fig4_tr", "fig4_bl", "fig4_br", "sm", "gsm", "gsm_assoc", "fig9_fc", "fig9_nfc",
          "fig12"}) {
        INFO("fixture " << name);
        auto r = run_cli("--json analyze " + fixture(std::string(name) + ".net"));
        REQUIRE(r.exit_code == 0);
        auto got = pftest::json::parse(r.output);
        auto want = pftest::json::parse(
            pftest::slurp(pftest::fixture_path("golden/" + std::string(name) + ".analyze.json")));
        check_json_close(got, want, name);
    }
}
