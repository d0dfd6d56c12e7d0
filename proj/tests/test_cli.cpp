// ==== test_cli.cpp — end-to-end runs of the command-line binary ====
//
// Each case invokes the built binary (path injected via TOPOS4_CLI_PATH),
// captures the stdout report line, and checks verdict plus exit code.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "topos4/frames.hpp"

using namespace topos4;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(TOPOS4_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json first_line_json(const std::string& out) {
    size_t nl = out.find('\n');
    json j = json::parse(out.substr(0, nl), nullptr, false);
    REQUIRE_FALSE(j.is_discarded());
    return j;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "topos4_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto p = temp_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string frame_file(const std::string& name, const FiniteFrame& f) {
    return write_temp(name, frame_to_json(f).dump());
}

std::string read_back(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// ── validity ──

TEST_CASE("validity finds the fork refutation of the S4.2 axiom") {
    std::string fork = frame_file("fork1.json", make_fork(1));
    RunResult r = run_cli("validity " + fork + " '<>[]p -> []<>p'");
    CHECK(r.code == 1);
    json j = first_line_json(r.out);
    CHECK(j["verdict"] == "refuted");
    CHECK(j["command"] == "validity");
    CHECK(j["inputs"].get<std::string>().size() == 16);
    CHECK(j["timing_ms"].is_number());
    // terminal endpoint alone: true at the endpoint, never settles at the root
    CHECK(j["counterexample"]["valuation"]["p"] == json::array({1}));
    CHECK(j["counterexample"]["world"] == 0u);
}

TEST_CASE("validity confirms diamond idempotence on the same fork") {
    std::string fork = frame_file("fork1.json", make_fork(1));
    RunResult r = run_cli("validity " + fork + " '<><>p -> <>p'");
    CHECK(r.code == 0);
    CHECK(first_line_json(r.out)["verdict"] == "valid");
}

TEST_CASE("validity stops at the letter cap with exit 3") {
    std::string fork = frame_file("fork1.json", make_fork(1));
    RunResult r = run_cli("validity " + fork + " 'p & q & r & s & t'");
    CHECK(r.code == 3);
    json j = first_line_json(r.out);
    CHECK(j["verdict"] == "error");
    CHECK(j["kind"] == "resource-cap");
}

TEST_CASE("validity accepts a raised cap for the same formula") {
    std::string fork = frame_file("fork1.json", make_fork(1));
    RunResult r =
        run_cli("validity " + fork + " 'p & q & r & s & t' --max-letters 5");
    CHECK(r.code == 1);  // conjunction of letters is refutable
    CHECK(first_line_json(r.out)["verdict"] == "refuted");
}

// ── construct ──

TEST_CASE("construct fork emits the frame and a DOT file") {
    std::string dot = (temp_dir() / "fork2.dot").string();
    RunResult r = run_cli("construct fork --alpha 2 --dot " + dot);
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["verdict"] == "pass");
    CHECK(j["report"]["worlds"] == 4u);
    CHECK(j["report"]["s4"] == true);
    CHECK(j["artifact"]["worlds"] == 4u);
    CHECK(read_back(dot).find("\"r\"") != std::string::npos);
}

TEST_CASE("construct interval verifies its nesting lemmas") {
    RunResult r = run_cli("construct interval --depth 2");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["report"]["ok"] == true);
    CHECK(j["report"]["children_split_ok"] == true);
    CHECK(j["report"]["removed_total"] == "19/27");  // 9/27 + 6/27 + 4/27
    CHECK(j["artifact"]["depth"] == 2u);
}

TEST_CASE("construct tcomb reports the back-condition margin") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("construct tcomb --frame " + chain + " --depth 6");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["report"]["ok"] == true);
    CHECK(j["report"]["margin"] == 3u);
    CHECK(j["artifact"]["labels"]["e"] == 0u);
}

TEST_CASE("construct cantor-lalpha writes the artifact to a file") {
    std::string out = (temp_dir() / "cantor.json").string();
    RunResult r =
        run_cli("construct cantor-lalpha --branching 2 --depth 8 --out " + out);
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["artifact_file"] == out);
    CHECK(j["report"]["target_nodes"] == 7u);
    json art = json::parse(read_back(out));
    CHECK(art["labels"]["e"] == 0u);
    CHECK(art["target"]["worlds"] == 7u);
}

TEST_CASE("construct qstage counts points and coverage") {
    std::string cluster = frame_file("cluster1.json", make_cluster(1));
    RunResult r =
        run_cli("construct qstage --frame " + cluster + " --stages 2");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["report"]["points"] == 9u);
    CHECK(j["report"]["uncovered"] == 0u);
    // points arrive sorted by position; the seed 1/2 sits in the middle
    CHECK(j["artifact"]["points"][0]["x"] == "11/32");
    CHECK(j["artifact"]["points"][4]["x"] == "1/2");
    CHECK(j["artifact"]["points"][4]["born"] == 0u);
}

TEST_CASE("construct rejects a bad frame file with exit 2") {
    std::string bad = write_temp("bad.json", "{ not json");
    RunResult r = run_cli("construct tcomb --frame " + bad + " --depth 4");
    CHECK(r.code == 2);
    CHECK(first_line_json(r.out)["kind"] == "input");
}

// ── glue ──

TEST_CASE("glue joins two forks at their endpoint") {
    json fork = frame_to_json(make_fork(1));
    json point = {{"worlds", 1}, {"relation", json::array({json::array({0, 0})})}};
    json spec = {{"shared", point},
                 {"parts", json::array({fork, fork})},
                 {"embeddings", json::array({json::array({1}), json::array({1})})}};
    std::string file = write_temp("gluespec.json", spec.dump());
    RunResult r = run_cli("glue " + file);
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["rho"]["ok"] == true);
    CHECK(j["rho"]["onto"] == true);
    CHECK(j["artifact"]["glued"]["worlds"] == 5u);
}

TEST_CASE("glue rejects a spec with missing keys") {
    std::string file = write_temp("gluespec_bad.json", "{\"parts\": []}");
    RunResult r = run_cli("glue " + file);
    CHECK(r.code == 2);
}

// ── cgfp ──

TEST_CASE("cgfp searches out a refutation and keeps both chain worlds") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("cgfp " + chain + " 'p -> []p'");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["kept_worlds"] == json::array({0, 1}));
    CHECK(j["refuted_at"] == 0u);
    CHECK(j["valuation"]["p"] == json::array({0}));
    CHECK(j["artifact"]["worlds"] == 2u);
    CHECK(j["field_enlarged"] == true);
}

TEST_CASE("cgfp accepts an explicit valuation and world") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("cgfp " + chain +
                          " 'p -> []p' --valuation '{\"p\": [0]}' --world 0");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["kept_worlds"] == json::array({0, 1}));
    CHECK(j["witnesses"].size() == 1);
    CHECK(j["witnesses"][0]["witness"] == 1u);
}

TEST_CASE("cgfp refuses a formula the structure validates") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("cgfp " + chain + " '<><>p -> <>p'");
    CHECK(r.code == 2);
    CHECK(first_line_json(r.out)["kind"] == "input");
}

// ── translate ──

TEST_CASE("translate boxes every subformula") {
    RunResult r = run_cli("translate 'p -> q'");
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["verdict"] == "value");
    CHECK(j["output"] == "[]([]p -> []q)");
}

// ── convert ──

TEST_CASE("convert renders a chain as its upset topology and back") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    std::string space_file = (temp_dir() / "chain2_space.json").string();
    RunResult r =
        run_cli("convert " + chain + " --to space --out " + space_file);
    CHECK(r.code == 0);
    json space = json::parse(read_back(space_file));
    CHECK(space["carrier"] == 2u);
    CHECK(space["opens"] == json::array({0, 2, 3}));

    RunResult back = run_cli("convert " + space_file + " --to frame");
    CHECK(back.code == 0);
    json j = first_line_json(back.out);
    CHECK(j["artifact"]["worlds"] == 2u);
    json rel = j["artifact"]["relation"];
    CHECK(rel.size() == 3);  // 0<=0, 0<=1, 1<=1
}

TEST_CASE("convert rejects an unknown target kind") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("convert " + chain + " --to lattice");
    CHECK(r.code == 2);
}

// ── check ──

TEST_CASE("check s4 splits pass and fail by exit code") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult ok = run_cli("check s4 " + chain);
    CHECK(ok.code == 0);
    CHECK(first_line_json(ok.out)["verdict"] == "pass");

    // 0 -> 1 -> 2 without the composite: transitivity fails
    std::string broken = write_temp(
        "broken.json",
        json{{"worlds", 3},
             {"relation", json::array({json::array({0, 0}), json::array({1, 1}),
                                       json::array({2, 2}), json::array({0, 1}),
                                       json::array({1, 2})})}}
            .dump());
    RunResult bad = run_cli("check s4 " + broken);
    CHECK(bad.code == 1);
    json j = first_line_json(bad.out);
    CHECK(j["verdict"] == "fail");
    CHECK(j["counterexample"]["failed"] == "transitivity");
}

TEST_CASE("check pmorphism validates a collapse map") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    std::string point = write_temp(
        "point.json",
        json{{"worlds", 1}, {"relation", json::array({json::array({0, 0})})}}
            .dump());
    RunResult ok = run_cli("check pmorphism " + chain + " " + point +
                           " --map 0,0");
    CHECK(ok.code == 0);
    CHECK(first_line_json(ok.out)["onto"] == true);

    // identity into the chain from the discrete pair: back condition fails
    std::string discrete = write_temp(
        "discrete.json",
        json{{"worlds", 2}, {"relation", json::array({json::array({0, 0}),
                                                      json::array({1, 1})})}}
            .dump());
    RunResult bad = run_cli("check pmorphism " + discrete + " " + chain +
                            " --map 0,1");
    CHECK(bad.code == 1);
}

TEST_CASE("check interior runs on space files") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    std::string space_file = (temp_dir() / "chain2_space.json").string();
    run_cli("convert " + chain + " --to space --out " + space_file);
    RunResult r = run_cli("check interior " + space_file + " " + space_file +
                          " --map 0,1");
    CHECK(r.code == 0);
    CHECK(first_line_json(r.out)["verdict"] == "pass");
}

TEST_CASE("check descriptive reports all three parts on a powerset frame") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    RunResult r = run_cli("check descriptive " + chain);
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["differentiated"] == true);
    CHECK(j["compact"] == true);
    CHECK(j["tight"] == true);
}

TEST_CASE("check connected and well-connected agree on a chain") {
    std::string chain = frame_file("chain2.json", make_chain(2));
    CHECK(run_cli("check connected " + chain).code == 0);
    CHECK(run_cli("check well-connected " + chain).code == 0);

    std::string discrete = write_temp(
        "discrete.json",
        json{{"worlds", 2}, {"relation", json::array({json::array({0, 0}),
                                                      json::array({1, 1})})}}
            .dump());
    CHECK(run_cli("check connected " + discrete).code == 1);
}

TEST_CASE("missing files and bad arguments exit 2") {
    CHECK(run_cli("check s4 /nonexistent/frame.json").code == 2);
    CHECK(run_cli("validity").code == 2);   // missing positionals
    CHECK(run_cli("frobnicate").code == 2); // unknown subcommand
}
