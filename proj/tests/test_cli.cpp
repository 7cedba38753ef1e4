#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
    int exit_code;
    std::string out;
    std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = pslab::cli::dispatch(std::move(args), out, err);
    return Invocation{code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        root_ = fs::temp_directory_path() / ("pslab-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(root_);
    }
    ~TempDir() { fs::remove_all(root_); }

    std::string write(const std::string& name, const std::string& content) {
        fs::path p = root_ / name;
        std::ofstream f(p);
        f << content;
        return p.string();
    }

private:
    fs::path root_;
};

} // namespace

TEST_CASE("run reports exact terminal distributions and exit codes") {
    TempDir dir;
    std::string prog = dir.write("mod2.pw", "X := X mod 2\n");

    Invocation ok = run_cli({"run", prog, "--state", "{X:1}"});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("{X:1}: 1") != std::string::npos);
    CHECK(ok.out.find("exact: yes") != std::string::npos);

    Invocation fault = run_cli({"run", prog, "--state", "{}"});
    CHECK(fault.exit_code == 1); // fault-dominant
    CHECK(fault.out.find("fault: 1") != std::string::npos);

    Invocation geo = run_cli({"run", dir.write("geo.pw", "while X = 1 do { X ~ bernoulli(1/2) }\n"),
                              "--state", "{X:1}", "--absorb", "1000"});
    CHECK(geo.exit_code == 0);
    CHECK(geo.out.find("{X:0}: 1") != std::string::npos);
}

TEST_CASE("run emits versioned JSON with exact rational strings") {
    TempDir dir;
    std::string prog = dir.write("geo.pw", "while X = 1 do { X ~ bernoulli(1/2) }\n");
    Invocation r = run_cli({"run", prog, "--state", "{X:1}", "--bounded", "6", "--json"});
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "run");
    CHECK(j["exact"] == false);
    CHECK(j["residual"] == "1/4");
    CHECK(j["fault"] == "0");
    REQUIRE(j["terminal"].size() == 1);
    CHECK(j["terminal"][0]["state"] == "{X:0}");
    CHECK(j["terminal"][0]["prob"] == "3/4");
    CHECK(j["timing_ms"].is_number());
}

TEST_CASE("trace output matches the golden transition dump") {
    TempDir dir;
    std::string prog = dir.write("two.pw", "X := 1; Y := X\n");
    Invocation first = run_cli({"run", prog, "--state", "{}", "--trace", "--bounded", "10"});
    Invocation second = run_cli({"run", prog, "--state", "{}", "--trace", "--bounded", "10"});
    CHECK(first.out == second.out);
    // `hash | state | label | prob`, one line per transition, stable hashes
    CHECK(first.out.find("7e26f63107bc0a91 | {} | . | 1\n"
                         "06df25a6809488ef | {X:1} | . | 1\n") == 0);

    std::string sampler = dir.write("coin.pw", "X ~ bernoulli(1/3)\n");
    Invocation coin = run_cli({"run", sampler, "--state", "{}", "--trace", "--bounded", "10"});
    CHECK(coin.out.find(" | {} | ~0 | 2/3\n") != std::string::npos);
    CHECK(coin.out.find(" | {} | ~1 | 1/3\n") != std::string::npos);
}

TEST_CASE("check maps verdicts to exit codes") {
    TempDir dir;
    std::string spec = dir.write("eq19.spec",
                                 "pre: top\n"
                                 "program: X := X mod 2\n"
                                 "post: [X = 0 || X = 1]\n"
                                 "input: 1 {}\n");
    Invocation fails = run_cli({"check", spec});
    CHECK(fails.exit_code == 1);
    CHECK(fails.out.find("reason: safety-violation") != std::string::npos);

    Invocation holds = run_cli({"check", spec, "--unsafe"});
    CHECK(holds.exit_code == 0);
    CHECK(holds.out.find("verdict: holds") != std::string::npos);

    std::string loop = dir.write("loop.spec",
                                 "pre: [X = 0 || X = 1]\n"
                                 "program: while X = 1 do { X ~ bernoulli(1/2) }\n"
                                 "post: [X = 0]\n"
                                 "input: 1 {X:1}\n"
                                 "mode: bounded(4)\n");
    Invocation unknown = run_cli({"check", loop});
    CHECK(unknown.exit_code == 3);
    CHECK(unknown.out.find("verdict: unknown") != std::string::npos);

    // the CLI mode flag overrides the file mode
    Invocation absorbed = run_cli({"check", loop, "--absorb", "1000", "--total"});
    CHECK(absorbed.exit_code == 0);

    Invocation usage = run_cli({"check", dir.write("noinput.spec",
                                                   "pre: top\nprogram: skip\npost: top\n")});
    CHECK(usage.exit_code == 2);
    CHECK(usage.err.find("input") != std::string::npos);
}

TEST_CASE("check applies the frame section") {
    TempDir dir;
    std::string spec = dir.write("eq20.spec",
                                 "pre: top\n"
                                 "program: X := X mod 2\n"
                                 "post: [X = 0 || X = 1]\n"
                                 "frame: [Y = 0 || Y = 1]\n"
                                 "input: 1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}\n");
    Invocation v = run_cli({"check", spec, "--unsafe", "--json"});
    CHECK(v.exit_code == 1);
    json j = json::parse(v.out);
    CHECK(j["schema"] == 1);
    CHECK(j["reason"] == "postcondition-false");
    CHECK(j["terminal"] == "1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}");
}

TEST_CASE("tightness prints the terminal distribution and tables") {
    TempDir dir;
    std::string spec = dir.write("eq19.spec",
                                 "pre: top\n"
                                 "program: X := X mod 2\n"
                                 "post: [X = 0 || X = 1]\n");
    Invocation v = run_cli({"tightness", spec, "--unsafe", "--state", "1/2 {X:0} + 1/2 {X:1}"});
    CHECK(v.exit_code == 1);
    CHECK(v.out.find("reason: tightness-violated") != std::string::npos);
    CHECK(v.out.find("terminal: 1/2 {X:0} + 1/2 {X:1}") != std::string::npos);
    CHECK(v.out.find("table:") != std::string::npos);

    std::string tight = dir.write("tight.spec",
                                  "pre: [X = 0 || X = 1]\n"
                                  "program: X := X mod 2\n"
                                  "post: [X = 0 || X = 1]\n"
                                  "input: 1/2 {X:0} + 1/2 {X:1}\n");
    CHECK(run_cli({"tightness", tight}).exit_code == 0);
}

TEST_CASE("frame validates the side condition") {
    TempDir dir;
    std::string good = dir.write("good.spec",
                                 "pre: [X = 0 || X = 1]\n"
                                 "program: X := X mod 2\n"
                                 "post: [X = 0 || X = 1]\n"
                                 "frame: [Y = 0 || Y = 1]\n");
    Invocation ok = run_cli({"frame", good});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("framed pre:  ([X = 0 || X = 1] * [Y = 0 || Y = 1])") != std::string::npos);

    std::string bad = dir.write("bad.spec",
                                "pre: top\n"
                                "program: X := 1\n"
                                "post: top\n"
                                "frame: [X = 0]\n");
    Invocation violated = run_cli({"frame", bad});
    CHECK(violated.exit_code == 1);
    CHECK(violated.out.find("offending variables: {X}") != std::string::npos);
}

TEST_CASE("search prints witnesses and round-trips them") {
    TempDir dir;
    std::string spec = dir.write("eq20.spec",
                                 "pre: top\n"
                                 "program: X := X mod 2\n"
                                 "post: [X = 0 || X = 1]\n"
                                 "frame: [Y = 0 || Y = 1]\n");
    Invocation found = run_cli({"search", spec, "--unsafe", "--vars", "X,Y", "--values", "0..1",
                                "--max-points", "2", "--denom", "2", "--json"});
    CHECK(found.exit_code == 1);
    json j = json::parse(found.out);
    std::string witness = j["witness"];
    CHECK(witness == "1/2 {X:0, Y:0} + 1/2 {X:1, Y:1}");

    // feeding the emitted witness back reproduces the verdict
    std::string with_input = dir.write("again.spec",
                                       "pre: top\n"
                                       "program: X := X mod 2\n"
                                       "post: [X = 0 || X = 1]\n"
                                       "frame: [Y = 0 || Y = 1]\n");
    Invocation again = run_cli({"check", with_input, "--unsafe", "--state", witness, "--json"});
    CHECK(again.exit_code == 1);
    json k = json::parse(again.out);
    CHECK(k["reason"] == j["witness_verdict"]["reason"]);

    std::string valid = dir.write("valid.spec",
                                  "pre: [X = 0]\n"
                                  "program: X := X + 1\n"
                                  "post: [X = 1]\n");
    Invocation none = run_cli({"search", valid, "--vars", "X", "--values", "0..1"});
    CHECK(none.exit_code == 0);
    CHECK(none.out.find("0 failures") != std::string::npos);
}

TEST_CASE("program files can be referenced from spec files") {
    TempDir dir;
    dir.write("prog.pw", "# comment inside program\nX := X mod 2\n");
    std::string spec = dir.write("ref.spec",
                                 "pre: [X = 0 || X = 1]\n"
                                 "program: @prog.pw\n"
                                 "post: [X = 0 || X = 1]\n"
                                 "input: 1 {X:1}\n");
    CHECK(run_cli({"check", spec}).exit_code == 0);
}

TEST_CASE("usage and parse errors exit with code 2") {
    TempDir dir;
    CHECK(run_cli({"run", "/nonexistent/x.pw"}).exit_code == 2);
    CHECK(run_cli({"bogus-subcommand"}).exit_code == 2);
    CHECK(run_cli({"run", dir.write("bad.pw", "X := := 1\n")}).exit_code == 2);
    CHECK(run_cli({"check", dir.write("bad.spec", "post: top\n")}).exit_code == 2);
    Invocation bad_state =
        run_cli({"run", dir.write("ok.pw", "skip\n"), "--state", "1/3 {X:0} + 1/3 {X:1}"});
    CHECK(bad_state.exit_code == 2);
    CHECK(run_cli({"--help"}).exit_code == 0);
}
