#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli_app.hpp"

namespace fs = std::filesystem;
using icboot::cli::run_cli;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("icboot_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::set<std::string> listing(const fs::path& dir) {
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
    return names;
}

}  // namespace

TEST_CASE("fit writes the step function and the sidecar") {
    auto dir = scratch("fit");
    write(dir / "cs.csv", "t,delta\n1.0,1\n2.0,0\n");
    auto r = cli({"fit", "--format", "current-status", "--input", (dir / "cs.csv").string(), "--out",
                  (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(listing(dir / "out") == std::set<std::string>{"npmle.csv", "resolved_config.txt"});
    CHECK(slurp(dir / "out" / "npmle.csv") == "s,cumulative\n1,0.5\n2,0.5\n");
    CHECK_THAT(slurp(dir / "out" / "resolved_config.txt"), ContainsSubstring("seed = 1"));
}

TEST_CASE("exit codes") {
    auto dir = scratch("codes");
    CHECK(cli({"fit", "--bogus"}).code == 1);
    CHECK(cli({}).code == 1);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"fit", "--input", (dir / "missing.csv").string()}).code == 1);
    write(dir / "bad.csv", "t,delta\n1,7\n");
    auto bad = cli({"fit", "--input", (dir / "bad.csv").string(), "--out", (dir / "o").string()});
    CHECK(bad.code == 1);
    CHECK_THAT(bad.err, ContainsSubstring("line 2"));
    CHECK_FALSE(fs::exists(dir / "o"));
    std::string iv = "left,right\n";
    for (int i = 0; i < 30; ++i) iv += std::to_string(i % 7) + "," + std::to_string(i % 7 + 1 + i % 3) + "\n";
    write(dir / "iv.csv", iv);
    auto slow = cli({"fit", "--format", "intervals", "--input", (dir / "iv.csv").string(), "--max-iter", "1", "--tol",
                     "1e-300", "--out", (dir / "n").string()});
    CHECK(slow.code == 2);
    CHECK_FALSE(fs::exists(dir / "n"));
}

TEST_CASE("config file values are overridden by flags and unknown keys rejected") {
    auto dir = scratch("config");
    write(dir / "cs.csv", "t,delta\n1.0,1\n2.0,0\n1.5,1\n0.5,0\n");
    write(dir / "run.cfg", "# comment\ninput = " + (dir / "cs.csv").string() + "\nseed = 5\nout = " +
                               (dir / "a").string() + "\n");
    REQUIRE(cli({"fit", "--config", (dir / "run.cfg").string()}).code == 0);
    CHECK_THAT(slurp(dir / "a" / "resolved_config.txt"), ContainsSubstring("seed = 5"));
    REQUIRE(cli({"fit", "--config", (dir / "run.cfg").string(), "--seed", "9", "--out", (dir / "b").string()}).code == 0);
    CHECK_THAT(slurp(dir / "b" / "resolved_config.txt"), ContainsSubstring("seed = 9"));
    write(dir / "bad.cfg", "inptu = x\n");
    auto r = cli({"fit", "--config", (dir / "bad.cfg").string(), "--input", (dir / "cs.csv").string()});
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("inptu"));
    // the sidecar is itself a valid config
    REQUIRE(cli({"fit", "--config", (dir / "b" / "resolved_config.txt").string(), "--out", (dir / "c").string()})
                .code == 0);
    CHECK(slurp(dir / "b" / "npmle.csv") == slurp(dir / "c" / "npmle.csv"));
}

TEST_CASE("auto bandwidth equals bandwidth then ci") {
    auto dir = scratch("auto");
    std::string data = "id,time,delta\n";
    unsigned x = 12345;
    for (int i = 0; i < 80; ++i) {
        x = x * 1103515245u + 12345u;
        double t = 0.05 + (x % 1000) / 520.0;
        x = x * 1103515245u + 12345u;
        data += std::to_string(i) + "," + std::to_string(t) + "," + std::to_string((x >> 8) % 2) + "\n";
    }
    write(dir / "d.csv", data);
    const std::string in = (dir / "d.csv").string();
    REQUIRE(cli({"ci", "--input", in, "--format", "mixed-long", "--at", "1.0", "--scheme", "smle", "--bandwidth",
                 "auto", "--level", "0.9", "--boot", "60", "--seed", "7", "--out", (dir / "auto").string()})
                .code == 0);
    REQUIRE(cli({"bandwidth", "--input", in, "--format", "mixed-long", "--at", "1.0", "--boot", "60", "--seed", "7",
                 "--out", (dir / "bw").string()})
                .code == 0);
    auto sel = slurp(dir / "bw" / "selected_bandwidth.csv");
    auto h = sel.substr(2, sel.size() - 3);
    REQUIRE(cli({"ci", "--input", in, "--format", "mixed-long", "--at", "1.0", "--scheme", "smle", "--bandwidth", h,
                 "--level", "0.9", "--boot", "60", "--seed", "7", "--out", (dir / "manual").string()})
                .code == 0);
    CHECK(slurp(dir / "auto" / "ci.csv") == slurp(dir / "manual" / "ci.csv"));
}

TEST_CASE("repeated runs are byte identical across thread counts") {
    auto dir = scratch("determinism");
    write(dir / "cs.csv", "t,delta\n0.2,0\n0.4,1\n0.6,0\n0.8,1\n1.0,1\n1.2,0\n1.4,1\n1.6,1\n1.8,1\n2.0,1\n"
                          "0.3,0\n0.5,0\n0.7,1\n0.9,0\n1.1,1\n1.3,1\n1.5,0\n1.7,1\n1.9,1\n0.1,0\n");
    auto run = [&](const char* threads, const std::string& out) {
        setenv("ICBOOT_THREADS", threads, 1);
        auto r = cli({"ci", "--input", (dir / "cs.csv").string(), "--at", "1.0", "--boot", "100", "--seed", "3",
                      "--out", out});
        unsetenv("ICBOOT_THREADS");
        return r.code;
    };
    REQUIRE(run("1", (dir / "a").string()) == 0);
    REQUIRE(run("4", (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "ci.csv") == slurp(dir / "b" / "ci.csv"));
}

TEST_CASE("realdata table") {
    auto dir = scratch("realdata");
    auto r = cli({"realdata", "--at", "20", "--at", "30", "--level", "0.9", "--level", "0.95", "--scheme", "smle",
                  "--bandwidth", "10", "--out", (dir / "o").string()});
    REQUIRE(r.code == 0);
    auto table = slurp(dir / "o" / "table5.csv");
    CHECK_THAT(table, ContainsSubstring("T=1,smle,20,0.55"));
    CHECK_THAT(table, ContainsSubstring("bcos-1"));
    CHECK(listing(dir / "o") == std::set<std::string>{"table5.csv", "resolved_config.txt"});
}

TEST_CASE("standalone tool binary runs") {
    auto dir = scratch("binary");
    std::string cmd = std::string(ICBOOT_TOOL_PATH) + " simulate chernoff --replicates 200 --out " +
                      (dir / "o").string() + " > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    auto q = slurp(dir / "o" / "chernoff_quantiles.csv");
    CHECK(std::count(q.begin(), q.end(), '\n') == 20);
}
