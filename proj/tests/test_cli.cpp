#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(EIKONAL_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("eikonal-cli-test-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("density of the semicircle at the origin") {
    const auto d = scratch("density");
    const auto r = run("density --ensemble gue --t 1 --grid -3:3:601 --out " + (d / "rho.csv").string());
    REQUIRE(r.code == 0);
    const auto s = json::parse(r.out);
    CHECK(s["schema"] == "1");
    CHECK(s.contains("timestamp"));
    std::ifstream in(d / "rho.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,rho");
    bool found = false;
    while (std::getline(in, line)) {
        double t, x, rho;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &rho) == 3);
        if (x == 0.0) {
            found = true;
            CHECK(std::abs(rho - 1.0 / std::numbers::pi) < 1e-6);
        }
    }
    CHECK(found);
    CHECK_FALSE(slurp(d / "rho.csv").find("T") != std::string::npos);
}

TEST_CASE("malformed grids exit 1 naming the field") {
    for (const char* g : {"''", "-3:3:1", "3:-3:10", "a:b:c"}) {
        const auto r = run(std::string("density --grid ") + g);
        CHECK(r.code == 1);
        CHECK(json::parse(r.out)["field"] == "grid");
    }
    const auto e = run("density --ensemble nope --grid -1:1:5");
    CHECK(e.code == 1);
    CHECK(json::parse(e.out)["field"] == "ensemble.variant");
    const auto c = run("validate --case nope");
    CHECK(c.code == 1);
    CHECK(json::parse(c.out)["field"] == "case");
}

TEST_CASE("config file and flag precedence") {
    const auto d = scratch("config");
    std::ofstream(d / "cfg.json") << R"({"t": 4, "grid": {"min": -1, "max": 1, "points": 3}, "out": ")"
                                  << (d / "a.csv").string() << "\"}";
    const auto r = run("density --config " + (d / "cfg.json").string() + " --t 1");
    REQUIRE(r.code == 0);
    const auto body = slurp(d / "a.csv");
    CHECK(body.find("\n1.000000000000e+00,0.000000000000e+00,3.18309") != std::string::npos);
}

TEST_CASE("mc runs are byte-identical for the same seed") {
    const auto d = scratch("mc");
    for (const char* name : {"a", "b"}) {
        const auto r = run("mc --ensemble ginibre --n 48 --seeds 3 --seed 5 --out " + (d / name).string() + ".csv");
        REQUIRE(r.code == 0);
    }
    CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
    CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
    CHECK(slurp(d / "a.csv").find("o_ii") != std::string::npos);
    const auto other = run("mc --ensemble ginibre --n 48 --seeds 3 --seed 6 --out " + (d / "c.csv").string());
    REQUIRE(other.code == 0);
    CHECK(slurp(d / "a.csv") != slurp(d / "c.csv"));
}

TEST_CASE("hciz writes fields and action") {
    const auto d = scratch("hciz");
    std::ofstream(d / "p.json") << R"({"atoms_a":[[0,1]],"atoms_b":[[0,1]],"beta":2})";
    const auto r = run("hciz --problem " + (d / "p.json").string() + " --grid -1.1:1.1:200 --out " +
                       (d / "h.csv").string());
    REQUIRE(r.code == 0);
    const auto a = json::parse(slurp(d / "h.action.json"));
    CHECK(std::abs(std::stod(a["log_coefficient"].get<std::string>()) - 0.5) < 0.05);
}

TEST_CASE("validate exit codes") {
    const auto d = scratch("validate");
    const auto ok = run("validate --case ginibre-overlap --n 256 --seeds 20 --out " + d.string());
    CHECK(ok.code == 0);
    CHECK(fs::exists(d / "ginibre-overlap.csv"));
    CHECK(fs::exists(d / "ginibre-overlap.json"));
    const auto bad = run("validate --case ginibre-radial --n 4 --seeds 1 --out " + d.string());
    CHECK(bad.code == 2);
    CHECK(json::parse(bad.out)["pass"] == false);
}
