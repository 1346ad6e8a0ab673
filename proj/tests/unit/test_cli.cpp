#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hur/cli.hpp"
#include "hur/problem_io.hpp"
#include "support/instances.hpp"

namespace fs = std::filesystem;
using namespace hur;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string problem(const char* name) { return std::string(HUR_SOURCE_DIR) + "/tools/problems/" + name; }

std::string fresh_dir(const char* name) {
    const fs::path p = fs::path(HUR_WORK_DIR) / name;
    fs::remove_all(p);
    return p.string();
}

Json read_json(const std::string& path) {
    std::ifstream f(path);
    return Json::parse(f);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("solve on LIN(0.5)") {
    const std::string dir = fresh_dir("solve");
    const Run r = run({"solve", "-p", problem("lin.json"), "-o", dir});
    CHECK(r.code == 0);
    const Json j = read_json(dir + "/solve.json");
    CHECK(j["converged"] == true);
    const double corner = j["u_star_far_corner"].get<double>();
    CHECK(std::fabs(corner - hur::testing::lin_series(0.5, 1.0)) / hur::testing::lin_series(0.5, 1.0) <= 5e-3);
    CHECK(fs::exists(dir + "/u_star.csv"));
}

TEST_CASE("solve output is byte-identical across runs and thread counts") {
    const std::string a = fresh_dir("det_a"), b = fresh_dir("det_b");
    REQUIRE(run({"solve", "-p", problem("mixed.json"), "-o", a}).code == 0);
    REQUIRE(run({"solve", "-p", problem("mixed.json"), "-o", b, "--threads", "3"}).code == 0);
    CHECK(slurp(a + "/solve.json") == slurp(b + "/solve.json"));
    CHECK(slurp(a + "/u_star.csv") == slurp(b + "/u_star.csv"));
}

TEST_CASE("certify with l_g = l_h = 1 fails with exit 2") {
    const std::string dir = fresh_dir("bad");
    const Run r = run({"certify", "-p", problem("bad.json"), "-o", dir});
    CHECK(r.code == 2);
    const Json j = read_json(dir + "/certificate.json");
    CHECK(j["flags"]["C8"] == false);
    CHECK(j["c"].is_null());
}

TEST_CASE("certify passes on the shipped instances") {
    for (const char* name : {"lin.json", "mixed.json"}) {
        const std::string dir = fresh_dir("cert_ok");
        CHECK(run({"certify", "-p", problem(name), "-o", dir}).code == 0);
    }
}

TEST_CASE("stability with epsilon 0.1") {
    const std::string dir = fresh_dir("stab");
    const Run r = run({"stability", "-p", problem("lin.json"), "-o", dir, "--epsilon", "0.1"});
    CHECK(r.code == 0);
    const Json j = read_json(dir + "/stability.json");
    CHECK(j["hur_holds"] == true);
    CHECK(j["admissible"] == true);
    CHECK(j["min_slack"].get<double>() == doctest::Approx(0.1 * (std::exp(0.5) - 1)).epsilon(1e-5));
    for (const char* f : {"residual.csv", "phi.csv", "diff.csv", "bound.csv"}) CHECK(fs::exists(dir + "/" + f));

    const std::string dir2 = fresh_dir("stab_shape");
    CHECK(run({"stability", "-p", problem("mixed.json"), "-o", dir2}).code == 0);
}

TEST_CASE("sweep writes one row per parameter point") {
    const std::string dir = fresh_dir("sweep");
    const Run r = run({"sweep", "-p", problem("lin.json"), "-o", dir, "--vary", "l_g=0:1:3", "--vary", "l_h=0.5:1:2"});
    REQUIRE(r.code == 0);
    std::ifstream f(dir + "/sweep.csv");
    std::vector<std::string> lines;
    for (std::string line; std::getline(f, line);) lines.push_back(line);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "l_g,l_h,q,C8_pass,ii_pass,C_hur");
    // l_g=0, l_h=0.5: q = l_1 = 0.5, C_hur = e^0.5
    CHECK(lines[1].rfind("0,0.5,0.5,1,1,", 0) == 0);
    // l_g=1, l_h=1: q = 1.5, l_g N = 1
    CHECK(lines[6] == "1,1,1.5,0,0,");
    // l_g=0.5, l_h=1: q = 1.0 fails (C8) while l_g N = 0.5 passes (ii).
    CHECK(lines[4].rfind("0.5,1,1,0,1,", 0) == 0);
}

TEST_CASE("eval-expr") {
    const Run r = run({"eval-expr", "x*y*z", "--var", "x=1", "--var", "y=2", "--var", "z=3", "--canonical"});
    CHECK(r.code == 0);
    CHECK(r.out.find("((x * y) * z)") != std::string::npos);
    CHECK(r.out.find("6") != std::string::npos);
    const Run bad = run({"eval-expr", "x*q"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("'q'") != std::string::npos);
}

TEST_CASE("usage and IO errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"solve"}).code == 1);
    CHECK(run({"solve", "-p", "/nonexistent.json"}).code == 1);
    CHECK(run({"sweep", "-p", problem("lin.json"), "--vary", "nope=0:1:2", "-o", fresh_dir("sw")}).code == 1);
    CHECK(run({"sweep", "-p", problem("lin.json"), "--vary", "l_g=0:1", "-o", fresh_dir("sw")}).code == 1);
    CHECK(run({"solve", "-p", problem("lin.json"), "--threads", "0"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}
