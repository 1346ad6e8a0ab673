#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hur/problem_io.hpp"
#include "support/instances.hpp"

using namespace hur;

namespace {

const std::string kLin = R"({
  "problem": {"g": "1", "K": "0.5*v", "F": "0"},
  "lipschitz": {"l_g": 0, "l_h": 1, "N": 1, "l_f1": 1, "l_f2": 1, "l_K": "0.5", "l_F": "0",
                "l_1": 0.5, "l_2": 0, "alpha": 1, "m": 0.5},
  "domain": {"L": 1, "n": 9, "R": 1, "m_nodes": 3, "tau": 1}
})";

Json lin_doc() { return Json::parse(kLin); }

template <typename E>
std::string path_of(const Json& doc) {
    try {
        parse_problem(doc);
    } catch (const E& e) {
        return e.path();
    }
    return "<no error>";
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("minimal LIN file") {
    const ProblemSetup s = parse_problem_text(kLin);
    const ProblemInstance& p = s.instance;
    CHECK(print_canonical(p.h_map) == "v");
    CHECK(print_canonical(p.f1_map()) == "v");
    CHECK(print_canonical(p.K_spec.kernel) == "(0.5 * v)");
    CHECK(p.domain == Domain(1.0, 9, 1.0, 3, 1.0));
    CHECK(p.lip.l_1 == 0.5);
    CHECK(s.solver.tol == 1e-10);
    CHECK(s.solver.max_iter == 200);
    CHECK(s.stability.epsilon == 0.1);
    CHECK_FALSE(s.stability.phi.has_value());
    CHECK(s.certify.samples == 1000);
}

TEST_CASE("shipped problem files load") {
    for (const char* name : {"lin.json", "bad.json", "mixed.json"})
        CHECK_NOTHROW(load_problem(std::string(HUR_SOURCE_DIR) + "/tools/problems/" + name));
}

TEST_CASE("expression errors name the field") {
    Json doc = lin_doc();
    doc["problem"]["K"] = "q*v";
    CHECK(path_of<ExpressionFieldError>(doc) == "problem.K");
    doc = lin_doc();
    doc["problem"]["g"] = "r + v";  // r is not allowed in g
    CHECK(path_of<ExpressionFieldError>(doc) == "problem.g");
    doc = lin_doc();
    doc["lipschitz"]["l_K"] = "v";
    CHECK(path_of<ExpressionFieldError>(doc) == "lipschitz.l_K");
    doc = lin_doc();
    doc["problem"]["F"] = "sin(";
    CHECK(path_of<ExpressionFieldError>(doc) == "problem.F");
}

TEST_CASE("schema violations") {
    Json doc = lin_doc();
    doc["domain"]["n"] = 1;
    CHECK(path_of<SchemaError>(doc) == "domain.n");

    doc = lin_doc();
    doc["domain"]["extra"] = 3;
    CHECK(path_of<SchemaError>(doc) == "domain.extra");

    doc = lin_doc();
    doc["bogus"] = Json::object();
    CHECK(path_of<SchemaError>(doc) == "bogus");

    doc = lin_doc();
    doc["lipschitz"].erase("m");
    CHECK(path_of<SchemaError>(doc) == "lipschitz.m");

    doc = lin_doc();
    doc.erase("domain");
    CHECK(path_of<SchemaError>(doc) == "domain");

    doc = lin_doc();
    doc["lipschitz"]["l_g"] = -1;
    CHECK(path_of<SchemaError>(doc) == "lipschitz.l_g");

    doc = lin_doc();
    doc["domain"]["L"] = "1";
    CHECK(path_of<SchemaError>(doc) == "domain.L");

    doc = lin_doc();
    doc["domain"]["R"] = 0.5;
    CHECK(path_of<SchemaError>(doc) == "domain");

    doc = lin_doc();
    doc["solver"] = {{"tol", 0}};
    CHECK(path_of<SchemaError>(doc) == "solver.tol");

    doc = lin_doc();
    doc["certify"] = {{"v_range", {1, 0}}};
    CHECK(path_of<SchemaError>(doc) == "certify.v_range");
}

TEST_CASE("malformed JSON") {
    CHECK_THROWS_AS(parse_problem_text("{\"problem\": "), ParseError);
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ParseError);
}

TEST_CASE("round trip preserves every evaluation") {
    ProblemSetup s = parse_problem(lin_doc());
    s.instance = hur::testing::mixed();
    s.stability.phi = hur::testing::pt("0.1 + x*y");
    s.stability.tol_disc = 1e-6;
    s.certify.v_range = {-3.0, 4.5};
    const ProblemSetup back = parse_problem(problem_to_json(s));
    CHECK(problem_to_json(back).dump() == problem_to_json(s).dump());

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const ProblemInstance& a = s.instance;
    const ProblemInstance& b = back.instance;
    for (int i = 0; i < 200; ++i) {
        Bindings bind{};
        for (double& v : bind) v = u(rng);
        CHECK(a.g.evaluate(bind) == b.g.evaluate(bind));
        CHECK(a.h_map.evaluate(bind) == b.h_map.evaluate(bind));
        CHECK(a.K_spec.kernel.evaluate(bind) == b.K_spec.kernel.evaluate(bind));
        CHECK(a.F_spec.kernel.evaluate(bind) == b.F_spec.kernel.evaluate(bind));
        CHECK(a.lip.l_K.evaluate(bind) == b.lip.l_K.evaluate(bind));
        CHECK(a.lip.l_F.evaluate(bind) == b.lip.l_F.evaluate(bind));
        CHECK(s.stability.phi->evaluate(bind) == back.stability.phi->evaluate(bind));
    }
    CHECK(b.domain == a.domain);
    CHECK(b.lip.m == a.lip.m);
    CHECK(back.stability.tol_disc == s.stability.tol_disc);
    CHECK(back.certify.v_range.hi == 4.5);
}

TEST_CASE("reports serialize deterministically") {
    const ProblemInstance p = hur::testing::mixed();
    const ContractionCertificate c1 = certify(p);
    const ContractionCertificate c2 = certify(p);
    std::filesystem::create_directories(HUR_WORK_DIR);
    const std::string a = std::string(HUR_WORK_DIR) + "/cert_a.json";
    const std::string b = std::string(HUR_WORK_DIR) + "/cert_b.json";
    write_json(a, to_json(c1));
    write_json(b, to_json(c2));
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).back() == '\n');

    const Json j = to_json(c1);
    CHECK(j.begin().key() == "q");
    CHECK(j["flags"]["C8"] == true);
    // Undefined constants become null.
    ProblemInstance bad = p;
    bad.lip.l_g = 5.0;
    const Json jb = to_json(certify(bad));
    CHECK(jb["c"].is_null());
    CHECK(jb["C_hur"].is_null());
}

TEST_CASE("save and reload") {
    std::filesystem::create_directories(HUR_WORK_DIR);
    const std::string path = std::string(HUR_WORK_DIR) + "/saved.json";
    const ProblemSetup s = parse_problem(lin_doc());
    save_problem(path, s);
    const ProblemSetup back = load_problem(path);
    CHECK(problem_to_json(back) == problem_to_json(s));
}
