#include "hur/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hur {

namespace {

std::string join(const std::string& parent, const std::string& key) { return parent.empty() ? key : parent + "." + key; }

void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.contains(it.key())) throw SchemaError(join(path, it.key()), "unknown key");
}

const Json& require_object(const Json& parent, const std::string& key, const std::string& path) {
    auto it = parent.find(key);
    if (it == parent.end()) throw SchemaError(join(path, key), "missing section");
    if (!it->is_object()) throw SchemaError(join(path, key), "expected an object");
    return *it;
}

const Json* optional_object(const Json& parent, const std::string& key, const std::string& path) {
    auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    if (!it->is_object()) throw SchemaError(join(path, key), "expected an object");
    return &*it;
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(join(path, key), "missing key");
    return *it;
}

double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
    return d;
}

double nonnegative(const Json& obj, const std::string& key, const std::string& path) {
    const double d = as_number(require_key(obj, key, path), join(path, key));
    if (d < 0.0) throw SchemaError(join(path, key), "must be nonnegative");
    return d;
}

std::size_t as_count(const Json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer()) throw SchemaError(path, "must be nonnegative");
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 1e15) return static_cast<std::size_t>(d);
    }
    throw SchemaError(path, "expected a nonnegative integer");
}

Expression as_expression(const Json& v, const std::string& path, VarSet allowed) {
    if (!v.is_string()) throw SchemaError(path, "expected an expression string");
    try {
        return parse(v.get<std::string>(), allowed);
    } catch (const ExpressionError& e) {
        throw ExpressionFieldError(path, e.what());
    }
}

Expression expression_or(const Json& obj, const std::string& key, const std::string& path, VarSet allowed,
                         const char* fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return parse(fallback, allowed);
    return as_expression(*it, join(path, key), allowed);
}

Json number_or_null(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double max_value(const Field3D& f) {
    double best = 0.0;
    for (double v : f.values()) best = std::max(best, v);
    return best;
}

} // namespace

ProblemSetup parse_problem(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("", "problem file must be a JSON object");
    reject_unknown(doc, "", {"problem", "lipschitz", "domain", "solver", "stability", "certify"});

    ProblemSetup setup;
    ProblemInstance& p = setup.instance;

    const Json& prob = require_object(doc, "problem", "");
    reject_unknown(prob, "problem", {"g", "h", "f1", "f2", "K", "F"});
    p.g = as_expression(require_key(prob, "g", "problem"), "problem.g", vars::pointwise_map);
    p.h_map = expression_or(prob, "h", "problem", vars::pointwise_map, "v");
    p.K_spec.kernel = as_expression(require_key(prob, "K", "problem"), "problem.K", vars::kernel);
    p.K_spec.inner_map = expression_or(prob, "f1", "problem", vars::pointwise_map, "v");
    p.F_spec.kernel = as_expression(require_key(prob, "F", "problem"), "problem.F", vars::kernel);
    p.F_spec.inner_map = expression_or(prob, "f2", "problem", vars::pointwise_map, "v");

    const Json& lip = require_object(doc, "lipschitz", "");
    reject_unknown(lip, "lipschitz", {"l_g", "l_h", "N", "l_f1", "l_f2", "l_K", "l_F", "l_1", "l_2", "alpha", "m"});
    p.lip.l_g = nonnegative(lip, "l_g", "lipschitz");
    p.lip.l_h = nonnegative(lip, "l_h", "lipschitz");
    p.lip.N = nonnegative(lip, "N", "lipschitz");
    p.lip.l_f1 = nonnegative(lip, "l_f1", "lipschitz");
    p.lip.l_f2 = nonnegative(lip, "l_f2", "lipschitz");
    p.lip.l_K = as_expression(require_key(lip, "l_K", "lipschitz"), "lipschitz.l_K", vars::lipschitz_kernel);
    p.lip.l_F = as_expression(require_key(lip, "l_F", "lipschitz"), "lipschitz.l_F", vars::lipschitz_kernel);
    p.lip.l_1 = nonnegative(lip, "l_1", "lipschitz");
    p.lip.l_2 = nonnegative(lip, "l_2", "lipschitz");
    p.lip.alpha = nonnegative(lip, "alpha", "lipschitz");
    p.lip.m = nonnegative(lip, "m", "lipschitz");

    const Json& dom = require_object(doc, "domain", "");
    reject_unknown(dom, "domain", {"L", "n", "R", "m_nodes", "tau"});
    const double L = as_number(require_key(dom, "L", "domain"), "domain.L");
    const std::size_t n = as_count(require_key(dom, "n", "domain"), "domain.n");
    const double R = as_number(require_key(dom, "R", "domain"), "domain.R");
    const std::size_t m_nodes = as_count(require_key(dom, "m_nodes", "domain"), "domain.m_nodes");
    const double tau = as_number(require_key(dom, "tau", "domain"), "domain.tau");
    if (n < 3) throw SchemaError("domain.n", "must be at least 3");
    if (m_nodes < 3) throw SchemaError("domain.m_nodes", "must be at least 3");
    try {
        p.domain = Domain(L, n, R, m_nodes, tau);
    } catch (const InvalidDomain& e) {
        throw SchemaError("domain", e.what());
    }

    if (const Json* solver = optional_object(doc, "solver", "")) {
        reject_unknown(*solver, "solver", {"tol", "max_iter"});
        if (solver->contains("tol")) {
            setup.solver.tol = as_number(solver->at("tol"), "solver.tol");
            if (!(setup.solver.tol > 0.0)) throw SchemaError("solver.tol", "must be positive");
        }
        if (solver->contains("max_iter")) {
            setup.solver.max_iter = as_count(solver->at("max_iter"), "solver.max_iter");
            if (setup.solver.max_iter < 1) throw SchemaError("solver.max_iter", "must be at least 1");
        }
    }

    if (const Json* st = optional_object(doc, "stability", "")) {
        reject_unknown(*st, "stability", {"shape", "epsilon", "phi", "tol_disc"});
        setup.stability.shape = expression_or(*st, "shape", "stability", vars::point, "1");
        if (st->contains("epsilon")) setup.stability.epsilon = as_number(st->at("epsilon"), "stability.epsilon");
        if (st->contains("phi") && !st->at("phi").is_null())
            setup.stability.phi = as_expression(st->at("phi"), "stability.phi", vars::point);
        if (st->contains("tol_disc")) {
            const double t = as_number(st->at("tol_disc"), "stability.tol_disc");
            if (t < 0.0) throw SchemaError("stability.tol_disc", "must be nonnegative");
            setup.stability.tol_disc = t;
        }
    }

    if (const Json* cs = optional_object(doc, "certify", "")) {
        reject_unknown(*cs, "certify", {"samples", "v_range"});
        if (cs->contains("samples")) {
            setup.certify.samples = as_count(cs->at("samples"), "certify.samples");
            if (setup.certify.samples < 100) throw SchemaError("certify.samples", "must be at least 100");
        }
        if (cs->contains("v_range")) {
            const Json& r = cs->at("v_range");
            if (!r.is_array() || r.size() != 2) throw SchemaError("certify.v_range", "expected [lo, hi]");
            const double lo = as_number(r[0], "certify.v_range[0]");
            const double hi = as_number(r[1], "certify.v_range[1]");
            if (!(hi > lo)) throw SchemaError("certify.v_range", "hi must exceed lo");
            setup.certify.v_range = {lo, hi};
        }
    }
    return setup;
}

ProblemSetup parse_problem_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

ProblemSetup load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("", "cannot open problem file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_problem_text(buf.str());
}

Json problem_to_json(const ProblemSetup& setup) {
    const ProblemInstance& p = setup.instance;
    Json doc;
    doc["problem"] = {{"g", print_canonical(p.g)},         {"h", print_canonical(p.h_map)},
                      {"f1", print_canonical(p.f1_map())}, {"f2", print_canonical(p.f2_map())},
                      {"K", print_canonical(p.K_spec.kernel)}, {"F", print_canonical(p.F_spec.kernel)}};
    doc["lipschitz"] = {{"l_g", p.lip.l_g},   {"l_h", p.lip.l_h}, {"N", p.lip.N},
                        {"l_f1", p.lip.l_f1}, {"l_f2", p.lip.l_f2}, {"l_K", print_canonical(p.lip.l_K)},
                        {"l_F", print_canonical(p.lip.l_F)}, {"l_1", p.lip.l_1}, {"l_2", p.lip.l_2},
                        {"alpha", p.lip.alpha}, {"m", p.lip.m}};
    doc["domain"] = {{"L", p.domain.L()},
                     {"n", p.domain.n()},
                     {"R", p.domain.R()},
                     {"m_nodes", p.domain.m_nodes()},
                     {"tau", p.domain.tau()}};
    doc["solver"] = {{"tol", setup.solver.tol}, {"max_iter", setup.solver.max_iter}};
    Json st = {{"shape", print_canonical(setup.stability.shape)}, {"epsilon", setup.stability.epsilon}};
    if (setup.stability.phi) st["phi"] = print_canonical(*setup.stability.phi);
    if (setup.stability.tol_disc) st["tol_disc"] = *setup.stability.tol_disc;
    doc["stability"] = st;
    doc["certify"] = {{"samples", setup.certify.samples},
                      {"v_range", {setup.certify.v_range.lo, setup.certify.v_range.hi}}};
    return doc;
}

void save_problem(const std::string& path, const ProblemSetup& setup) { write_json(path, problem_to_json(setup)); }

Json to_json(const SolveReport& report) {
    const Field3D& u = report.u_star;
    const std::size_t last = u.n() - 1;
    Json doc;
    doc["converged"] = report.converged;
    doc["iterations"] = report.iterations;
    doc["tol"] = report.tol;
    doc["final_step"] = report.residual_history.empty() ? Json(nullptr) : Json(report.residual_history.back());
    doc["residual_history"] = report.residual_history;
    doc["observed_ratios"] = report.observed_ratios;
    doc["u_star_bielecki_norm"] = bielecki_norm(u);
    doc["u_star_origin"] = u(0, 0, 0);
    doc["u_star_far_corner"] = u(last, last, last);
    return doc;
}

Json to_json(const ContractionCertificate& cert) {
    Json doc;
    doc["q"] = cert.q;
    doc["c"] = number_or_null(cert.c);
    doc["lgN"] = cert.lgN;
    doc["C_hur"] = number_or_null(cert.C_hur);
    doc["flags"] = {{"C7_valid", cert.flags.C7_valid}, {"C8", cert.flags.C8},
                    {"C9_alpha", cert.flags.C9_alpha}, {"C10_m", cert.flags.C10_m},
                    {"ii", cert.flags.ii},             {"lipschitz", cert.flags.lipschitz}};
    doc["all_pass"] = cert.all_pass();
    Json checks = Json::array();
    for (const auto& c : cert.validation_report)
        checks.push_back({{"name", c.name},
                          {"declared", c.declared},
                          {"estimated", finite_or_null(c.estimated)},
                          {"pass", c.pass},
                          {"note", c.note}});
    doc["validation_report"] = checks;
    return doc;
}

Json to_json(const StabilityReport& r) {
    Json doc;
    doc["admissible"] = r.admissible;
    doc["hur_holds"] = r.hur_holds;
    doc["min_slack"] = finite_or_null(r.min_slack);
    doc["tol_disc"] = r.tol_disc;
    doc["C_hur"] = r.C_hur;
    doc["observed_constant"] = r.observed_constant;
    doc["max_residual"] = max_value(r.residual_field);
    doc["max_phi"] = max_value(r.phi_field);
    doc["max_diff"] = max_value(r.diff_field);
    return doc;
}

void write_json(const std::string& path, const Json& doc) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << doc.dump(2) << "\n";
}

} // namespace hur
