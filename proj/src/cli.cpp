#include "hur/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "hur/parallel.hpp"
#include "hur/problem_io.hpp"

namespace hur::cli {

namespace {

struct CommonOptions {
    std::string problem;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool need_problem = true) {
    auto* p = cmd.add_option("-p,--problem", o.problem, "problem file (JSON)");
    if (need_problem) p->required();
    cmd.add_option("-o,--out", o.out_dir, "output directory")->capture_default_str();
    cmd.add_option("--seed", o.seed, "seed for sampled Lipschitz estimates")->capture_default_str();
    cmd.add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

std::string out_path(const CommonOptions& o, const std::string& file) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / file).string();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_solve(const CommonOptions& o, std::ostream& out) {
    const ProblemSetup setup = load_problem(o.problem);
    const ProblemInstance& p = setup.instance;
    const SolveReport report = solve(p, Field3D(p.domain), setup.solver);
    write_json(out_path(o, "solve.json"), to_json(report));
    write_csv(out_path(o, "u_star.csv"), report.u_star);
    out << "solve: converged=" << (report.converged ? "true" : "false") << " iterations=" << report.iterations
        << " final_step=" << (report.residual_history.empty() ? 0.0 : report.residual_history.back()) << "\n";
    return report.converged ? kOk : kVerdictFailed;
}

int cmd_certify(const CommonOptions& o, std::ostream& out) {
    ProblemSetup setup = load_problem(o.problem);
    setup.certify.seed = o.seed;
    const ContractionCertificate cert = certify(setup.instance, setup.certify);
    write_json(out_path(o, "certificate.json"), to_json(cert));
    out << "certify: q=" << cert.q << " C8=" << cert.flags.C8 << " ii=" << cert.flags.ii
        << " all_pass=" << (cert.all_pass() ? "true" : "false") << "\n";
    return cert.all_pass() ? kOk : kVerdictFailed;
}

struct StabilityOverrides {
    std::optional<double> epsilon;
    std::optional<std::string> shape;
    std::optional<double> tol_disc;
};

int cmd_stability(const CommonOptions& o, const StabilityOverrides& ov, std::ostream& out, std::ostream& err) {
    ProblemSetup setup = load_problem(o.problem);
    setup.certify.seed = o.seed;
    if (ov.epsilon) setup.stability.epsilon = *ov.epsilon;
    if (ov.shape) setup.stability.shape = parse(*ov.shape, vars::point);
    if (ov.tol_disc) setup.stability.tol_disc = *ov.tol_disc;
    const ProblemInstance& p = setup.instance;

    const ContractionCertificate cert = certify(p, setup.certify);
    write_json(out_path(o, "certificate.json"), to_json(cert));
    if (!cert.C_hur) {
        err << "stability: l_g N >= 1, no stability constant\n";
        return kVerdictFailed;
    }

    const SolveReport solved = solve(p, Field3D(p.domain), setup.solver);
    if (!solved.converged) {
        err << "stability: solver did not converge\n";
        return kVerdictFailed;
    }

    const double quad = quadrature_error_estimate(p, solved.u_star);
    const double tol_disc = setup.stability.tol_disc.value_or(2.0 * (setup.solver.tol + quad));
    const PerturbationSpec spec{setup.stability.shape, setup.stability.epsilon, setup.stability.phi};
    const Field3D u = make_perturbed(solved.u_star, spec);
    const StabilityReport report = check_hur(p, u, solved.u_star, cert, spec, tol_disc);

    Json doc = to_json(report);
    doc["epsilon"] = spec.epsilon;
    doc["shape"] = print_canonical(spec.shape);
    doc["phi_mode"] = spec.phi ? "given" : "derived";
    doc["solver_tol"] = setup.solver.tol;
    doc["quadrature_estimate"] = quad;
    doc["tol_disc_formula"] = setup.stability.tol_disc ? "given" : "2*(solver_tol + quadrature_estimate)";
    doc["certificate_all_pass"] = cert.all_pass();
    write_json(out_path(o, "stability.json"), doc);
    write_csv(out_path(o, "residual.csv"), report.residual_field);
    write_csv(out_path(o, "phi.csv"), report.phi_field);
    write_csv(out_path(o, "diff.csv"), report.diff_field);
    write_csv(out_path(o, "bound.csv"), report.bound_field);

    out << "stability: admissible=" << (report.admissible ? "true" : "false")
        << " hur_holds=" << (report.hur_holds ? "true" : "false") << " min_slack=" << report.min_slack
        << " C_hur=" << report.C_hur << "\n";
    if (!cert.all_pass()) err << "stability: certificate has failing flags\n";
    return (report.hur_holds && cert.all_pass()) ? kOk : kVerdictFailed;
}

struct SweepAxis {
    std::string name;
    double lo = 0.0, hi = 0.0;
    std::size_t count = 1;
};

double* lipschitz_slot(LipschitzData& lip, const std::string& name) {
    static const std::map<std::string, double LipschitzData::*> slots{
        {"l_g", &LipschitzData::l_g},   {"l_h", &LipschitzData::l_h}, {"N", &LipschitzData::N},
        {"l_f1", &LipschitzData::l_f1}, {"l_f2", &LipschitzData::l_f2}, {"l_1", &LipschitzData::l_1},
        {"l_2", &LipschitzData::l_2},   {"alpha", &LipschitzData::alpha}, {"m", &LipschitzData::m}};
    auto it = slots.find(name);
    return it == slots.end() ? nullptr : &(lip.*(it->second));
}

SweepAxis parse_axis(const std::string& text) {
    // name=lo:hi:count
    const auto eq = text.find('=');
    const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--vary", "expected name=lo:hi:count, got '" + text + "'");
    SweepAxis axis;
    axis.name = text.substr(0, eq);
    try {
        axis.lo = std::stod(text.substr(eq + 1, c1 - eq - 1));
        axis.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        axis.count = std::stoul(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--vary", "malformed numbers in '" + text + "'");
    }
    if (axis.count < 1) throw CLI::ValidationError("--vary", "count must be >= 1");
    return axis;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::string>& vary, std::ostream& out) {
    const ProblemSetup setup = load_problem(o.problem);
    std::vector<SweepAxis> axes;
    for (const auto& v : vary) {
        axes.push_back(parse_axis(v));
        LipschitzData probe;
        if (!lipschitz_slot(probe, axes.back().name))
            throw CLI::ValidationError("--vary", "unknown parameter '" + axes.back().name + "'");
    }

    std::ofstream csv(out_path(o, "sweep.csv"));
    if (!csv) throw Error("cannot write sweep.csv");
    for (const auto& a : axes) csv << a.name << ",";
    csv << "q,C8_pass,ii_pass,C_hur\n";

    std::vector<std::size_t> idx(axes.size(), 0);
    std::size_t rows = 0;
    for (;;) {
        LipschitzData lip = setup.instance.lip;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& ax = axes[a];
            const double value =
                ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * static_cast<double>(idx[a]) / (ax.count - 1);
            *lipschitz_slot(lip, ax.name) = value;
            csv << fmt17(value) << ",";
        }
        const double q = contraction_factor(lip);
        const auto C = hur_constant(lip.l_g * lip.N, lip.m);
        csv << fmt17(q) << "," << (q < 1.0 ? 1 : 0) << "," << (C ? 1 : 0) << "," << (C ? fmt17(*C) : "") << "\n";
        ++rows;

        // Odometer step; the first axis varies slowest.
        bool wrapped = true;
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].count) {
                wrapped = false;
                break;
            }
            idx[a] = 0;
        }
        if (wrapped) break;
    }
    out << "sweep: " << rows << " rows written\n";
    return kOk;
}

int cmd_eval(const std::string& text, const std::vector<std::string>& bindings, bool canonical, std::ostream& out) {
    const Expression e = parse(text, vars::kernel);
    std::map<std::string, double> values;
    for (const auto& b : bindings) {
        const auto eq = b.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--var", "expected name=value, got '" + b + "'");
        try {
            values[b.substr(0, eq)] = std::stod(b.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--var", "malformed value in '" + b + "'");
        }
    }
    if (canonical) out << print_canonical(e) << "\n";
    out << fmt17(eval(e, values)) << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Volterra-Hammerstein solver, hypothesis certifier and stability harness", "hurlab"};
    app.require_subcommand(1);

    CommonOptions common;
    StabilityOverrides overrides;
    std::vector<std::string> vary;
    std::string expr_text;
    std::vector<std::string> expr_vars;
    bool canonical = false;

    auto* solve_cmd = app.add_subcommand("solve", "Picard iteration to the fixed point");
    add_common(*solve_cmd, common);
    auto* certify_cmd = app.add_subcommand("certify", "check the hypotheses and compute q, c, C_hur");
    add_common(*certify_cmd, common);
    auto* stability_cmd = app.add_subcommand("stability", "perturb u* and check |u - u*| <= C_hur phi");
    add_common(*stability_cmd, common);
    stability_cmd->add_option("--epsilon", overrides.epsilon, "perturbation amplitude");
    stability_cmd->add_option("--shape", overrides.shape, "perturbation profile over x,y,z");
    stability_cmd->add_option("--tol-disc", overrides.tol_disc, "discretization slack");
    auto* sweep_cmd = app.add_subcommand("sweep", "map q < 1 and l_g N < 1 over declared constants");
    add_common(*sweep_cmd, common);
    sweep_cmd->add_option("--vary", vary, "name=lo:hi:count, repeatable")->required();
    auto* eval_cmd = app.add_subcommand("eval-expr", "parse and evaluate one expression");
    eval_cmd->add_option("expression", expr_text, "expression text")->required();
    eval_cmd->add_option("--var", expr_vars, "name=value, repeatable");
    eval_cmd->add_flag("--canonical", canonical, "also print the canonical form");
    eval_cmd->add_option("--threads", common.threads, "ignored");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    set_thread_count(common.threads);
    try {
        if (*solve_cmd) return cmd_solve(common, out);
        if (*certify_cmd) return cmd_certify(common, out);
        if (*stability_cmd) return cmd_stability(common, overrides, out, err);
        if (*sweep_cmd) return cmd_sweep(common, vary, out);
        if (*eval_cmd) return cmd_eval(expr_text, expr_vars, canonical, out);
    } catch (const CLI::Error& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace hur::cli
