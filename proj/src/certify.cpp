#include "hur/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Draws pairs of points that differ only in `wrt` and hands both to `visit`.
template <typename Visit>
void sample_pairs(Var wrt, const SampleBox& box, std::size_t samples, std::uint64_t seed, Visit&& visit) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto w = static_cast<std::size_t>(wrt);
    const double lo = box[w].lo;
    const double hi = box[w].hi;
    const double width = hi - lo;
    if (!(width > 0.0)) throw Error("estimate_lipschitz: empty range for '" + std::string(var_name(wrt)) + "'");

    for (std::size_t n = 0; n < samples; ++n) {
        Bindings a{};
        for (std::size_t i = 0; i < kVarCount; ++i) a[i] = box[i].lo + (box[i].hi - box[i].lo) * unit(rng);
        Bindings b = a;
        if (n % 2 == 0) {
            b[w] = lo + width * unit(rng);
        } else {
            const double offset = width * std::pow(10.0, -1.0 - 5.0 * unit(rng));
            b[w] = a[w] + (unit(rng) < 0.5 ? -offset : offset);
            if (b[w] > hi) b[w] = a[w] - offset;
            if (b[w] < lo) b[w] = a[w] + offset;
            b[w] = std::clamp(b[w], lo, hi);
        }
        if (b[w] == a[w]) continue;
        visit(a, b);
    }
}

Expression times_constant(double c, Expression e) { return Expression::constant(c) * std::move(e); }

/// e^{tau (r+s+t)} as an expression.
Expression bielecki_growth(double tau) {
    return Expression::unary(Op::exp, Expression::constant(tau) *
                                          (Expression::variable(Var::r) + Expression::variable(Var::s) +
                                           Expression::variable(Var::t)));
}

double max_abs(const Field3D& f) {
    double best = 0.0;
    for (double v : f.values()) best = std::max(best, std::fabs(v));
    return best;
}

bool within(double estimated, double declared) { return estimated <= declared * (1.0 + 1e-9) + 1e-12; }

ConstantCheck lipschitz_check(const std::string& name, const Expression& e, Var wrt, const SampleBox& box,
                              double declared, const CertifySettings& s) {
    ConstantCheck c{name, declared, 0.0, false, "sampled lower bound"};
    try {
        c.estimated = estimate_lipschitz(e, wrt, box, s.samples, s.seed);
        c.pass = within(c.estimated, declared);
    } catch (const Error& err) {
        c.estimated = kInf;
        c.note = err.what();
    }
    return c;
}

/// Kernel spot check against a Lipschitz function: reports the largest
/// sampled |dK/dv| / l_K(point); declared value is 1.
ConstantCheck kernel_check(const std::string& name, const Expression& kernel, const Expression& bound,
                           const SampleBox& box, const CertifySettings& s) {
    ConstantCheck c{name, 1.0, 0.0, false, "max sampled |dK|/(|dv| l(x,y,z,r,s,t))"};
    try {
        double worst = 0.0;
        sample_pairs(Var::v, box, s.samples, s.seed, [&](const Bindings& a, const Bindings& b) {
            const double slope = std::fabs(kernel.evaluate(a) - kernel.evaluate(b)) / std::fabs(a[6] - b[6]);
            const double allowed = bound.evaluate(a);
            if (slope == 0.0) return;
            worst = std::max(worst, allowed > 0.0 ? slope / allowed : kInf);
        });
        c.estimated = worst;
        c.pass = within(worst, 1.0);
    } catch (const Error& err) {
        c.estimated = kInf;
        c.note = err.what();
    }
    return c;
}

} // namespace

double estimate_lipschitz(const Expression& e, Var wrt, const SampleBox& box, std::size_t samples,
                          std::uint64_t seed) {
    if (samples < 100) throw Error("estimate_lipschitz: at least 100 samples required");
    double best = 0.0;
    const auto w = static_cast<std::size_t>(wrt);
    sample_pairs(wrt, box, samples, seed, [&](const Bindings& a, const Bindings& b) {
        best = std::max(best, std::fabs(e.evaluate(a) - e.evaluate(b)) / std::fabs(a[w] - b[w]));
    });
    return best;
}

C7Estimate validate_C7(const LipschitzData& lip, const Domain& d) {
    const Field3D zero(d);
    const KernelSpec volterra{times_constant(lip.l_f1, lip.l_K) * bielecki_growth(d.tau())};
    const KernelSpec fredholm{times_constant(lip.l_f2, lip.l_F) * bielecki_growth(d.tau())};
    return {bielecki_norm(volterra_prefix(volterra, zero)), bielecki_norm(fredholm_field(fredholm, zero))};
}

C9C10Estimate validate_C9_C10(const ProblemInstance& p) {
    const Domain& d = p.domain;
    const Field3D zero(d);

    Field3D bound = g_term(p, zero);
    for (double& v : bound.values()) v = std::fabs(v);
    const Field3D volterra = volterra_prefix({Expression::unary(Op::abs, p.K_spec.kernel), p.f1_map()}, zero);
    const Field3D fredholm = fredholm_field({Expression::unary(Op::abs, p.F_spec.kernel), p.f2_map()}, zero);
    for (std::size_t i = 0; i < bound.values().size(); ++i)
        bound.values()[i] = (bound.values()[i] + volterra.values()[i]) + fredholm.values()[i];

    const Field3D mass_v = box_integral_field({times_constant(p.lip.l_f1, p.lip.l_K)}, zero, d.L(), d.n());
    const Field3D mass_f = box_integral_field({times_constant(p.lip.l_f2, p.lip.l_F)}, zero, d.R(), d.m_nodes());
    return {bielecki_norm(bound), max_abs(axpy(1.0, mass_v, mass_f))};
}

double contraction_factor(const LipschitzData& lip) noexcept { return lip.l_g * lip.l_h + lip.l_1 + lip.l_2; }

std::optional<double> picard_constant(double q) noexcept {
    if (!(q < 1.0)) return std::nullopt;
    return 1.0 / (1.0 - q);
}

std::optional<double> hur_constant(double lgN, double m) noexcept {
    if (!(lgN >= 0.0 && lgN < 1.0)) return std::nullopt;
    const double shrink = 1.0 - lgN;
    return (1.0 / shrink) * std::exp(m / shrink);
}

ContractionCertificate certify(const ProblemInstance& p, const CertifySettings& settings) {
    const LipschitzData& lip = p.lip;
    const Domain& d = p.domain;
    ContractionCertificate cert;
    cert.q = contraction_factor(lip);
    cert.c = picard_constant(cert.q);
    cert.lgN = lip.l_g * lip.N;
    cert.C_hur = hur_constant(cert.lgN, lip.m);
    cert.flags.C8 = cert.q < 1.0;
    cert.flags.ii = cert.lgN < 1.0;

    auto& report = cert.validation_report;
    auto record_numeric = [&](const std::string& name, double declared, auto&& compute) {
        ConstantCheck c{name, declared, 0.0, false, "numerical quadrature"};
        try {
            c.estimated = compute();
            c.pass = within(c.estimated, declared);
        } catch (const Error& err) {
            c.estimated = kInf;
            c.note = err.what();
        }
        report.push_back(c);
        return c.pass;
    };

    std::optional<C7Estimate> c7;
    std::optional<C9C10Estimate> c9;
    try {
        c7 = validate_C7(lip, d);
    } catch (const Error&) {
    }
    try {
        c9 = validate_C9_C10(p);
    } catch (const Error&) {
    }
    auto need = [](const auto& opt) {
        if (!opt) throw Error("evaluation failed");
        return opt;
    };
    const bool l1_ok = record_numeric("l_1", lip.l_1, [&] { return need(c7)->l1_num; });
    const bool l2_ok = record_numeric("l_2", lip.l_2, [&] { return need(c7)->l2_num; });
    cert.flags.C7_valid = l1_ok && l2_ok;
    cert.flags.C9_alpha = record_numeric("alpha", lip.alpha, [&] { return need(c9)->alpha_num; });
    cert.flags.C10_m = record_numeric("m", lip.m, [&] { return need(c9)->m_num; });

    SampleBox pointwise{};
    pointwise[0] = pointwise[1] = pointwise[2] = {0.0, d.L()};
    pointwise[6] = settings.v_range;
    SampleBox volterra_box = pointwise;
    volterra_box[3] = volterra_box[4] = volterra_box[5] = {0.0, d.L()};
    SampleBox fredholm_box = pointwise;
    fredholm_box[3] = fredholm_box[4] = fredholm_box[5] = {0.0, d.R()};

    const std::size_t first_spot = report.size();
    report.push_back(lipschitz_check("l_g", p.g, Var::v, pointwise, lip.l_g, settings));
    report.push_back(lipschitz_check("l_h", p.h_map, Var::v, pointwise, lip.l_h, settings));
    report.push_back(lipschitz_check("N", p.h_map, Var::v, pointwise, lip.N, settings));
    report.push_back(lipschitz_check("l_f1", p.f1_map(), Var::v, pointwise, lip.l_f1, settings));
    report.push_back(lipschitz_check("l_f2", p.f2_map(), Var::v, pointwise, lip.l_f2, settings));
    report.push_back(kernel_check("l_K", p.K_spec.kernel, lip.l_K, volterra_box, settings));
    report.push_back(kernel_check("l_F", p.F_spec.kernel, lip.l_F, fredholm_box, settings));
    cert.flags.lipschitz = std::all_of(report.begin() + static_cast<std::ptrdiff_t>(first_spot), report.end(),
                                       [](const ConstantCheck& c) { return c.pass; });
    return cert;
}

} // namespace hur
