#include "hur/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hur {

Field3D make_perturbed(const Field3D& u_star, const PerturbationSpec& spec) {
    if (!std::isfinite(spec.epsilon)) throw Error("make_perturbed: epsilon must be finite");
    return axpy(spec.epsilon, sample(spec.shape, u_star.domain()), u_star);
}

Field3D derive_phi(const Field3D& residual) {
    Field3D phi = residual;
    const std::size_t n = phi.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 1; k < n; ++k) phi(i, j, k) = std::max(phi(i, j, k), phi(i, j, k - 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) phi(i, j, k) = std::max(phi(i, j, k), phi(i, j - 1, k));
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) phi(i, j, k) = std::max(phi(i, j, k), phi(i - 1, j, k));
    return phi;
}

void require_monotone_phi(const Field3D& phi) {
    const std::size_t n = phi.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double v = phi(i, j, k);
                if (v < 0.0) throw InvalidPhi("phi is negative at a grid node");
                if ((i > 0 && v < phi(i - 1, j, k)) || (j > 0 && v < phi(i, j - 1, k)) ||
                    (k > 0 && v < phi(i, j, k - 1)))
                    throw InvalidPhi("phi is not nondecreasing at node (" + std::to_string(i) + "," +
                                     std::to_string(j) + "," + std::to_string(k) + ")");
            }
}

StabilityReport check_hur(const ProblemInstance& p, const Field3D& u, const Field3D& u_star,
                          const ContractionCertificate& cert, const PerturbationSpec& spec, double tol_disc) {
    if (!cert.C_hur) throw CertificateIncomplete("check_hur: certificate has no C_hur (l_g N >= 1)");
    require_same_grid(u, u_star, "check_hur");

    Field3D res = residual(p, u);
    Field3D phi = spec.phi ? sample(*spec.phi, p.domain) : derive_phi(res);
    if (spec.phi) require_monotone_phi(phi);

    Field3D diff = abs_diff(u, u_star);
    Field3D bound(p.domain);
    const double C = *cert.C_hur;
    for (std::size_t i = 0; i < bound.values().size(); ++i) bound.values()[i] = C * phi.values()[i];

    bool admissible = true;
    double min_slack = std::numeric_limits<double>::infinity();
    double observed = 0.0;
    for (std::size_t i = 0; i < res.values().size(); ++i) {
        if (res.values()[i] > phi.values()[i]) admissible = false;
        min_slack = std::min(min_slack, bound.values()[i] - diff.values()[i]);
        if (phi.values()[i] > 0.0) observed = std::max(observed, diff.values()[i] / phi.values()[i]);
    }

    StabilityReport r{std::move(res), std::move(phi), std::move(bound), std::move(diff), min_slack, admissible,
                      false, tol_disc, C, observed};
    r.hur_holds = admissible && min_slack >= -tol_disc;
    return r;
}

GronwallVerdict gronwall_check(const Field3D& psi, const Field3D& phi, double weight_integral, double lgN, double m) {
    if (!(lgN >= 0.0 && lgN < 1.0)) throw LgNOutOfRange("gronwall_check: lgN must lie in [0, 1)");
    require_same_grid(psi, phi, "gronwall_check");
    const double shrink = 1.0 - lgN;
    const double growth = std::exp(m / shrink);
    double sup_psi = 0.0;
    for (double v : psi.values()) sup_psi = std::max(sup_psi, v);

    GronwallVerdict verdict{true, true};
    for (std::size_t i = 0; i < psi.values().size(); ++i) {
        const double p = psi.values()[i];
        const double f = phi.values()[i];
        if (p > f / shrink + weight_integral * sup_psi / shrink) verdict.premise_holds = false;
        if (p > f / shrink * growth) verdict.conclusion_holds = false;
    }
    return verdict;
}

} // namespace hur
