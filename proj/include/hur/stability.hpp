#pragma once

#include <optional>

#include "hur/certify.hpp"
#include "hur/hammerstein.hpp"

namespace hur {

/// Raised when a user-given phi is negative or not nondecreasing.
class InvalidPhi : public Error {
public:
    using Error::Error;
};

/// Additive perturbation u = u* + epsilon * shape. phi == nullopt selects the
/// derived mode (monotone envelope of the measured residual).
struct PerturbationSpec {
    Expression shape = Expression::constant(1.0);  ///< over {x,y,z}
    double epsilon = 0.0;
    std::optional<Expression> phi;                 ///< over {x,y,z}
};

struct StabilityReport {
    Field3D residual_field;
    Field3D phi_field;
    Field3D bound_field;  ///< C_hur * phi
    Field3D diff_field;   ///< |u - u*|
    double min_slack = 0.0;
    bool admissible = false;
    bool hur_holds = false;
    double tol_disc = 0.0;
    double C_hur = 0.0;
    /// max diff/phi over nodes with phi > 0: the smallest constant the
    /// sampled case would have needed.
    double observed_constant = 0.0;
};

Field3D make_perturbed(const Field3D& u_star, const PerturbationSpec& spec);

/// Smallest field that dominates `residual` and is nondecreasing along each
/// axis: phi(i,j,k) = max over i'<=i, j'<=j, k'<=k of residual.
Field3D derive_phi(const Field3D& residual);

/// Throws InvalidPhi unless phi >= 0 and nondecreasing along every axis.
void require_monotone_phi(const Field3D& phi);

/// Checks |u - u*| <= C_hur * phi on every node, allowing -tol_disc slack.
/// Throws CertificateIncomplete when the certificate has no C_hur.
StabilityReport check_hur(const ProblemInstance& p, const Field3D& u, const Field3D& u_star,
                          const ContractionCertificate& cert, const PerturbationSpec& spec, double tol_disc);

struct GronwallVerdict {
    bool premise_holds = false;
    bool conclusion_holds = false;
};

/// premise:    psi <= phi/(1-lgN) + weight_integral * sup(psi) / (1-lgN)   at every node
/// conclusion: psi <= phi/(1-lgN) * exp(m/(1-lgN))                         at every node
/// Throws LgNOutOfRange unless 0 <= lgN < 1.
GronwallVerdict gronwall_check(const Field3D& psi, const Field3D& phi, double weight_integral, double lgN, double m);

} // namespace hur
