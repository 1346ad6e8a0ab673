#pragma once

#include <cstddef>
#include <vector>

#include "hur/hammerstein.hpp"

namespace hur {

struct SolverSettings {
    double tol = 1e-10;
    std::size_t max_iter = 200;
};

struct SolveReport {
    Field3D u_star;
    std::size_t iterations = 0;
    /// ||u_{k+1} - u_k||_tau for every step taken.
    std::vector<double> residual_history;
    /// residual_history[k+1] / residual_history[k] (0 when the denominator is 0).
    std::vector<double> observed_ratios;
    bool converged = false;
    double tol = 0.0;
};

/// Successive approximation u_{k+1} = A(u_k), stopped once the Bielecki
/// norm of the update drops to tol or after max_iter steps. Non-convergence
/// is reported through `converged`, not thrown.
SolveReport solve(const ProblemInstance& p, const Field3D& u0, const SolverSettings& settings = {});

/// q^k * first_step / (1 - q). Throws QOutOfRange unless 0 <= q < 1.
double a_priori_bound(double q, double first_step, std::size_t k);

} // namespace hur
