#include "hur/picard.hpp"

#include <cmath>
#include <string>

namespace hur {

SolveReport solve(const ProblemInstance& p, const Field3D& u0, const SolverSettings& settings) {
    if (!(settings.tol > 0.0)) throw Error("solve: tol must be positive");
    if (settings.max_iter < 1) throw Error("solve: max_iter must be >= 1");

    SolveReport report{Field3D(p.domain, u0.values()), 0, {}, {}, false, settings.tol};
    Field3D current = report.u_star;
    while (report.iterations < settings.max_iter) {
        Field3D next = apply_A(p, current);
        const double step = bielecki_norm(axpy(-1.0, current, next));
        if (!report.residual_history.empty()) {
            const double prev = report.residual_history.back();
            report.observed_ratios.push_back(prev > 0.0 ? step / prev : 0.0);
        }
        report.residual_history.push_back(step);
        ++report.iterations;
        current = std::move(next);
        if (step <= settings.tol) {
            report.converged = true;
            break;
        }
    }
    report.u_star = std::move(current);
    return report;
}

double a_priori_bound(double q, double first_step, std::size_t k) {
    if (!(q >= 0.0 && q < 1.0)) throw QOutOfRange("a_priori_bound: q = " + std::to_string(q) + " is not in [0, 1)");
    return std::pow(q, static_cast<double>(k)) * first_step / (1.0 - q);
}

} // namespace hur
