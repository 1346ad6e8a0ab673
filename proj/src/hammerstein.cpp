#include "hur/hammerstein.hpp"

#include <algorithm>
#include <cmath>

#include "hur/parallel.hpp"

namespace hur {

namespace {

void require_problem_grid(const ProblemInstance& p, const Field3D& u) {
    if (u.domain().n() != p.domain.n() || u.domain().L() != p.domain.L())
        throw DomainMismatch("field grid does not match the problem domain");
}

} // namespace

Field3D g_term(const ProblemInstance& p, const Field3D& u) {
    require_problem_grid(p, u);
    const Domain& d = p.domain;
    const std::size_t n = d.n();
    Field3D out(d);
    parallel_for(n, [&](std::size_t i) {
        Bindings b{};
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                b[0] = d.coord(i);
                b[1] = d.coord(j);
                b[2] = d.coord(k);
                b[6] = u(i, j, k);
                try {
                    b[6] = p.h_map.evaluate(b);
                    out(i, j, k) = p.g.evaluate(b);
                } catch (const DomainError& err) {
                    throw DomainError(std::string(err.what()) + " in g-term at node (" + std::to_string(i) + "," +
                                      std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
    });
    return out;
}

Field3D apply_A(const ProblemInstance& p, const Field3D& u) {
    require_problem_grid(p, u);
    // Evaluate on a copy carrying the problem's domain (tau, R, m_nodes).
    const Field3D w(p.domain, u.values());
    Field3D out = g_term(p, w);
    const Field3D volterra = volterra_prefix(p.K_spec, w);
    const Field3D fredholm = fredholm_field(p.F_spec, w);
    auto& o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (o[i] + volterra.values()[i]) + fredholm.values()[i];
    return out;
}

Field3D residual(const ProblemInstance& p, const Field3D& u) {
    const Field3D a = apply_A(p, u);
    Field3D out(p.domain);
    for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = std::fabs(u.values()[i] - a.values()[i]);
    return out;
}

double quadrature_error_estimate(const ProblemInstance& p, const Field3D& u) {
    const Domain& d = p.domain;
    if ((d.n() - 1) % 2 != 0) return 0.0;
    const std::size_t nc = (d.n() - 1) / 2 + 1;
    if (nc < 3) return 0.0;
    // The Fredholm nodes are halved too when that leaves a valid rule.
    std::size_t mc = d.m_nodes();
    if ((mc - 1) % 2 == 0 && (mc - 1) / 2 + 1 >= 3) mc = (mc - 1) / 2 + 1;

    ProblemInstance coarse = p;
    coarse.domain = Domain(d.L(), nc, d.R(), mc, d.tau());
    Field3D uc(coarse.domain);
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            for (std::size_t k = 0; k < nc; ++k) uc(i, j, k) = u(2 * i, 2 * j, 2 * k);

    const Field3D fine = apply_A(p, u);
    const Field3D rough = apply_A(coarse, uc);
    double worst = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            for (std::size_t k = 0; k < nc; ++k)
                worst = std::max(worst, std::fabs(fine(2 * i, 2 * j, 2 * k) - rough(i, j, k)));
    return worst / 3.0;
}

} // namespace hur
