#pragma once

#include "hur/cubature.hpp"
#include "hur/expr.hpp"
#include "hur/grid.hpp"

namespace hur {

/// Declared constants of the existence and stability hypotheses. Scalars
/// are user declarations; certify() checks them numerically.
struct LipschitzData {
    double l_g = 0.0;
    double l_h = 0.0;
    double N = 0.0;  ///< pointwise Lipschitz constant of h used by the stability bound
    double l_f1 = 0.0;
    double l_f2 = 0.0;
    Expression l_K;  ///< over {x,y,z,r,s,t}
    Expression l_F;  ///< over {x,y,z,r,s,t}
    double l_1 = 0.0;
    double l_2 = 0.0;
    double alpha = 0.0;
    double m = 0.0;
};

/// The equation
///   u = g(x,y,z, h(u)) + int_[0,x]x[0,y]x[0,z] K(.., f1(u)) + int_[0,inf)^3 F(.., f2(u)),
/// with h, f1, f2 in pointwise form. f1 and f2 are carried as the inner maps
/// of K_spec and F_spec.
struct ProblemInstance {
    Expression g;      ///< over {x,y,z,v}
    Expression h_map = Expression::variable(Var::v);
    KernelSpec K_spec;
    KernelSpec F_spec;
    LipschitzData lip;
    Domain domain{1.0, 3, 1.0, 3, 0.0};

    const Expression& f1_map() const noexcept { return K_spec.inner_map; }
    const Expression& f2_map() const noexcept { return F_spec.inner_map; }
};

/// g(x,y,z,h(x,y,z,u)) at every node.
Field3D g_term(const ProblemInstance& p, const Field3D& u);

/// A(u) = g-term + Volterra term + Fredholm term, summed in that order.
Field3D apply_A(const ProblemInstance& p, const Field3D& u);

/// |u - A(u)| pointwise.
Field3D residual(const ProblemInstance& p, const Field3D& u);

/// Rough size of the quadrature error in A(u): compares A on the grid with
/// A on the grid of half resolution (both node counts halved) at the shared
/// nodes and divides by 3, the Richardson factor for an order-2 rule.
/// Returns 0 when n-1 is odd or the halved grid would drop below 3 nodes.
/// m_nodes is kept as is when it cannot be halved the same way.
double quadrature_error_estimate(const ProblemInstance& p, const Field3D& u);

} // namespace hur
