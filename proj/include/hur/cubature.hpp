#pragma once

// Composite tensor-product trapezoid rules for the two integral terms of the
// equation: the Volterra prefix integral over [0,x]x[0,y]x[0,z] and the
// Fredholm integral over [0,inf)^3 truncated to [0,R]^3.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hur/expr.hpp"
#include "hur/grid.hpp"

namespace hur {

/// A kernel K(x,y,z,r,s,t,v) together with the pointwise map f applied to u
/// before the kernel sees it: the integrand is K(x,y,z,r,s,t, f(r,s,t,u(r,s,t))).
/// inner_map is written over {x,y,z,v}, where x,y,z name the integration point.
struct KernelSpec {
    Expression kernel;
    Expression inner_map = Expression::variable(Var::v);

    /// True when the kernel ignores the outer point, which enables the
    /// O(n^3) prefix-sum path and a single Fredholm evaluation.
    bool separable_outer() const noexcept { return !kernel.uses_any(vars::outer); }
};

struct NodeIndex {
    std::size_t i = 0, j = 0, k = 0;
};

/// output(i,j,k) ~ integral over [0,x_i]x[0,y_j]x[0,z_k]; exactly 0 on the
/// planes i=0, j=0, k=0.
Field3D volterra_prefix(const KernelSpec& ks, const Field3D& u);

/// Trapezoid estimate over [0,R]^3 (m_nodes per axis) at one outer node.
/// u is read at clamped, trilinearly interpolated points.
double fredholm_truncated(const KernelSpec& ks, const Field3D& u, NodeIndex outer);
Field3D fredholm_field(const KernelSpec& ks, const Field3D& u);

/// Contribution of the shell [0,R]^3 \ [0,R/2]^3 at an outer node; a crude
/// indicator of how much mass sits near the truncation radius.
double fredholm_tail_indicator(const KernelSpec& ks, const Field3D& u, NodeIndex outer);

/// Trapezoid integral over the full box [0,extent]^3 with `nodes` per axis,
/// kernel evaluated at the physical outer point (x,y,z).
double box_integral(const KernelSpec& ks, const Field3D& u, double x, double y, double z, double extent,
                    std::size_t nodes);
/// box_integral at every outer grid node of u's domain.
Field3D box_integral_field(const KernelSpec& ks, const Field3D& u, double extent, std::size_t nodes);

enum class CubatureOp { volterra_prefix, fredholm };

/// One refinement study: the quadrature `op` for `kernel` applied to
/// sample(u, domain) and read at the physical point (x,y,z).
struct RefinementCase {
    CubatureOp op = CubatureOp::volterra_prefix;
    KernelSpec kernel;
    Expression u;
    Domain domain{1.0, 3, 1.0, 3, 0.0};
    double x = 0.0, y = 0.0, z = 0.0;
};

struct RefinementSample {
    double h;
    double value;
};

/// Repeats the quadrature with node counts n, 2n-1, 4n-3, ... (n for the
/// Volterra term, m_nodes for the Fredholm term). Requires levels >= 2.
std::vector<RefinementSample> refine_estimate(const RefinementCase& c, std::size_t levels);

/// Observed orders log2(|e_k| / |e_{k+1}|). With an exact value e_k is the
/// true error; without one, consecutive differences are used (Richardson),
/// giving one fewer entry. Entries are NaN where the error vanishes.
std::vector<double> observed_orders(std::span<const RefinementSample> samples,
                                    std::optional<double> exact = std::nullopt);

} // namespace hur
