#include "hur/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hur/parallel.hpp"

namespace hur {

namespace {

std::string node_label(std::size_t i, std::size_t j, std::size_t k) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

[[noreturn]] void rethrow_at(const DomainError& err, const char* stage, std::size_t i, std::size_t j, std::size_t k) {
    throw DomainError(std::string(err.what()) + " in " + stage + " at node " + node_label(i, j, k));
}

/// f(r,s,t,u(r,s,t)) on the solution grid.
std::vector<double> inner_on_grid(const KernelSpec& ks, const Field3D& u) {
    const Domain& d = u.domain();
    const std::size_t n = d.n();
    std::vector<double> out(d.size());
    parallel_for(n, [&](std::size_t a) {
        Bindings b{};
        for (std::size_t bb = 0; bb < n; ++bb)
            for (std::size_t c = 0; c < n; ++c) {
                b[0] = d.coord(a);
                b[1] = d.coord(bb);
                b[2] = d.coord(c);
                b[6] = u(a, bb, c);
                try {
                    out[u.index(a, bb, c)] = ks.inner_map.evaluate(b);
                } catch (const DomainError& err) {
                    rethrow_at(err, "inner map", a, bb, c);
                }
            }
    });
    return out;
}

/// Integration nodes on [0,extent] and the integrand's inner values there.
struct BoxSamples {
    std::vector<double> coords;
    std::vector<double> weights;
    std::vector<double> inner;  // nodes^3, (a,b,c) order
    std::size_t nodes = 0;
};

BoxSamples box_samples(const KernelSpec& ks, const Field3D& u, double extent, std::size_t nodes) {
    BoxSamples s;
    s.nodes = nodes;
    const double h = extent / static_cast<double>(nodes - 1);
    s.coords.resize(nodes);
    s.weights.assign(nodes, h);
    for (std::size_t a = 0; a < nodes; ++a) s.coords[a] = a + 1 == nodes ? extent : static_cast<double>(a) * h;
    s.weights.front() = s.weights.back() = 0.5 * h;

    s.inner.resize(nodes * nodes * nodes);
    parallel_for(nodes, [&](std::size_t a) {
        Bindings b{};
        for (std::size_t bb = 0; bb < nodes; ++bb)
            for (std::size_t c = 0; c < nodes; ++c) {
                b[0] = s.coords[a];
                b[1] = s.coords[bb];
                b[2] = s.coords[c];
                b[6] = u.interpolate_clamped(s.coords[a], s.coords[bb], s.coords[c]);
                try {
                    s.inner[(a * nodes + bb) * nodes + c] = ks.inner_map.evaluate(b);
                } catch (const DomainError& err) {
                    rethrow_at(err, "inner map (integration node)", a, bb, c);
                }
            }
    });
    return s;
}

double integrate_box(const KernelSpec& ks, const BoxSamples& s, double x, double y, double z) {
    const std::size_t m = s.nodes;
    Bindings b{};
    b[0] = x;
    b[1] = y;
    b[2] = z;
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        b[3] = s.coords[a];
        double plane = 0.0;
        for (std::size_t bb = 0; bb < m; ++bb) {
            b[4] = s.coords[bb];
            double line = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                b[5] = s.coords[c];
                b[6] = s.inner[(a * m + bb) * m + c];
                try {
                    line += s.weights[c] * ks.kernel.evaluate(b);
                } catch (const DomainError& err) {
                    rethrow_at(err, "box kernel (integration node)", a, bb, c);
                }
            }
            plane += s.weights[bb] * line;
        }
        total += s.weights[a] * plane;
    }
    return total;
}

Field3D box_field(const KernelSpec& ks, const Field3D& u, double extent, std::size_t nodes) {
    const BoxSamples s = box_samples(ks, u, extent, nodes);
    const Domain& d = u.domain();
    const std::size_t n = d.n();
    if (ks.separable_outer()) return Field3D::constant(d, integrate_box(ks, s, 0.0, 0.0, 0.0));

    Field3D out(d);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) out(i, j, k) = integrate_box(ks, s, d.coord(i), d.coord(j), d.coord(k));
    });
    return out;
}

Field3D volterra_prefix_sums(const KernelSpec& ks, const Field3D& u, const std::vector<double>& inner) {
    const Domain& d = u.domain();
    const std::size_t n = d.n();
    const double half_h = 0.5 * d.h();

    Field3D out(d);
    parallel_for(n, [&](std::size_t a) {
        Bindings b{};
        for (std::size_t bb = 0; bb < n; ++bb)
            for (std::size_t c = 0; c < n; ++c) {
                b[3] = d.coord(a);
                b[4] = d.coord(bb);
                b[5] = d.coord(c);
                b[6] = inner[u.index(a, bb, c)];
                try {
                    out(a, bb, c) = ks.kernel.evaluate(b);
                } catch (const DomainError& err) {
                    rethrow_at(err, "Volterra kernel", a, bb, c);
                }
            }
    });

    // Cumulative trapezoid along z, then y, then x; the tensor-product rule
    // factorizes, so three 1D passes give every prefix box at once.
    auto& v = out.values();
    auto pass = [&](std::size_t stride_outer, std::size_t stride_mid, std::size_t stride_axis) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                const std::size_t base = p * stride_outer + q * stride_mid;
                double prev_f = v[base];
                double acc = 0.0;
                v[base] = 0.0;
                for (std::size_t l = 1; l < n; ++l) {
                    const std::size_t idx = base + l * stride_axis;
                    const double f = v[idx];
                    acc += half_h * (prev_f + f);
                    prev_f = f;
                    v[idx] = acc;
                }
            }
    };
    pass(n * n, n, 1);
    pass(n * n, 1, n);
    pass(n, 1, n * n);
    return out;
}

Field3D volterra_prefix_direct(const KernelSpec& ks, const Field3D& u, const std::vector<double>& inner) {
    const Domain& d = u.domain();
    const std::size_t n = d.n();
    const double h = d.h();
    auto weight = [h](std::size_t a, std::size_t upper) { return (a == 0 || a == upper) ? 0.5 * h : h; };

    Field3D out(d);
    parallel_for(n, [&](std::size_t i) {
        if (i == 0) return;
        Bindings b{};
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t k = 1; k < n; ++k) {
                b[0] = d.coord(i);
                b[1] = d.coord(j);
                b[2] = d.coord(k);
                double total = 0.0;
                for (std::size_t a = 0; a <= i; ++a) {
                    b[3] = d.coord(a);
                    double plane = 0.0;
                    for (std::size_t bb = 0; bb <= j; ++bb) {
                        b[4] = d.coord(bb);
                        double line = 0.0;
                        for (std::size_t c = 0; c <= k; ++c) {
                            b[5] = d.coord(c);
                            b[6] = inner[u.index(a, bb, c)];
                            try {
                                line += weight(c, k) * ks.kernel.evaluate(b);
                            } catch (const DomainError& err) {
                                rethrow_at(err, "Volterra kernel", i, j, k);
                            }
                        }
                        plane += weight(bb, j) * line;
                    }
                    total += weight(a, i) * plane;
                }
                out(i, j, k) = total;
            }
    });
    return out;
}

std::size_t node_of(const Domain& d, double coord) {
    const double cell = coord / d.h();
    const auto idx = static_cast<std::size_t>(std::llround(cell));
    if (coord < 0.0 || idx >= d.n() || std::fabs(d.coord(idx) - coord) > 1e-9 * std::max(1.0, d.L()))
        throw Error("refine_estimate: probe coordinate " + std::to_string(coord) + " is not a grid node");
    return idx;
}

} // namespace

Field3D volterra_prefix(const KernelSpec& ks, const Field3D& u) {
    const auto inner = inner_on_grid(ks, u);
    if (ks.separable_outer()) return volterra_prefix_sums(ks, u, inner);
    return volterra_prefix_direct(ks, u, inner);
}

double box_integral(const KernelSpec& ks, const Field3D& u, double x, double y, double z, double extent,
                    std::size_t nodes) {
    return integrate_box(ks, box_samples(ks, u, extent, nodes), x, y, z);
}

Field3D box_integral_field(const KernelSpec& ks, const Field3D& u, double extent, std::size_t nodes) {
    return box_field(ks, u, extent, nodes);
}

double fredholm_truncated(const KernelSpec& ks, const Field3D& u, NodeIndex outer) {
    const Domain& d = u.domain();
    return box_integral(ks, u, d.coord(outer.i), d.coord(outer.j), d.coord(outer.k), d.R(), d.m_nodes());
}

Field3D fredholm_field(const KernelSpec& ks, const Field3D& u) {
    const Domain& d = u.domain();
    return box_field(ks, u, d.R(), d.m_nodes());
}

double fredholm_tail_indicator(const KernelSpec& ks, const Field3D& u, NodeIndex outer) {
    const Domain& d = u.domain();
    const std::size_t half_nodes = (d.m_nodes() - 1) / 2 + 1;
    const double x = d.coord(outer.i), y = d.coord(outer.j), z = d.coord(outer.k);
    const double full = box_integral(ks, u, x, y, z, d.R(), d.m_nodes());
    const double inner = box_integral(ks, u, x, y, z, d.fredholm_coord(half_nodes - 1), half_nodes);
    return full - inner;
}

std::vector<RefinementSample> refine_estimate(const RefinementCase& c, std::size_t levels) {
    if (levels < 2) throw Error("refine_estimate: levels must be >= 2");
    std::vector<RefinementSample> out;
    out.reserve(levels);
    Domain d = c.domain;
    for (std::size_t level = 0; level < levels; ++level) {
        const Field3D u = sample(c.u, d);
        if (c.op == CubatureOp::volterra_prefix) {
            const Field3D v = volterra_prefix(c.kernel, u);
            out.push_back({d.h(), v(node_of(d, c.x), node_of(d, c.y), node_of(d, c.z))});
            d = d.with_n(2 * d.n() - 1);
        } else {
            out.push_back({d.fredholm_h(), box_integral(c.kernel, u, c.x, c.y, c.z, d.R(), d.m_nodes())});
            d = d.with_fredholm(d.R(), 2 * d.m_nodes() - 1);
        }
    }
    return out;
}

std::vector<double> observed_orders(std::span<const RefinementSample> samples, std::optional<double> exact) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> errors;
    if (exact) {
        for (const auto& s : samples) errors.push_back(std::fabs(s.value - *exact));
    } else {
        for (std::size_t i = 0; i + 1 < samples.size(); ++i)
            errors.push_back(std::fabs(samples[i + 1].value - samples[i].value));
    }
    std::vector<double> orders;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (errors[i] == 0.0 || errors[i + 1] == 0.0) {
            orders.push_back(nan);
            continue;
        }
        const double ratio_h = samples[i].h / samples[i + 1].h;
        orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(ratio_h));
    }
    return orders;
}

} // namespace hur
