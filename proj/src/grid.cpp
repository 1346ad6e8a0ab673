#include "hur/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace hur {

namespace {

std::string node_label(std::size_t i, std::size_t j, std::size_t k) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

// Weight e^{-tau x_i} per axis; the 3D weight is the product of three.
std::vector<double> axis_weights(const Domain& d, double tau) {
    std::vector<double> w(d.n());
    for (std::size_t i = 0; i < d.n(); ++i) w[i] = std::exp(-tau * d.coord(i));
    return w;
}

} // namespace

Domain::Domain(double L, std::size_t n, double R, std::size_t m_nodes, double tau)
    : L_(L), n_(n), R_(R), m_nodes_(m_nodes), tau_(tau) {
    if (!(std::isfinite(L) && L > 0.0)) throw InvalidDomain("domain: L must be positive and finite");
    if (n < 3) throw InvalidDomain("domain: n must be at least 3");
    if (!(std::isfinite(R) && R >= L)) throw InvalidDomain("domain: R must be finite and >= L");
    if (m_nodes < 3) throw InvalidDomain("domain: m_nodes must be at least 3");
    if (!(std::isfinite(tau) && tau >= 0.0)) throw InvalidDomain("domain: tau must be finite and >= 0");
}

double Domain::coord(std::size_t i) const noexcept {
    // The last node is pinned to L exactly.
    return i + 1 == n_ ? L_ : static_cast<double>(i) * h();
}

double Domain::fredholm_coord(std::size_t a) const noexcept {
    return a + 1 == m_nodes_ ? R_ : static_cast<double>(a) * fredholm_h();
}

Field3D::Field3D(const Domain& d) : domain_(d), values_(d.size(), 0.0) {}

Field3D::Field3D(const Domain& d, std::vector<double> values) : domain_(d), values_(std::move(values)) {
    if (values_.size() != d.size()) throw DomainMismatch("Field3D: value count does not match n^3");
}

Field3D Field3D::constant(const Domain& d, double value) {
    return Field3D(d, std::vector<double>(d.size(), value));
}

double Field3D::interpolate_clamped(double x, double y, double z) const noexcept {
    const std::size_t n = domain_.n();
    const double h = domain_.h();
    auto locate = [&](double c, std::size_t& lo, double& frac) {
        c = std::clamp(c, 0.0, domain_.L());
        double cell = c / h;
        lo = std::min(static_cast<std::size_t>(cell), n - 2);
        frac = std::clamp(cell - static_cast<double>(lo), 0.0, 1.0);
    };
    std::size_t i, j, k;
    double fx, fy, fz;
    locate(x, i, fx);
    locate(y, j, fy);
    locate(z, k, fz);

    auto lerp = [](double a, double b, double f) { return f == 0.0 ? a : (f == 1.0 ? b : a + f * (b - a)); };
    const Field3D& u = *this;
    const double c00 = lerp(u(i, j, k), u(i + 1, j, k), fx);
    const double c10 = lerp(u(i, j + 1, k), u(i + 1, j + 1, k), fx);
    const double c01 = lerp(u(i, j, k + 1), u(i + 1, j, k + 1), fx);
    const double c11 = lerp(u(i, j + 1, k + 1), u(i + 1, j + 1, k + 1), fx);
    return lerp(lerp(c00, c10, fy), lerp(c01, c11, fy), fz);
}

Field3D sample(const Expression& e, const Domain& d) {
    if (!e.free_vars().subset_of(vars::point))
        throw Error("sample: expression uses variables outside {x,y,z}: " + e.free_vars().to_string());
    Field3D out(d);
    Bindings b{};
    const std::size_t n = d.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                b[0] = d.coord(i);
                b[1] = d.coord(j);
                b[2] = d.coord(k);
                try {
                    out(i, j, k) = e.evaluate(b);
                } catch (const DomainError& err) {
                    throw DomainError(std::string(err.what()) + " at node " + node_label(i, j, k));
                }
            }
    return out;
}

double bielecki_norm(const Field3D& u) { return bielecki_norm(u, u.domain().tau()); }

double bielecki_norm(const Field3D& u, double tau) {
    const auto w = axis_weights(u.domain(), tau);
    const std::size_t n = u.n();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                best = std::max(best, std::fabs(u(i, j, k)) * (w[i] * w[j] * w[k]));
    return best;
}

void require_same_grid(const Field3D& u, const Field3D& v, const char* what) {
    const Domain& a = u.domain();
    const Domain& b = v.domain();
    if (a.L() != b.L() || a.n() != b.n())
        throw DomainMismatch(std::string(what) + ": fields live on different grids");
}

Field3D axpy(double alpha, const Field3D& u, const Field3D& v) {
    require_same_grid(u, v, "axpy");
    Field3D out(v.domain());
    auto& o = out.values();
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = alpha * a[i] + b[i];
    return out;
}

double sup_diff(const Field3D& u, const Field3D& v) {
    require_same_grid(u, v, "sup_diff");
    double best = 0.0;
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::fabs(a[i] - b[i]));
    return best;
}

Field3D abs_diff(const Field3D& u, const Field3D& v) {
    require_same_grid(u, v, "abs_diff");
    Field3D out(u.domain());
    auto& o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::fabs(u.values()[i] - v.values()[i]);
    return out;
}

void write_csv(std::ostream& out, const Field3D& u) {
    const Domain& d = u.domain();
    out << "x,y,z,value\n";
    char line[128];
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.n(); ++j)
            for (std::size_t k = 0; k < d.n(); ++k) {
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", d.coord(i), d.coord(j), d.coord(k),
                              u(i, j, k));
                out << line;
            }
}

void write_csv(const std::string& path, const Field3D& u) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    write_csv(f, u);
}

} // namespace hur
