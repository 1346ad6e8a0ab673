#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hur/expr.hpp"

namespace hur {

/// Truncated computational box [0,L]^3 sampled on a uniform n^3 grid, plus
/// the Fredholm truncation [0,R]^3 with its own m_nodes per axis, and the
/// Bielecki weight tau.
class Domain {
public:
    Domain(double L, std::size_t n, double R, std::size_t m_nodes, double tau);

    double L() const noexcept { return L_; }
    std::size_t n() const noexcept { return n_; }
    double R() const noexcept { return R_; }
    std::size_t m_nodes() const noexcept { return m_nodes_; }
    double tau() const noexcept { return tau_; }

    /// Grid spacing L/(n-1).
    double h() const noexcept { return L_ / static_cast<double>(n_ - 1); }
    /// Fredholm node spacing R/(m_nodes-1).
    double fredholm_h() const noexcept { return R_ / static_cast<double>(m_nodes_ - 1); }

    double coord(std::size_t i) const noexcept;
    double fredholm_coord(std::size_t a) const noexcept;
    std::size_t size() const noexcept { return n_ * n_ * n_; }

    Domain with_tau(double tau) const { return {L_, n_, R_, m_nodes_, tau}; }
    Domain with_n(std::size_t n) const { return {L_, n, R_, m_nodes_, tau_}; }
    Domain with_fredholm(double R, std::size_t m_nodes) const { return {L_, n_, R, m_nodes, tau_}; }

    bool operator==(const Domain&) const = default;

private:
    double L_;
    std::size_t n_;
    double R_;
    std::size_t m_nodes_;
    double tau_;
};

/// Real field sampled on a Domain's grid, index order (x, y, z).
class Field3D {
public:
    /// Zero field.
    explicit Field3D(const Domain& d);
    Field3D(const Domain& d, std::vector<double> values);

    static Field3D constant(const Domain& d, double value);

    const Domain& domain() const noexcept { return domain_; }
    std::size_t n() const noexcept { return domain_.n(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        const std::size_t n = domain_.n();
        return (i * n + j) * n + k;
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept { return values_[index(i, j, k)]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept { return values_[index(i, j, k)]; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    /// Trilinear interpolation at a physical point, each coordinate clamped
    /// to [0, L] first.
    double interpolate_clamped(double x, double y, double z) const noexcept;

private:
    Domain domain_;
    std::vector<double> values_;
};

/// values(i,j,k) = e(x_i, y_j, z_k). DomainError messages carry the node.
Field3D sample(const Expression& e, const Domain& d);

/// max over nodes of |u| exp(-tau (x+y+z)) with the field's own tau.
double bielecki_norm(const Field3D& u);
double bielecki_norm(const Field3D& u, double tau);

/// alpha*u + v. Throws DomainMismatch.
Field3D axpy(double alpha, const Field3D& u, const Field3D& v);
/// Unweighted max |u - v|. Throws DomainMismatch.
double sup_diff(const Field3D& u, const Field3D& v);

/// Pointwise |u - v|.
Field3D abs_diff(const Field3D& u, const Field3D& v);

void require_same_grid(const Field3D& u, const Field3D& v, const char* what);

/// CSV with header "x,y,z,value", rows in (i,j,k) order, 17 significant digits.
void write_csv(std::ostream& out, const Field3D& u);
void write_csv(const std::string& path, const Field3D& u);

} // namespace hur
