#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "hur/grid.hpp"
#include "support/instances.hpp"

using namespace hur;
using hur::testing::pt;
using hur::testing::random_field;

TEST_CASE("domain invariants") {
    CHECK_NOTHROW(Domain(1.0, 3, 1.0, 3, 0.0));
    CHECK_THROWS_AS(Domain(0.0, 3, 1.0, 3, 0.0), InvalidDomain);
    CHECK_THROWS_AS(Domain(1.0, 2, 1.0, 3, 0.0), InvalidDomain);
    CHECK_THROWS_AS(Domain(1.0, 3, 0.5, 3, 0.0), InvalidDomain);
    CHECK_THROWS_AS(Domain(1.0, 3, 1.0, 2, 0.0), InvalidDomain);
    CHECK_THROWS_AS(Domain(1.0, 3, 1.0, 3, -1.0), InvalidDomain);

    const Domain d(2.0, 5, 4.0, 9, 1.0);
    CHECK(d.h() == 0.5);
    CHECK(d.coord(4) == 2.0);
    CHECK(d.fredholm_h() == 0.5);
    CHECK(d.fredholm_coord(8) == 4.0);
}

TEST_CASE("sample") {
    const Domain d(1.0, 3, 1.0, 3, 0.0);
    const Field3D zero = sample(pt("0"), d);
    for (double v : zero.values()) CHECK(v == 0.0);

    const Field3D x = sample(pt("x"), d);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(x(0, j, k) == 0.0);
            CHECK(x(1, j, k) == 0.5);
            CHECK(x(2, j, k) == 1.0);
        }

    CHECK(sample(pt("x*y*z"), d)(2, 2, 2) == 1.0);
    CHECK(sample(pt("x*y*z"), d)(1, 1, 1) == 0.125);
}

TEST_CASE("sample annotates domain errors with the node") {
    const Domain d(1.0, 3, 1.0, 3, 0.0);
    try {
        sample(pt("1/(x-0.5)"), d);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("(1,0,0)") != std::string::npos);
    }
    CHECK_THROWS(sample(parse("v", vars::pointwise_map), d));
}

TEST_CASE("bielecki norm examples") {
    const Domain d(1.0, 9, 1.0, 3, 1.0);
    CHECK(bielecki_norm(Field3D(d)) == 0.0);
    CHECK(bielecki_norm(Field3D::constant(d, 1.0)) == 1.0);
    CHECK(bielecki_norm(Field3D::constant(d.with_tau(3.7), 1.0)) == 1.0);
    CHECK(bielecki_norm(sample(pt("exp(x+y+z)"), d)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bielecki_norm(Field3D::constant(d, -2.5)) == 2.5);
}

TEST_CASE("axpy and sup_diff") {
    const Domain d(1.0, 5, 1.0, 3, 0.5);
    std::mt19937_64 rng(7);
    const Field3D u = random_field(d, rng);
    const Field3D same = axpy(1.0, u, Field3D(d));
    CHECK(same.values() == u.values());
    const Field3D cancel = axpy(-1.0, u, u);
    for (double v : cancel.values()) CHECK(v == 0.0);
    CHECK(sup_diff(sample(pt("x"), d), sample(pt("x + 0.25"), d)) == doctest::Approx(0.25).epsilon(1e-15));

    const Domain other(1.0, 7, 1.0, 3, 0.5);
    CHECK_THROWS_AS(axpy(1.0, u, Field3D(other)), DomainMismatch);
    CHECK_THROWS_AS(sup_diff(u, Field3D(other)), DomainMismatch);
}

TEST_CASE("norm axioms on random field pairs") {
    const Domain d(1.5, 6, 1.5, 3, 0.8);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> scalar(-4.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Field3D u = random_field(d, rng, 3.0);
        const Field3D v = random_field(d, rng, 3.0);
        const double a = scalar(rng);
        const double nu = bielecki_norm(u);
        const double nv = bielecki_norm(v);

        CHECK(nu >= 0.0);
        CHECK(bielecki_norm(axpy(a, u, Field3D(d))) == doctest::Approx(std::fabs(a) * nu).epsilon(1e-14));
        CHECK(bielecki_norm(axpy(1.0, u, v)) <= nu + nv + 1e-15);

        // Monotone in tau.
        const double tau_hi = d.tau() + std::fabs(scalar(rng));
        CHECK(bielecki_norm(u, tau_hi) <= nu);
        // Bounded by the sup norm, with equality at tau = 0.
        CHECK(nu <= sup_diff(u, Field3D(d)));
        CHECK(bielecki_norm(u, 0.0) == sup_diff(u, Field3D(d)));
    }
}

TEST_CASE("trilinear interpolation with clamping") {
    const Domain d(1.0, 5, 3.0, 5, 0.0);
    const Field3D f = sample(pt("2*x - y + 0.5*z + 1"), d);
    CHECK(f.interpolate_clamped(0.3, 0.6, 0.1) == doctest::Approx(2 * 0.3 - 0.6 + 0.05 + 1));
    CHECK(f.interpolate_clamped(0.25, 0.5, 0.75) == f(1, 2, 3));
    // Beyond L the boundary value is used.
    CHECK(f.interpolate_clamped(2.0, 0.0, 5.0) == doctest::Approx(2 - 0 + 0.5 + 1));
}

TEST_CASE("csv dump") {
    const Domain d(1.0, 3, 1.0, 3, 0.0);
    std::ostringstream os;
    write_csv(os, sample(pt("x + 10*y + 100*z"), d));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,z,value");
    std::getline(is, line);
    CHECK(line == "0,0,0,0");
    std::getline(is, line);
    CHECK(line == "0,0,0.5,50");
    int rows = 2;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 27);
}
