#include <doctest.h>

#include <numbers>

#include "speclab/numerics/contour.hpp"
#include "speclab/numerics/jet.hpp"
#include "speclab/numerics/linalg.hpp"
#include "speclab/numerics/poly.hpp"
#include "speclab/numerics/quadrature.hpp"

using namespace speclab;
using std::numbers::pi;
const cplx I(0.0, 1.0);

TEST_CASE("roots of x^2+1") {
    auto r = poly_roots(ComplexPoly({1.0, 0.0, 1.0}));
    REQUIRE(r.size() == 2);
    std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.value.imag() < b.value.imag(); });
    CHECK(std::abs(r[0].value + I) < 1e-14);
    CHECK(std::abs(r[1].value - I) < 1e-14);
    CHECK(r[0].multiplicity == 1);
}

TEST_CASE("triple root is flagged") {
    auto r = poly_roots(ComplexPoly({-1.0, 3.0, -3.0, 1.0}));
    REQUIRE(r.size() == 1);
    CHECK(r[0].multiplicity == 3);
    CHECK(std::abs(r[0].value - 1.0) < 1e-5);  // triple root: accuracy ~ eps^(1/3)
}

TEST_CASE("Aberth roots agree with companion eigenvalues") {
    ComplexPoly p({cplx(0.3, -1.2), cplx(2.0, 0.5), cplx(-1.0, 0.25), cplx(0.7, 0.0), cplx(1.1, -0.4), cplx(0.2, 0.9)});
    auto a = poly_root_values(p);
    auto b = companion_eigenvalues(p);
    REQUIRE(a.size() == b.size());
    for (const auto& z : a) {
        double best = 1e300;
        for (const auto& w : b) best = std::min(best, std::abs(z - w));
        CHECK(best < 1e-10);
        CHECK(std::abs(p(z)) < 1e-12 * p.coefficient_scale() * std::pow(std::max(1.0, std::abs(z)), 5));
    }
}

TEST_CASE("poly shift and deflation") {
    ComplexPoly p({1.0, 2.0, 3.0});
    auto s = p.shifted(2.0);
    CHECK(std::abs(s(0.5) - p(2.5)) < 1e-13);
    auto d = ComplexPoly({-2.0, 1.0}) * p;
    auto q = d.deflated(2.0);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(q[k] - p[k]) < 1e-13);
}

TEST_CASE("contour quadrature") {
    Contour c;
    c.append(Segment::arc(0.0, 1.0, 0.0, 2 * pi));
    auto r = integrate([](cplx z) { return 1.0 / z; }, c);
    CHECK(std::abs(r.value - 2.0 * pi * I) < 1e-12);
    CHECK(std::abs(r.value - 2.0 * pi * I) <= std::max(r.error, 1e-15));

    auto q = integrate_interval([](double x) { return cplx(x * x * x); }, 0.0, 1.0);
    CHECK(std::abs(q.value - 0.25) < 1e-15);

    // oscillatory: int_0^1 exp(20 i x) dx
    auto o = integrate_interval([](double x) { return std::exp(20.0 * I * x); }, 0.0, 1.0);
    const cplx exact = (std::exp(20.0 * I) - 1.0) / (20.0 * I);
    CHECK(std::abs(o.value - exact) < 1e-13);
    CHECK(std::abs(o.value - exact) <= std::max(o.error, 1e-15));
}

TEST_CASE("circle jets") {
    auto j = circle_jet([](cplx t) { return 1.0 / t; }, 0.5);
    CHECK(std::abs(j.residue() - 1.0) < 1e-12);
    for (int k = -10; k < 10; ++k)
        if (k != -1) CHECK(std::abs(j.coeff(k)) < 1e-12);

    auto e = circle_jet([](cplx t) { return std::exp(t); }, 0.5);
    double fact = 1.0;
    for (int k = 0; k <= 12; ++k) {
        if (k > 0) fact *= k;
        CHECK(std::abs(e.coeff(k) - 1.0 / fact) < 1e-12);
    }
    CHECK(e.tail_estimate() < 1e-14);
    // radius halving leaves retained coefficients unchanged
    auto h = circle_jet([](cplx t) { return std::exp(t); }, 0.25);
    for (int k = 0; k <= 12; ++k) CHECK(std::abs(h.coeff(k) - e.coeff(k)) < 1e-9);
}

TEST_CASE("dense solves") {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd b(3);
    b << cplx(1, 2), cplx(-3, 0), cplx(0.5, 0.5);
    auto s = solve_dense(id, b);
    CHECK((s.solution - b).norm() < 1e-15);
    CHECK(s.condition == doctest::Approx(1.0));

    Eigen::MatrixXcd a(2, 2);
    a << 2.0, 1.0, 1.0, 3.0;  // inverse = [3 -1; -1 2] / 5
    Eigen::VectorXcd rhs(2);
    rhs << 1.0, 2.0;
    auto t = solve_dense(a, rhs);
    CHECK(std::abs(t.solution(0) - 0.2) < 1e-15);
    CHECK(std::abs(t.solution(1) - 0.6) < 1e-15);
    CHECK(t.residual < 1e-15);

    Eigen::MatrixXcd sing(2, 2);
    sing << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(solve_dense(sing, rhs), NumericalError);
}
