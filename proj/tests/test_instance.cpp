#include <doctest.h>

#include "speclab/instance.hpp"

using namespace speclab;

namespace {

InstanceSpec sample_ell4() {
    InstanceSpec s;
    s.label = "sample-ell4";
    s.n = 2;
    s.poles = {{cplx(0.0, 0.0), 4}};
    s.numer = {ComplexPoly({cplx(0.4, 0.1), cplx(-0.3, 0.2), cplx(1.0, -0.1)}),
               ComplexPoly({cplx(0.8, -0.3), cplx(0.2, 0.5), cplx(-0.6, 0.1), cplx(0.3, 0.3), cplx(0.9, 0.2)})};
    return s;
}

}  // namespace

TEST_CASE("derived counts") {
    InstanceSpec s;
    s.n = 2;
    s.poles = {{0.0, 1}, {1.0, 1}, {2.0, 1}, {3.0, 1}, {4.0, 1}};
    auto c = derived_counts(s);
    CHECK(c.branch_points == 6);
    CHECK(c.genus == 2);
    CHECK(c.zeros == 12);
    CHECK(c.dim == 11);
    CHECK(dimension_by_coefficients(s) == c.dim);
    CHECK(s.coefficient_count() == c.dim);

    s.poles = {{0.0, 4}};
    c = derived_counts(s);
    CHECK(c.branch_points == 4);
    CHECK(c.genus == 1);
    CHECK(c.zeros == 8);
    CHECK(c.dim == 8);
    CHECK(dimension_by_coefficients(s) == c.dim);
    CHECK(s.coefficient_count() == c.dim);

    s.poles = {{0.0, 2}, {1.0, 3}};
    c = derived_counts(s);
    CHECK(c.genus == 2);
    CHECK(c.branch_points == 6);
    CHECK(c.zeros == 12);  // 2g - 2 + n sum k
    // dim equals the number of period and singular-part coordinates: g + n sum k - 1
    CHECK(c.dim == c.genus + 2 * 5 - 1);

    s.n = 1;
    c = derived_counts(s);
    CHECK(c.branch_points == 0);
    CHECK(c.genus == 0);
}

TEST_CASE("parse round trip") {
    auto s = sample_ell4();
    auto t = parse_instance(instance_to_json(s));
    CHECK(t.label == s.label);
    CHECK(t.n == 2);
    REQUIRE(t.poles.size() == 1);
    CHECK(t.poles[0].k == 4);
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < s.numer[l].size(); ++m) CHECK(t.numer[l][m] == s.numer[l][m]);
}

TEST_CASE("parse errors") {
    const std::string missing = R"({"label":"x","n":2,"poles":[{"x":[0,0],"k":4}],"Q":[{"ell":1,"numer":[[1,0]]}]})";
    CHECK_THROWS_WITH_AS(parse_instance(missing), doctest::Contains("missing differential ell=2"), ParseError);

    const std::string dup =
        R"({"n":2,"poles":[{"x":[0,0],"k":2},{"x":[0,0],"k":2}],"Q":[{"ell":1,"numer":[1]},{"ell":2,"numer":[1]}]})";
    CHECK_THROWS_WITH_AS(parse_instance(dup), doctest::Contains("duplicate pole"), ParseError);

    const std::string small_n = R"({"n":1,"poles":[{"x":[0,0],"k":2}],"Q":[{"ell":1,"numer":[1]}]})";
    CHECK_THROWS_WITH_AS(parse_instance(small_n), doctest::Contains("n < 2"), ParseError);

    const std::string deg =
        R"({"n":2,"poles":[{"x":[0,0],"k":3}],"Q":[{"ell":1,"numer":[1,1,1]},{"ell":2,"numer":[1]}]})";
    try {
        parse_instance(deg);
        FAIL("expected degree error");
    } catch (const ParseError& e) {
        CHECK(e.path() == "Q[0].numer");
        CHECK(std::string(e.what()).find("degree bound") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_instance("{not json"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"poles":[{"x":[0],"k":2}],"Q":[]})"), ParseError);
}

TEST_CASE("genericity of a sample ell4") {
    auto s = sample_ell4();
    auto rep = validate_genericity(s);
    CHECK(rep.pass);
    CHECK(rep.branch_points.size() == 4);
    CHECK(rep.base_zeros.size() == 4);
    // each branch point is a simple root: D(e) = 0, D'(e) != 0
    auto d = discriminant(s);
    for (const auto& e : rep.branch_points) {
        auto [v, dv] = d.eval_with_derivative(e);
        CHECK(std::abs(v) < 1e-12 * d.coefficient_scale() * 10);
        CHECK(std::abs(dv) > 1e-3);
    }
    // companion-matrix oracle for the discriminant roots
    auto comp = companion_eigenvalues(d);
    for (const auto& e : rep.branch_points) {
        double best = 1e300;
        for (const auto& z : comp) best = std::min(best, std::abs(z - e));
        CHECK(best < 1e-10);
    }
}

TEST_CASE("double branch point is rejected") {
    auto s = sample_ell4();
    // N_2 = (N_1^2 - D)/4 with D = (x-0.7)^2 (x+1.1)(x-0.2i)
    std::vector<cplx> r = {0.7, 0.7, -1.1, cplx(0.0, 0.2)};
    auto D = ComplexPoly::from_roots(r);
    s.numer[1] = (s.numer[0] * s.numer[0] - D) * cplx(0.25);
    auto rep = validate_genericity(s);
    CHECK_FALSE(rep.pass);
    CHECK(rep.summary().find("non-simple branch point") != std::string::npos);
}

TEST_CASE("pole on a branch point is rejected") {
    auto s = sample_ell4();
    auto rep0 = validate_genericity(s);
    s.poles[0].x = rep0.branch_points[0];
    auto rep = validate_genericity(s);
    CHECK_FALSE(rep.pass);
    CHECK(rep.summary().find("pole collides with branch point") != std::string::npos);
}

TEST_CASE("cubic cover discriminant") {
    // psi^3 + N1 psi^2 + N2 psi + N3 with known roots psi = a(x), b(x), c(x)
    InstanceSpec s;
    s.n = 3;
    s.poles = {{0.0, 3}};
    // roots 1, x, -x-1 => e1 = 0... use psi roots r1 = 1, r2 = x, r3 = 2
    // (psi-1)(psi-x)(psi-2) = psi^3 - (3+x) psi^2 + (2+3x) psi - 2x
    s.numer = {ComplexPoly({-3.0, -1.0}), ComplexPoly({2.0, 3.0}), ComplexPoly({0.0, -2.0})};
    auto d = discriminant(s);
    // disc = (1-x)^2 (1-2)^2 (x-2)^2
    for (double x : {0.3, -1.2, 2.5}) {
        const double expect = std::pow(1 - x, 2) * std::pow(x - 2, 2);
        CHECK(std::abs(d(x) - expect) < 1e-9);
    }
}
