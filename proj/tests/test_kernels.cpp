#include <doctest.h>

#include <numbers>

#include "speclab/kernels.hpp"
#include "speclab/library.hpp"

using namespace speclab;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("theta bidifferential matches the algebraic one") {
    for (const auto& label : builtin_labels()) {
        CAPTURE(label);
        const CurveModel m(build_surface(load_instance(label)));
        const AlgebraicBergman alg(m.curve(), m.periods());
        const auto pts = sample_points(m.curve(), 6);
        std::vector<LocalPoint> lp;
        for (const auto& p : pts) lp.push_back(m.point(p));
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                const cplx b = m.bidifferential(lp[i], lp[j]);
                CHECK(rel(b, m.bidifferential(lp[j], lp[i])) < 1e-9);
                CHECK(rel(b, alg(lp[i].x, lp[i].w, lp[j].x, lp[j].w)) < 1e-8);
            }
        for (int i = 0; i < 3; ++i) CHECK(rel(m.bergman_projective(lp[i]), alg.projective(lp[i].x)) < 1e-8);
    }
}

TEST_CASE("algebraic bidifferential has zero a-periods") {
    const CurveModel m(build_surface(load_instance("g2-5")));
    const AlgebraicBergman alg(m.curve(), m.periods());
    const auto pts = sample_points(m.curve(), 2);
    for (const auto& p : pts) {
        const cplx y = p.x, wy = m.curve().w_at(p);
        auto f = [&](cplx x, cplx w) { return alg(x, w, y, wy); };
        const LassoTable L = lasso_integrals(m.curve(), f);
        for (const auto& a : m.periods().basis.a) CHECK(std::abs(cycle_integral(a, L)(0)) < 1e-9);
    }
}

TEST_CASE("prime form normalization and antisymmetry") {
    const CurveModel m(build_surface(load_instance("g2-23")));
    const auto pts = sample_points(m.curve(), 3);
    const LocalPoint a = m.point(pts[0]), b = m.point(pts[1]);
    CHECK(rel(m.prime_form(a, b), -m.prime_form(b, a)) < 1e-9);
    const ChartExpansion ex = m.expand_at(pts[2]);
    const LocalPoint c0 = ex.at(0.0);
    const double r = 0.05 * ex.chart.radius;
    const JetSeries j = circle_jet([&](cplx t) { return m.prime_form(c0, ex.at(t)); }, r, 32);
    CHECK(std::abs(j.coeff(0)) < 1e-10);
    CHECK(std::abs(j.coeff(1) - 1.0) < 1e-9);
}

TEST_CASE("mixed log-derivative of the prime form is the bidifferential") {
    const CurveModel m(build_surface(load_instance("g2-5")));
    const auto pts = sample_points(m.curve(), 6);
    for (int k = 0; k < 3; ++k) {
        const ChartExpansion ex = m.expand_at(pts[2 * k]), ey = m.expand_at(pts[2 * k + 1]);
        const cplx e0 = m.prime_form(ex.at(0.0), ey.at(0.0));
        const double r1 = 0.2 * ex.chart.radius, r2 = 0.2 * ey.chart.radius;
        const auto h = torus_taylor([&](cplx s, cplx t) { return std::log(m.prime_form(ex.at(s), ey.at(t)) / e0); }, r1, r2, 32);
        const cplx b = m.bidifferential(ex.at(0.0), ey.at(0.0));
        CHECK(rel(h[1 * 32 + 1], b) < 1e-8);
    }
}

TEST_CASE("regularized diagonal of B against the projective connections") {
    const CurveModel m(build_surface(load_instance("g2-23")));
    const auto pts = sample_points(m.curve(), 3);
    for (const auto& p : pts) {
        const ChartExpansion ex = m.expand_at(p);
        const LocalPoint p0 = ex.at(0.0);
        const Laurent vl = m.v().in_chart(ex.chart, 40);
        REQUIRE(vl.val == 0);
        const Series V = vl.s, F = V.integral();
        const double r = 0.3 * ex.chart.radius;
        const JetSeries j = circle_jet(
            [&](cplx t) {
                const cplx f = F.eval(t);
                return m.bidifferential(p0, ex.at(t)) - V.eval(0.0) * V.eval(t) / (f * f);
            },
            r, 64);
        const cplx reg = (m.bergman_projective(p0) - schwarzian_series(V, 0.0)) / 6.0;
        CHECK(rel(j.coeff(0), reg) < 1e-8);
        CHECK(rel(schwarzian_series(V, 0.0), schwarzian_v(m.curve(), p.x, m.curve().w_at(p))) < 1e-10);
    }
}

TEST_CASE("route and polygon Abel maps differ by lattice vectors") {
    const CurveModel m(build_surface(load_instance("g2-5")));
    const auto& Om = m.periods().Omega;
    const Eigen::MatrixXd Yinv = Om.imag().inverse();
    for (const auto& z : m.curve().zeros) {
        const Eigen::VectorXcd d = m.abel_polygon(z) - m.abel(z);
        const Eigen::VectorXd mm = Yinv * d.imag();
        const Eigen::VectorXd mr = mm.array().round();
        const Eigen::VectorXcd nn = d - Om * mr.cast<cplx>();
        CHECK((mm - mr).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((nn.real() - nn.real().array().round().matrix()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(nn.imag().cwiseAbs().maxCoeff() < 1e-9);
    }
}
