#include <doctest.h>

#include "speclab/kernels.hpp"
#include "speclab/library.hpp"
#include "speclab/moduli.hpp"

using namespace speclab;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

cplx v_at(const SpectralCurve& c, const SurfacePoint& p) {
    const cplx w = c.w_at(p);
    return (w - c.spec.numer[0](p.x)) / (2.0 * c.P(p.x));
}

}  // namespace

TEST_CASE("coordinates: count and residue sum") {
    for (const auto& label : builtin_labels()) {
        CAPTURE(label);
        const auto c = build_surface(load_instance(label));
        const auto z = coordinates_of(c, homology_basis(c));
        CHECK(static_cast<int>(z.z.size()) == c.counts.dim);
        CHECK(std::abs(z.residue_sum()) < 1e-10);
    }
}

TEST_CASE("coefficient tangents against finite differences") {
    const auto c = build_surface(load_instance("g2-23"));
    const auto frame = c.frame();
    const Eigen::VectorXcd q = coefficient_vector(c.spec);
    const auto pts = sample_points(c, 5);
    const double eps = 1e-5;
    for (int k = 0; k < q.size(); ++k) {
        Eigen::VectorXcd qp = q, qm = q;
        qp(k) += eps;
        qm(k) -= eps;
        const auto cp = build_surface(with_coefficients(c.spec, qp), &frame);
        const auto cm = build_surface(with_coefficients(c.spec, qm), &frame);
        const Differential t = coefficient_tangent(c, k);
        for (const auto& p : pts) {
            const cplx fd = (v_at(cp, p) - v_at(cm, p)) / (2.0 * eps);
            CHECK(rel(fd, t(p.x, c.w_at(p))) < 1e-7);
        }
    }
}

TEST_CASE("coordinate Jacobian against finite differences") {
    const auto c = build_surface(load_instance("g2-5"));
    const auto hb = homology_basis(c);
    const auto frame = c.frame();
    const auto J = coordinate_jacobian(c, hb);
    CHECK(J.J.rows() == J.J.cols());
    CHECK(J.condition < 1e8);
    const Eigen::VectorXcd q = coefficient_vector(c.spec);
    const double eps = 1e-5;
    for (int k = 0; k < q.size(); ++k) {
        Eigen::VectorXcd qp = q, qm = q;
        qp(k) += eps;
        qm(k) -= eps;
        const auto zp = coordinates_of(build_surface(with_coefficients(c.spec, qp), &frame), hb).z;
        const auto zm = coordinates_of(build_surface(with_coefficients(c.spec, qm), &frame), hb).z;
        const Eigen::VectorXcd fd = (zp - zm) / (2.0 * eps);
        CHECK((fd - J.J.col(k)).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Newton navigation") {
    const auto c = build_surface(load_instance("ell4"));
    const ModuliChart chart(c);
    const auto hb = homology_basis(c);
    const Eigen::VectorXcd z0 = chart.point().z;
    const double scale = z0.cwiseAbs().maxCoeff();
    SUBCASE("zero step") {
        const auto c1 = chart.step_to(z0);
        CHECK((coordinates_of(c1, hb).z - z0).cwiseAbs().maxCoeff() < 1e-13 * scale);
    }
    SUBCASE("single coordinate step") {
        const double eps = 1e-4;
        const auto c1 = chart.step(0, eps);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(z0.size());
        e(0) = eps;
        CHECK((coordinates_of(c1, hb).z - z0 - e).cwiseAbs().maxCoeff() < 1e-11 * scale);
    }
    SUBCASE("scaling step") {
        const double eps = 1e-3;
        const auto c1 = chart.step_to((1.0 + eps) * z0);
        const auto q0 = c.spec.numer, q1 = c1.spec.numer;
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < q0[l].size(); ++m)
                CHECK(std::abs(q1[l][m] - std::pow(1.0 + eps, l + 1) * q0[l][m]) < 1e-9 * std::max(1.0, std::abs(q0[l][m])));
    }
    SUBCASE("finite differences of the chart are the identity") {
        for (int i = 0; i < chart.dim(); ++i) {
            const FdResult r = chart.fd(i, [&](const SpectralCurve& cc) { return coordinates_of(cc, hb).z; });
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(chart.dim());
            e(i) = 1.0;
            CHECK((r.value - e).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("direction differentials are derivatives of v") {
    for (const std::string label : {"g2-5", "g2-23"}) {
        CAPTURE(label);
        const auto c = build_surface(load_instance(label));
        const ModuliChart chart(c);
        const auto pd = normalized_basis(c);
        const auto pts = sample_points(c, 5);
        for (int i = 0; i < chart.dim(); ++i) {
            const auto& d = chart.point().dirs[static_cast<std::size_t>(i)];
            CAPTURE(d.name());
            const Differential h = direction_differential(c, pd, d);
            const FdResult r = chart.fd(i, [&](const SpectralCurve& cc) {
                Eigen::VectorXcd out(5);
                for (int k = 0; k < 5; ++k) out(k) = v_at(cc, pts[k]);
                return out;
            });
            for (int k = 0; k < 5; ++k) CHECK(rel(r.value(k), h(pts[k].x, c.w_at(pts[k]))) < 1e-5);
        }
    }
}
