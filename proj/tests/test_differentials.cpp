#include <doctest.h>

#include "speclab/differentials.hpp"
#include "speclab/library.hpp"

using namespace speclab;

namespace {

cplx agm(cplx a, cplx b) {
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * std::abs(a); ++i) {
        const cplx an = 0.5 * (a + b);
        cplx bn = std::sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
        a = an;
        b = bn;
    }
    return a;
}

cplx reduce_modular(cplx tau) {
    for (int i = 0; i < 100; ++i) {
        tau -= std::round(tau.real());
        if (std::abs(tau) < 1.0 - 1e-14) tau = -1.0 / tau;
        else break;
    }
    return tau;
}

}  // namespace

TEST_CASE("period matrix is symmetric with positive imaginary part") {
    for (const auto& label : builtin_labels()) {
        CAPTURE(label);
        const auto c = build_surface(load_instance(label));
        const auto pd = normalized_basis(c);
        const int g = pd.genus();
        CHECK((pd.Omega - pd.Omega.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.Omega.imag());
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        // a-normalization, recomputed from the differentials themselves
        for (int al = 0; al < g; ++al) {
            const auto a = a_periods(c, pd, pd.v_alpha(al));
            for (int be = 0; be < g; ++be) CHECK(std::abs(a(be) - (al == be ? 1.0 : 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("elliptic period ratio agrees with the AGM") {
    const auto c = build_surface(load_instance("ell4"));
    const auto pd = normalized_basis(c);
    REQUIRE(pd.genus() == 1);
    const auto& e = c.branch;
    REQUIRE(e.size() == 4);
    const cplx lambda = (e[0] - e[1]) * (e[2] - e[3]) / ((e[0] - e[2]) * (e[1] - e[3]));
    const cplx k = std::sqrt(lambda), kp = std::sqrt(1.0 - lambda);
    const cplx tau = cplx(0, 1) * agm(1.0, kp) / agm(1.0, k);
    const cplx t1 = reduce_modular(pd.Omega(0, 0)), t2 = reduce_modular(tau);
    CAPTURE(t1);
    CAPTURE(t2);
    CHECK(std::abs(t1 - t2) < 1e-9);
}

TEST_CASE("homology shift leaves marking invariants unchanged") {
    const auto c = build_surface(load_instance("g2-5"));
    const auto p0 = normalized_basis(c);
    const auto p1 = normalized_basis(c, homology_basis_shifted(c, 1));
    const double d0 = p0.Omega.imag().determinant(), d1 = p1.Omega.imag().determinant();
    // det Im Omega transforms with |det(C Omega + D)|^-2; compare the invariant det(Im Omega) / |det A_raw|^-2
    const double i0 = d0 * std::norm(p0.A_raw.determinant()), i1 = d1 * std::norm(p1.A_raw.determinant());
    CHECK(std::abs(i0 - i1) < 1e-9 * std::abs(i0));
}

TEST_CASE("principal parts of v match the chart series") {
    for (const auto& label : builtin_labels()) {
        CAPTURE(label);
        const auto c = build_surface(load_instance(label));
        const auto v = v_differential(c);
        for (const auto& sing : v.ledger) {
            const Chart ch = regular_chart(c, sing.point.x, c.w_at(sing.point));
            const auto jet = chart_jet(ch, [&](cplx t) { return v(ch.x(t), ch.w(t)); });
            for (int ell = 1; ell <= static_cast<int>(sing.coeff.size()); ++ell) {
                const cplx ref = jet.coeff(-ell);
                CHECK(std::abs(sing.coeff[static_cast<std::size_t>(ell - 1)] - ref) < 1e-9 * (1.0 + std::abs(ref)));
            }
        }
    }
}

TEST_CASE("second and third kind differentials") {
    const auto c = build_surface(load_instance("g2-5"));
    const auto pd = normalized_basis(c);
    const int m = static_cast<int>(c.spec.poles.size());
    for (int j = 0; j < m; ++j)
        for (int s = 0; s < 2; ++s) {
            const SurfacePoint p{c.spec.poles[static_cast<std::size_t>(j)].x, s};
            const Chart ch = regular_chart(c, p.x, c.w_at(p));
            for (int ell = 2; ell <= c.spec.poles[static_cast<std::size_t>(j)].k; ++ell) {
                const auto w = second_kind(c, pd, j, s, ell);
                CHECK(a_periods(c, pd, w).cwiseAbs().maxCoeff() < 1e-10);
                const Laurent l = w.in_chart(ch, 2);
                for (int q = 1; q <= ell; ++q) CHECK(std::abs(l.coeff(-q) - (q == ell ? 1.0 : 0.0)) < 1e-10);
            }
            if (j == 0 && s == 0) continue;
            const auto u = third_kind(c, pd, j, s);
            CHECK(a_periods(c, pd, u).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(std::abs(u.in_chart(ch, 2).residue() - 1.0) < 1e-10);
        }
    CHECK_THROWS_AS(third_kind(c, pd, 0, 0), DomainError);
    CHECK_THROWS_AS(second_kind(c, pd, 0, 0, 99), DomainError);
}

TEST_CASE("b-periods of second kind differentials are derivatives of the Abel map") {
    // reciprocity: b-period of the normalized double-pole differential at p equals 2 pi i v_alpha/dx(p)
    const auto c = build_surface(load_instance("g2-5"));
    const auto pd = normalized_basis(c);
    const int j = 0;
    for (int s = 0; s < 2; ++s) {
        if (c.spec.poles[j].k < 2) break;
        const SurfacePoint p{c.spec.poles[j].x, s};
        const auto w = second_kind(c, pd, j, s, 2);
        const Eigen::VectorXcd b = b_periods(c, pd, w);
        const Eigen::VectorXcd ref = cplx(0, 2 * M_PI) * pd.g(p.x, c.w_at(p));
        CHECK((b - ref).cwiseAbs().maxCoeff() < 1e-9 * ref.cwiseAbs().maxCoeff());
    }
}
