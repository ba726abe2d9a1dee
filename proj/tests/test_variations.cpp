#include <doctest.h>

#include <algorithm>
#include <array>
#include <numbers>

#include "speclab/library.hpp"
#include "speclab/variations.hpp"

using namespace speclab;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

cplx path_v(const SpectralCurve& c, const Differential& d, const SurfacePoint& p) {
    return route_integral(c, p, [&](cplx x, cplx w) { return d(x, w); });
}

}  // namespace

TEST_CASE("endpoint corrections: finite differences of integrals to branch points") {
    const auto c = build_surface(load_instance("g2-23"));
    const CurveModel m(c);
    const auto t = branch_jets(m);
    const ModuliChart chart(c);
    const int nz = c.n_branch_zeros;
    const int r = c.r_index;
    const bool r_branch = r < nz;
    for (int d = 0; d < static_cast<int>(t.dirs.size()); ++d) {
        CAPTURE(t.dirs[d].name());
        const FdResult fd = chart.fd(d, [&](const SpectralCurve& cc) {
            const Differential v = v_differential(cc);
            Eigen::VectorXcd out(nz);
            const cplx base = path_v(cc, v, cc.x_r());
            for (int i = 0; i < nz; ++i) out(i) = path_v(cc, v, cc.zeros[i]) - base;
            return out;
        });
        const Differential& h = t.h[d];
        const cplx hr = path_v(c, h, c.x_r());
        for (int i = 0; i < nz; ++i) {
            if (i == r) continue;
            cplx pred = path_v(c, h, c.zeros[i]) - hr + endpoint_correction(t, d, i);
            if (r_branch) pred -= endpoint_correction(t, d, r);
            CHECK(rel(fd.value(i), pred) < 1e-5);
        }
        ComplexPoly f({0.0, 2.0, 0.0, 1.0});
        for (int i = 0; i < nz; ++i) CHECK(rel(endpoint_correction(t, d, i, f), endpoint_correction(t, d, i)) < 1e-8);
    }
}

TEST_CASE("period matrix variation against finite differences") {
    for (const std::string label : {"ell4", "g2-23"}) {
        CAPTURE(label);
        const auto c = build_surface(load_instance(label));
        const CurveModel m(c);
        const auto t = branch_jets(m);
        const ModuliChart chart(c);
        const auto hb = m.periods().basis;
        const int g = m.genus();
        Eigen::MatrixXcd euler = Eigen::MatrixXcd::Zero(g, g);
        for (int d = 0; d < chart.dim(); ++d) {
            CAPTURE(t.dirs[d].name());
            const PeriodVariation pv = vary_period_matrix(m, t, d);
            const FdResult fd = chart.fd(d, [&](const SpectralCurve& cc) {
                const auto pd = normalized_basis(cc, hb);
                return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(pd.Omega.data(), g * g));
            });
            for (int k = 0; k < g * g; ++k) CHECK(rel(fd.value(k), pv.single(k % g, k / g)) < 1e-5);
            euler += chart.point().z(d) * pv.single;
        }
        CHECK(euler.cwiseAbs().maxCoeff() < 1e-8);
        for (int a = 0; a < g; ++a)
            for (int b = 0; b < g; ++b)
                for (int cc = 0; cc < g; ++cc) {
                    const cplx x = vary_period_matrix(m, t, cc).single(a, b);
                    CHECK(std::abs(x - vary_period_matrix(m, t, a).single(b, cc)) < 1e-9 * std::max(1.0, std::abs(x)));
                }
    }
}

namespace {

struct KernelFixture {
    SpectralCurve c;
    CurveModel m;
    BranchJetTable t;
    ModuliChart chart;
    std::vector<SurfacePoint> pts;

    explicit KernelFixture(const std::string& label)
        : c(build_surface(load_instance(label))), m(c), t(branch_jets(m)), chart(c), pts(sample_points(c, 4)) {}

    CurveModel perturbed(const SpectralCurve& cc) const {
        return CurveModel(cc, m.quad(), &m.periods().basis, &m.theta_params().delta);
    }
};

}  // namespace

TEST_CASE("holomorphic differential and bidifferential variations against finite differences") {
    for (const std::string label : {"ell4", "g2-23"}) {
        CAPTURE(label);
        const KernelFixture f(label);
        const int g = f.m.genus();
        // three evaluation configurations (x, y)
        const std::vector<std::pair<int, int>> cfg{{0, 1}, {1, 2}, {2, 3}};
        for (int d = 0; d < f.chart.dim(); ++d) {
            CAPTURE(f.t.dirs[d].name());
            const FdResult fd = f.chart.fd(d, [&](const SpectralCurve& cc) {
                const CurveModel mm = f.perturbed(cc);
                Eigen::VectorXcd out(3 * (g + 1));
                for (int k = 0; k < 3; ++k) {
                    const LocalPoint X = mm.point(f.pts[cfg[k].first]), Y = mm.point(f.pts[cfg[k].second]);
                    out.segment(k * (g + 1), g) = X.g;
                    out(k * (g + 1) + g) = mm.bidifferential(X, Y);
                }
                return out;
            });
            for (int k = 0; k < 3; ++k) {
                const LocalPoint X = f.m.point(f.pts[cfg[k].first]), Y = f.m.point(f.pts[cfg[k].second]);
                for (int a = 0; a < g; ++a) CHECK(rel(fd.value(k * (g + 1) + a), vary_v_alpha(f.m, f.t, d, a, X)) < 1e-4);
                const cplx vb = vary_bidifferential(f.m, f.t, d, X, Y);
                CHECK(rel(fd.value(k * (g + 1) + g), vb) < 1e-4);
                CHECK(rel(vary_bidifferential(f.m, f.t, d, Y, X), vb) < 1e-8);
            }
        }
    }
}

TEST_CASE("log prime form variation against finite differences along a tracked branch") {
    for (const std::string label : {"ell4", "g2-23"}) {
        CAPTURE(label);
        const KernelFixture f(label);
        const std::vector<std::pair<int, int>> cfg{{0, 1}, {1, 2}, {0, 3}};
        for (int d = 0; d < f.chart.dim(); ++d) {
            CAPTURE(f.t.dirs[d].name());
            auto prime = [&](double e) {
                const CurveModel mm = f.perturbed(f.chart.step(d, e));
                Eigen::VectorXcd out(3);
                for (int k = 0; k < 3; ++k)
                    out(k) = mm.prime_form(mm.point(f.pts[cfg[k].first]), mm.point(f.pts[cfg[k].second]));
                return out;
            };
            const double eps = 1e-4 * f.chart.scale(d);
            auto central = [&](double e) {
                const Eigen::VectorXcd p = prime(e), q = prime(-e);
                Eigen::VectorXcd r(3);
                for (int k = 0; k < 3; ++k) r(k) = std::log(p(k) / q(k)) / (2.0 * e);
                return r;
            };
            const Eigen::VectorXcd fd = (4.0 * central(0.5 * eps) - central(eps)) / 3.0;
            for (int k = 0; k < 3; ++k) {
                const LocalPoint X = f.m.point(f.pts[cfg[k].first]), Y = f.m.point(f.pts[cfg[k].second]);
                CHECK(rel(fd(k), vary_log_prime_form(f.m, f.t, d, X, Y)) < 1e-4);
            }
        }
    }
}

TEST_CASE("tau gradient: residue formula, chain-rule oracle and symmetric cross-partials") {
    const KernelFixture f("g2-resfree");
    const int g = f.m.genus();
    for (int a = 0; a < g; ++a) {
        const TauGradient r = tau_gradient(f.m, f.t, a);
        const TauGradient o = tau_chain_rule(f.m, f.t, a);
        CHECK(rel(r.value, o.value) < 1e-4);
        CHECK(rel(r.branch_sum, o.branch_sum) < 1e-4);
    }
    std::vector<FdResult> fd;
    for (int b = 0; b < g; ++b)
        fd.push_back(f.chart.fd(b, [&](const SpectralCurve& cc) {
            const CurveModel mm = f.perturbed(cc);
            const auto tt = branch_jets(mm);
            Eigen::VectorXcd out(g);
            for (int a = 0; a < g; ++a) out(a) = tau_gradient(mm, tt, a).value;
            return out;
        }));
    for (int a = 0; a < g; ++a)
        for (int b = a + 1; b < g; ++b) CHECK(rel(fd[b].value(a), fd[a].value(b)) < 1e-4);
}

TEST_CASE("period hessian: finite differences, index symmetry, b-periods of v") {
    for (const std::string label : {"ell4", "g2-23"}) {
        CAPTURE(label);
        const KernelFixture f(label);
        const int g = f.m.genus();
        std::vector<int> idx(4, 0);
        for (int c = 0; c < g; ++c) {
            const FdResult fd = f.chart.fd(c, [&](const SpectralCurve& cc) {
                const CurveModel mm = f.perturbed(cc);
                const auto tt = branch_jets(mm);
                Eigen::VectorXcd out(g * g * g);
                for (int d = 0; d < g; ++d) {
                    const PeriodVariation pv = vary_period_matrix(mm, tt, d);
                    for (int a = 0; a < g; ++a)
                        for (int b = 0; b < g; ++b) out((d * g + b) * g + a) = pv.single(a, b);
                }
                return out;
            });
            for (int d = 0; d < g; ++d)
                for (int a = 0; a < g; ++a)
                    for (int b = 0; b < g; ++b) {
                        const cplx h = period_hessian(f.t, a, b, c, d);
                        CAPTURE(fd.value((d * g + b) * g + a));
                        CAPTURE(h);
                        CHECK(rel(fd.value((d * g + b) * g + a), h) < 5e-4);
                        std::array<int, 4> p{a, b, c, d};
                        std::sort(p.begin(), p.end());
                        do {
                            CHECK(std::abs(period_hessian(f.t, p[0], p[1], p[2], p[3]) - h) <
                                  1e-8 * std::max(1.0, std::abs(h)));
                        } while (std::next_permutation(p.begin(), p.end()));
                    }
        }
        const auto& hb = f.m.periods().basis;
        for (int a = 0; a < g; ++a) {
            const FdResult fd = f.chart.fd(a, [&](const SpectralCurve& cc) {
                const auto pd = normalized_basis(cc, hb);
                return b_periods(cc, pd, v_differential(cc));
            });
            for (int c = 0; c < g; ++c) CHECK(rel(fd.value(c), f.m.periods().Omega(a, c)) < 1e-5);
        }
    }
}

TEST_CASE("hierarchy: symmetry, path identities and variation at n = 2") {
    const KernelFixture f("g2-23");
    std::vector<LocalPoint> z;
    std::vector<cplx> vz;
    for (const auto& p : f.pts) {
        z.push_back(f.m.point(p));
        vz.push_back(f.m.v()(z.back().x, z.back().w));
    }
    const cplx q3 = q_multidiff(f.m, {z[0], z[1], z[2]}, {vz[0], vz[1], vz[2]});
    std::array<int, 3> p{0, 1, 2};
    do {
        const cplx q = q_multidiff(f.m, {z[p[0]], z[p[1]], z[p[2]]}, {vz[p[0]], vz[p[1]], vz[p[2]]});
        CHECK(std::abs(q - q3) < 1e-9 * std::max(1.0, std::abs(q3)));
    } while (std::next_permutation(p.begin(), p.end()));
    const cplx b01 = f.m.bidifferential(z[0], z[1]);
    CHECK(std::abs(r_multidiff(f.m, {z[0], z[1]}, {vz[0], vz[1]}) - b01) < 1e-10 * std::max(1.0, std::abs(b01)));
    const cplx r3 = f.m.bidifferential(z[0], z[2]) * f.m.bidifferential(z[2], z[1]) / vz[2];
    CHECK(std::abs(r_multidiff(f.m, {z[0], z[2], z[1]}, {vz[0], vz[2], vz[1]}) - r3) < 1e-10 * std::max(1.0, std::abs(r3)));
    // Q_4: three distinct cycles
    const cplx q4 = q_multidiff(f.m, z, vz);
    auto B = [&](int i, int k) { return f.m.bidifferential(z[i], z[k]); };
    const cplx cyc = B(0, 1) * B(1, 2) * B(2, 3) * B(3, 0) + B(0, 1) * B(1, 3) * B(3, 2) * B(2, 0) +
                     B(0, 2) * B(2, 1) * B(1, 3) * B(3, 0);
    CHECK(std::abs(q4 - 2.0 * cyc / (vz[0] * vz[1] * vz[2] * vz[3])) < 1e-9 * std::max(1.0, std::abs(q4)));

    const int g = f.m.genus();
    for (int gam = 0; gam < g; ++gam) {
        CAPTURE(gam);
        const FdResult fd = f.chart.fd(gam, [&](const SpectralCurve& cc) {
            const CurveModel mm = f.perturbed(cc);
            const LocalPoint X = mm.point(f.pts[0]), Y = mm.point(f.pts[1]);
            const cplx vx = mm.v()(X.x, X.w), vy = mm.v()(Y.x, Y.w);
            Eigen::VectorXcd out(1);
            out(0) = q_multidiff(mm, {X, Y}, {vx, vy});
            return out;
        });
        const cplx hv = hierarchy_variation(f.m, f.t, gam, {z[0], z[1]}, {vz[0], vz[1]});
        CHECK(rel(fd.value(0), hv) < 1e-4);
        CHECK(std::abs(hierarchy_variation(f.m, f.t, gam, {z[1], z[0]}, {vz[1], vz[0]}) - hv) <
              1e-8 * std::max(1.0, std::abs(hv)));
        const cplx rv = hierarchy_variation(f.m, f.t, gam, {z[0], z[1]}, {vz[0], vz[1]}, true);
        CHECK(std::abs(rv - vary_bidifferential(f.m, f.t, gam, z[0], z[1])) < 1e-10 * std::max(1.0, std::abs(rv)));
    }
}
