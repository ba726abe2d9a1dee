#include "speclab/variations.hpp"

#include <algorithm>
#include <numbers>

namespace speclab {

namespace {

const cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);
const cplx kPiI(0.0, std::numbers::pi);

Series laurent_to_series(const Laurent& l, const char* what) {
    if (l.val < 0) throw NumericalError(std::string(what) + ": unexpected pole at a branch point");
    return l.s.shifted_up(l.val);
}

/// residue of k(t) dt on the circle |t| = r
template <typename K>
cplx circle_residue(const K& k, double r, int samples) {
    return circle_jet(k, r, samples).residue();
}

int find_alpha_direction(const BranchJetTable& t, int gamma) {
    for (int i = 0; i < static_cast<int>(t.dirs.size()); ++i)
        if (t.dirs[static_cast<std::size_t>(i)].kind == CoordinateDirection::Kind::A &&
            t.dirs[static_cast<std::size_t>(i)].alpha == gamma)
            return i;
    throw DomainError("direction A_" + std::to_string(gamma + 1) + " not in the jet table");
}

}  // namespace

BranchJetTable branch_jets(const CurveModel& m, std::vector<CoordinateDirection> dirs, int order) {
    const SpectralCurve& c = m.curve();
    BranchJetTable t;
    t.dirs = dirs.empty() ? coordinate_list(c) : std::move(dirs);
    for (const auto& d : t.dirs) t.h.push_back(direction_differential(c, m.periods(), d, m.quad()));
    const int g = m.genus();
    for (int k = 0; k < c.num_branch(); ++k) {
        BranchJet j;
        j.branch = k;
        j.point = {c.branch[static_cast<std::size_t>(k)], 0};
        const Chart ch = branch_chart(c, k);
        j.chart = m.expand(ch, m.abel(j.point), order);
        const Laurent V = m.v().in_chart(ch, order);
        if (V.val != 1) throw NumericalError("branch_jets: v does not have a simple zero at a branch point");
        j.y = V.s * cplx(0.5);  // v/dx = (v/dt) / (2t)
        j.y0 = j.y[0];
        j.y1 = j.y[1];
        j.y3 = 6.0 * j.y[3];
        if (std::abs(j.y0) < 1e-12) throw NumericalError("branch_jets: v/dx vanishes at a branch point");
        j.g.resize(g);
        j.g2.resize(g);
        for (int a = 0; a < g; ++a) {
            j.g(a) = j.chart.g[static_cast<std::size_t>(a)][0];
            j.g2(a) = 2.0 * j.chart.g[static_cast<std::size_t>(a)][2];
        }
        for (const auto& h : t.h) j.h.push_back(laurent_to_series(h.in_chart(ch, order), "branch_jets"));
        // the theta-characteristic differential in the denominator can vanish at a branch point
        // (genus 2: odd characteristics sit at Weierstrass points); S_B itself is holomorphic there
        j.S_B = circle_jet([&](cplx s) { return m.bergman_projective(j.chart.at(s)); }, 0.5 * ch.radius, 32).coeff(0);
        t.jets.push_back(std::move(j));
    }
    const int p = static_cast<int>(t.jets.size());
    t.B = Eigen::MatrixXcd::Zero(p, p);
    // theta[delta](A_Q - A_P) vanishes identically in P when h_delta(Q) = 0, which happens at a
    // branch point; B is holomorphic in both slots there, so take the double circle mean
    const int ns = 32;
    std::vector<std::vector<LocalPoint>> ring(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
        for (int k = 0; k < ns; ++k)
            ring[static_cast<std::size_t>(i)].push_back(
                j.chart.at(std::polar(0.5 * j.chart.chart.radius, 2.0 * std::numbers::pi * (k + 0.5) / ns)));
    }
    for (int i = 0; i < p; ++i)
        for (int k = i + 1; k < p; ++k) {
            cplx sum = 0.0;
            for (const auto& P : ring[static_cast<std::size_t>(i)])
                for (const auto& Q : ring[static_cast<std::size_t>(k)]) sum += m.bidifferential(P, Q);
            t.B(i, k) = t.B(k, i) = sum / static_cast<double>(ns * ns);
        }
    return t;
}

cplx endpoint_correction(const BranchJetTable& t, int dir, int i) {
    const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
    return -j.h[static_cast<std::size_t>(dir)][0] * j.y0 / j.y1;
}

cplx endpoint_correction(const BranchJetTable& t, int dir, int i, const ComplexPoly& f) {
    const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
    const int n = 8;
    if (std::abs(f[0]) != 0.0 || f[1] == cplx(0.0)) throw DomainError("endpoint_correction: reparametrization must fix 0");
    // chi = t^2; xi~ = f(chi) = t^2 sigma(t)^2, t~ = t sigma(t)
    Series chi(n);
    chi[2] = 1.0;
    Series quot(n);  // f(chi) / chi
    for (int k = 1; k < f.size(); ++k)
        if (2 * (k - 1) <= n) quot[2 * (k - 1)] = f[static_cast<std::size_t>(k)];
    const Series sigma = quot.sqrt(std::sqrt(f[1]));
    const Series dtt = (Series::linear(0.0, 1.0, n) * sigma).derivative();  // dt~/dt
    const Series fprime = Series::compose(f.derivative(), chi);
    Series y(n);
    for (int k = 0; k <= n; ++k) y[k] = j.y[k];
    const Series ytil = y / fprime;  // v / dxi~
    Series h(n);
    for (int k = 0; k <= n; ++k) h[k] = j.h[static_cast<std::size_t>(dir)][k];
    const cplx h_new = h[0] / dtt[0];
    const cplx dlog_new = (ytil.derivative()[0] / ytil[0]) / dtt[0];
    return -h_new / dlog_new;
}

cplx jet_residue(const BranchJet& j, const std::function<cplx(const LocalPoint&, cplx)>& k, int samples) {
    return circle_residue([&](cplx t) { return k(j.chart.at(t), t); }, j.chart.chart.radius, samples);
}

PeriodVariation vary_period_matrix(const CurveModel& m, const BranchJetTable& t, int dir) {
    const int g = m.genus();
    PeriodVariation pv;
    pv.pairing = Eigen::MatrixXcd::Zero(g, g);
    pv.single = Eigen::MatrixXcd::Zero(g, g);
    for (int i = 0; i < static_cast<int>(t.jets.size()); ++i) {
        const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
        const cplx corr = endpoint_correction(t, dir, i);
        const Series& hs = j.h[static_cast<std::size_t>(dir)];
        const Series y1s = j.y.derivative();
        for (int a = 0; a < g; ++a)
            for (int b = a; b < g; ++b) {
                const Series& ga = j.chart.g[static_cast<std::size_t>(a)];
                const Series& gb = j.chart.g[static_cast<std::size_t>(b)];
                // res of v_a v_b / v, v/dt = 2 t y(t); y' may vanish inside any fixed circle, so both
                // residues come from the series at t = 0
                const cplx r1 = 0.5 * (ga * gb / j.y)[0];
                // res of v_a v_b h / (dxi dy), dxi = 2t dt, dy = y'(t) dt
                const cplx r2 = 0.5 * (ga * gb * hs / y1s)[0];
                pv.pairing(a, b) += kTwoPiI * corr * r1;
                pv.single(a, b) += -kTwoPiI * r2;
            }
    }
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < a; ++b) {
            pv.pairing(a, b) = pv.pairing(b, a);
            pv.single(a, b) = pv.single(b, a);
        }
    const double scale = std::max(1.0, pv.single.cwiseAbs().maxCoeff());
    if ((pv.pairing - pv.single).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericalError("vary_period_matrix: pairing and single-residue forms disagree by " +
                             std::to_string((pv.pairing - pv.single).cwiseAbs().maxCoeff() / scale));
    return pv;
}

namespace {

/// sum_i corr_i res_{x_i} K, K given on chart points with v/dt supplied.
template <typename K>
cplx branch_residue_sum(const BranchJetTable& t, int dir, const K& kernel, int samples = 64) {
    cplx total = 0.0;
    for (int i = 0; i < static_cast<int>(t.jets.size()); ++i) {
        const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
        const cplx res = circle_residue(
            [&](cplx s) {
                const LocalPoint T = j.chart.at(s);
                return kernel(T, 2.0 * s * j.y.eval(s));
            },
            j.chart.chart.radius, samples);
        total += endpoint_correction(t, dir, i) * res;
    }
    return total;
}

}  // namespace

cplx vary_v_alpha(const CurveModel& m, const BranchJetTable& t, int dir, int alpha, const LocalPoint& X) {
    return branch_residue_sum(t, dir, [&](const LocalPoint& T, cplx vt) { return T.g(alpha) * m.bidifferential(T, X) / vt; });
}

cplx vary_bidifferential(const CurveModel& m, const BranchJetTable& t, int dir, const LocalPoint& X, const LocalPoint& Y) {
    return branch_residue_sum(
        t, dir, [&](const LocalPoint& T, cplx vt) { return m.bidifferential(X, T) * m.bidifferential(T, Y) / vt; });
}

cplx vary_log_prime_form(const CurveModel& m, const BranchJetTable& t, int dir, const LocalPoint& X, const LocalPoint& Y) {
    // sign fixed by d_x d_y ln E = B against the bidifferential variation
    return -0.5 * branch_residue_sum(t, dir, [&](const LocalPoint& T, cplx vt) {
               const cplx d = m.dlog_prime_ratio(X, Y, T);
               return d * d / vt;
           });
}

// ---------------------------------------------------------------- tau

TauGradient tau_gradient(const CurveModel& m, const BranchJetTable& t, int gamma) {
    const SpectralCurve& c = m.curve();
    const int dir = find_alpha_direction(t, gamma);
    const int n = 64, order = 40;
    TauGradient out{0.0, 0.0, 0.0};
    for (int i = 0; i < static_cast<int>(t.jets.size()); ++i) {
        const BranchJet& j = t.jets[static_cast<std::size_t>(i)];
        const Series V = j.y.shifted_up(1) * cplx(2.0);
        const cplx res = circle_residue(
            [&](cplx s) {
                const cplx breg = (m.bergman_projective(j.chart.at(s)) - schwarzian_series(V, s)) / 6.0;
                return breg / V.eval(s);
            },
            j.chart.chart.radius, n);
        out.branch_sum += kTwoPiI * endpoint_correction(t, dir, i) * res;
    }
    for (const auto& z : c.zeros) {
        const Chart ch = chart_at(c, z);
        const Laurent vl = m.v().in_chart(ch, order);
        const Series V = vl.s.shifted_up(std::max(vl.val, 0));
        const Series F = V.integral();
        const Series gs = laurent_to_series(m.periods().v_alpha(gamma).in_chart(ch, order), "tau_gradient");
        const cplx res = circle_residue([&](cplx s) { return gs.eval(s) / F.eval(s); }, ch.radius, n);
        out.zero_sum += -kPiI / 8.0 * res;
    }
    out.value = out.branch_sum + out.zero_sum;
    return out;
}

TauGradient tau_chain_rule(const CurveModel& m, const BranchJetTable& t, int gamma) {
    const SpectralCurve& c = m.curve();
    const PeriodData& pd = m.periods();
    const int g = m.genus();
    const int dir = find_alpha_direction(t, gamma);
    const AlgebraicBergman alg(c, pd, m.quad());
    const Differential& v = m.v();

    // B_reg / v relative to dx, from the algebraic S_B
    auto f = [&](cplx x, cplx w) { return (alg.projective(x) - schwarzian_v(c, x, w)) / (6.0 * v(x, w)); };
    const LassoTable L = lasso_integrals(c, f, m.quad());
    Eigen::VectorXcd fa(g), fb(g);
    for (int a = 0; a < g; ++a) {
        fa(a) = cycle_integral(pd.basis.a[static_cast<std::size_t>(a)], L)(0);
        fb(a) = static_cast<double>(pd.basis.b_sign) * cycle_integral(pd.basis.b[static_cast<std::size_t>(a)], L)(0);
    }
    TauGradient out{0.0, 0.0, 0.0};
    out.zero_sum = -fb(gamma);
    for (int d = 0; d < g; ++d) out.zero_sum += pd.Omega(d, gamma) * fa(d);

    // residues of B_reg / v at the zeros in their charts (algebraic projective connections)
    auto residue_at = [&](const SurfacePoint& z) {
        const Chart ch = chart_at(c, z);
        const bool br = ch.kind == Chart::Kind::Branch;
        return circle_residue(
            [&](cplx s) {
                const cplx x = ch.x(s), w = ch.w(s), dx = ch.dxdt(s);
                const cplx shift = br ? -1.5 / (s * s) : cplx(0.0);  // {x, t} for x = e + t^2
                const cplx sb = alg.projective(x) * dx * dx + shift;
                const cplx sv = schwarzian_v(c, x, w) * dx * dx + shift;
                return (sb - sv) / 6.0 / (v(x, w) * dx);
            },
            ch.radius, 64);
    };
    for (int i = 0; i < static_cast<int>(c.zeros.size()); ++i) {
        if (i == c.r_index) continue;
        const SurfacePoint& z = c.zeros[static_cast<std::size_t>(i)];
        out.zero_sum += kTwoPiI * m.abel_polygon(z)(gamma) * residue_at(z);
    }
    for (int i = 0; i < static_cast<int>(t.jets.size()); ++i)
        out.branch_sum += kTwoPiI * endpoint_correction(t, dir, i) * residue_at(t.jets[static_cast<std::size_t>(i)].point);
    out.value = out.branch_sum + out.zero_sum;
    return out;
}

// ---------------------------------------------------------------- hierarchy

cplx q_multidiff(const CurveModel& m, const std::vector<LocalPoint>& z, const std::vector<cplx>& vz) {
    const int n = static_cast<int>(z.size());
    if (n < 2) throw DomainError("q_multidiff: need at least two points");
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (z[static_cast<std::size_t>(i)].x == z[static_cast<std::size_t>(k)].x &&
                z[static_cast<std::size_t>(i)].w == z[static_cast<std::size_t>(k)].w)
                throw DomainError("q_multidiff: coincident points");
    cplx denom = 1.0;
    for (const auto& x : vz) denom *= x;
    if (n == 2) {
        const cplx b = m.bidifferential(z[0], z[1]);
        return b * b / denom;
    }
    Eigen::MatrixXcd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) B(i, k) = B(k, i) = m.bidifferential(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(k)]);
    std::vector<int> perm(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
    cplx sum = 0.0;
    do {
        if (perm.front() > perm.back()) continue;  // each cycle once, up to reflection
        cplx p = B(0, perm.front());
        for (int i = 0; i + 1 < n - 1; ++i) p *= B(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
        p *= B(perm.back(), 0);
        sum += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 2.0 * sum / denom;
}

cplx r_multidiff(const CurveModel& m, const std::vector<LocalPoint>& z, const std::vector<cplx>& vz) {
    const int n = static_cast<int>(z.size());
    if (n < 2) throw DomainError("r_multidiff: need at least two points");
    if (n == 2) return m.bidifferential(z[0], z[1]);
    Eigen::MatrixXcd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) B(i, k) = B(k, i) = m.bidifferential(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(k)]);
    cplx denom = 1.0;
    for (int i = 1; i + 1 < n; ++i) denom *= vz[static_cast<std::size_t>(i)];
    std::vector<int> mid;
    for (int i = 1; i + 1 < n; ++i) mid.push_back(i);
    cplx sum = 0.0;
    do {
        cplx p = B(0, mid.front());
        for (std::size_t i = 0; i + 1 < mid.size(); ++i) p *= B(mid[i], mid[i + 1]);
        p *= B(mid.back(), n - 1);
        sum += p;
    } while (std::next_permutation(mid.begin(), mid.end()));
    return sum / denom;
}

cplx hierarchy_variation(const CurveModel& m, const BranchJetTable& t, int gamma, const std::vector<LocalPoint>& z,
                         const std::vector<cplx>& vz, bool r_variant) {
    const int dir = find_alpha_direction(t, gamma);
    const int n = static_cast<int>(z.size());
    // Q_{n+1} and R_{n+1} already carry 1/v(t) at the inserted slot
    const cplx res = branch_residue_sum(t, dir, [&](const LocalPoint& T, cplx vt) {
        std::vector<LocalPoint> zz = z;
        std::vector<cplx> vv = vz;
        if (r_variant) {
            zz.insert(zz.end() - 1, T);
            vv.insert(vv.end() - 1, vt);
            return r_multidiff(m, zz, vv);
        }
        zz.push_back(T);
        vv.push_back(vt);
        return q_multidiff(m, zz, vv);
    });
    // the v(z_j) in the denominators move too: dv/dA_gamma = v_gamma
    cplx dlogv = 0.0;
    for (int k = r_variant ? 1 : 0; k < (r_variant ? n - 1 : n); ++k)
        dlogv += z[static_cast<std::size_t>(k)].g(gamma) / vz[static_cast<std::size_t>(k)];
    const cplx base = r_variant ? r_multidiff(m, z, vz) : q_multidiff(m, z, vz);
    return res - base * dlogv;
}

cplx hierarchy_variation_literal(const CurveModel& m, const BranchJetTable& t, int gamma,
                                 const std::vector<LocalPoint>& z, const std::vector<cplx>& vz) {
    const int dir = find_alpha_direction(t, gamma);
    return branch_residue_sum(t, dir, [&](const LocalPoint& T, cplx vt) {
        std::vector<LocalPoint> zz = z;
        std::vector<cplx> vv = vz;
        zz.push_back(T);
        vv.push_back(vt);
        return q_multidiff(m, zz, vv) / vt;
    });
}

// ---------------------------------------------------------------- second derivatives

cplx period_hessian(const BranchJetTable& t, int a, int b, int c, int d) {
    const int p = static_cast<int>(t.jets.size());
    cplx off = 0.0, diag = 0.0;
    for (int i = 0; i < p; ++i) {
        const BranchJet& ji = t.jets[static_cast<std::size_t>(i)];
        for (int k = 0; k < p; ++k) {
            if (k == i) continue;
            const BranchJet& jk = t.jets[static_cast<std::size_t>(k)];
            const auto& gi = ji.g;
            const auto& gk = jk.g;
            const cplx sym = gi(d) * (gi(c) * gk(a) * gk(b) + gi(a) * gk(b) * gk(c) + gi(b) * gk(c) * gk(a));
            off += t.B(i, k) * sym / (ji.y1 * jk.y1);
        }
        const auto& g = ji.g;
        const auto& g2 = ji.g2;
        const cplx y1 = ji.y1;
        const cplx prod = g(a) * g(b) * g(c) * g(d);
        const cplx second = g2(a) * g(b) * g(c) * g(d) + g(a) * g2(b) * g(c) * g(d) + g(a) * g(b) * g2(c) * g(d) +
                            g(a) * g(b) * g(c) * g2(d);
        diag += (ji.S_B / (y1 * y1) - ji.y3 / (y1 * y1 * y1)) * prod + second / (y1 * y1);
    }
    return kTwoPiI * (0.25 * off + 0.125 * diag);
}

}  // namespace speclab
