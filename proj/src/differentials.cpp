#include "speclab/differentials.hpp"

#include <cmath>
#include <limits>

#include "speclab/numerics/linalg.hpp"

namespace speclab {

namespace {

constexpr int kSeriesPad = 6;

ComplexPoly linear_power(cplx r, int m) {
    ComplexPoly p({cplx(1.0)});
    for (int i = 0; i < m; ++i) p = p * ComplexPoly({-r, cplx(1.0)});
    return p;
}

int multiplicity(const std::vector<std::pair<cplx, int>>& den, cplx r) {
    for (const auto& [root, m] : den)
        if (root == r) return m;
    return 0;
}

double distance_to_other_singular(const SpectralCurve& c, cplx x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : c.singular)
        if (s.x != x) d = std::min(d, std::abs(s.x - x));
    return d;
}

Laurent rational_in_chart(const Rational& r, const Chart& ch, const Series& xs) {
    const int n = xs.order();
    Series num = Series::compose(r.num, xs);
    if (ch.kind == Chart::Kind::Branch) {
        // numerators vanishing at a branch point (e.g. D) do so only to rounding in e
        double scale = 0.0;
        for (int k = 0; k < r.num.size(); ++k) scale += std::abs(r.num[static_cast<std::size_t>(k)]) * std::pow(std::abs(ch.center), k);
        if (std::abs(num[0]) <= 1e-11 * scale) num[0] = 0.0;
    }
    Series den = Series::constant(1.0, n);
    int val = 0;
    for (const auto& [root, m] : r.den) {
        if (root == ch.center) {
            val -= (ch.kind == Chart::Kind::Branch ? 2 : 1) * m;
            continue;
        }
        const Series f = xs - Series::constant(root, n);
        for (int i = 0; i < m; ++i) den = den * f;
    }
    return {val, num / den};
}

bool even_pole_near_branch(const SpectralCurve& c, const Differential& d) {
    for (const auto& [root, m] : d.even.den)
        for (const auto& s : c.singular)
            if (s.kind == SingularPoint::Kind::Branch && std::abs(root - s.x) <= s.safety * 1.0001) return true;
    return false;
}

}  // namespace

// ---------------------------------------------------------------- rationals

cplx Rational::operator()(cplx x) const {
    cplx v = num(x);
    for (const auto& [root, m] : den) v /= std::pow(x - root, m);
    return v;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Rational r;
    r.den = a.den;
    for (const auto& [root, m] : b.den) {
        bool found = false;
        for (auto& [r0, m0] : r.den)
            if (r0 == root) {
                m0 = std::max(m0, m);
                found = true;
            }
        if (!found) r.den.emplace_back(root, m);
    }
    ComplexPoly na = a.num, nb = b.num;
    for (const auto& [root, m] : r.den) {
        na = na * linear_power(root, m - multiplicity(a.den, root));
        nb = nb * linear_power(root, m - multiplicity(b.den, root));
    }
    r.num = na + nb;
    return r;
}

Rational operator*(cplx s, Rational a) {
    a.num = a.num * s;
    return a;
}

// ---------------------------------------------------------------- charts

cplx Chart::x(cplx t) const { return kind == Kind::Branch ? center + t * t : center + t; }
cplx Chart::dxdt(cplx t) const { return kind == Kind::Branch ? 2.0 * t : cplx(1.0); }

cplx Chart::w(cplx t) const {
    if (kind == Kind::Branch) {
        cplx w = t * g0;
        for (int j = 0; j < static_cast<int>(e.size()); ++j)
            if (j != branch) w *= std::sqrt(1.0 + t * t / (center - e[static_cast<std::size_t>(j)]));
        return w;
    }
    cplx w = w_center;
    for (const auto& ej : e) w *= std::sqrt(1.0 + t / (center - ej));
    return w;
}

Series Chart::x_series(int order) const {
    Series s = Series::constant(center, order);
    if (kind == Kind::Branch) {
        if (order >= 2) s[2] = 1.0;
    } else if (order >= 1) {
        s[1] = 1.0;
    }
    return s;
}

Laurent Chart::w_series(int order) const {
    if (kind == Kind::Branch) {
        Series s = Series::constant(g0, order);
        for (int j = 0; j < static_cast<int>(e.size()); ++j) {
            if (j == branch) continue;
            Series f = Series::constant(1.0, order);
            if (order >= 2) f[2] = 1.0 / (center - e[static_cast<std::size_t>(j)]);
            s = s * f.sqrt1();
        }
        return {1, s};
    }
    Series s = Series::constant(w_center, order);
    for (const auto& ej : e) s = s * Series::linear(1.0, 1.0 / (center - ej), order).sqrt1();
    return {0, s};
}

Laurent Chart::dxdt_series(int order) const {
    if (kind == Kind::Branch) return {1, Series::constant(2.0, order)};
    return {0, Series::constant(1.0, order)};
}

Chart regular_chart(const SpectralCurve& c, cplx x, cplx w) {
    Chart ch;
    ch.kind = Chart::Kind::Regular;
    ch.center = x;
    ch.w_center = w;
    ch.e = c.branch;
    ch.radius = 0.2 * distance_to_other_singular(c, x);
    if (w == cplx(0.0)) throw DomainError("regular_chart: centre is a branch point");
    return ch;
}

Chart branch_chart(const SpectralCurve& c, int k) {
    Chart ch;
    ch.kind = Chart::Kind::Branch;
    ch.branch = k;
    ch.center = c.branch[static_cast<std::size_t>(k)];
    ch.g0 = c.branch_chart_G0(k);
    ch.e = c.branch;
    ch.radius = std::sqrt(0.2 * distance_to_other_singular(c, ch.center));
    return ch;
}

Chart chart_at(const SpectralCurve& c, const SurfacePoint& p) {
    for (int k = 0; k < c.num_branch(); ++k)
        if (c.branch[static_cast<std::size_t>(k)] == p.x) return branch_chart(c, k);
    return regular_chart(c, p.x, c.w_at(p));
}

// ---------------------------------------------------------------- differentials

cplx Differential::operator()(cplx x, cplx w) const {
    cplx v = 0.0;
    if (!even.is_zero()) v += even(x);
    if (!odd.is_zero()) v += odd(x) / w;
    return v;
}

Laurent Differential::in_chart(const Chart& ch, int order) const {
    const int n = order + kSeriesPad;
    const Series xs = ch.x_series(n);
    const Laurent jac = ch.dxdt_series(n);
    Laurent out{0, Series(n)};
    bool have = false;
    if (!even.is_zero()) {
        out = rational_in_chart(even, ch, xs) * jac;
        have = true;
    }
    if (!odd.is_zero()) {
        const Laurent o = rational_in_chart(odd, ch, xs) * jac / ch.w_series(n);
        out = have ? out + o : o;
    }
    int lead = 0;
    while (lead < kSeriesPad && out.s[lead] == cplx(0.0)) ++lead;
    Series s(order);
    for (int k = 0; k <= order; ++k) s[k] = out.s[k + lead];
    return {out.val + lead, s};
}

Differential operator+(const Differential& a, const Differential& b) {
    Differential d;
    d.name = a.name + "+" + b.name;
    d.even = a.even + b.even;
    d.odd = a.odd + b.odd;
    return d;
}

Differential operator*(cplx s, const Differential& a) {
    Differential d = a;
    d.even = s * a.even;
    d.odd = s * a.odd;
    for (auto& sing : d.ledger)
        for (auto& x : sing.coeff) x *= s;
    if (d.a_periods.size()) d.a_periods *= s;
    return d;
}

Differential operator-(const Differential& a, const Differential& b) { return a + cplx(-1.0) * b; }

Differential v_differential(const SpectralCurve& c) {
    Differential v;
    v.name = "v";
    std::vector<std::pair<cplx, int>> den;
    for (const auto& p : c.spec.poles) den.emplace_back(p.x, p.k);
    v.even = {c.spec.numer[0] * cplx(-0.5), den};
    v.odd = {c.D * cplx(0.5), den};
    for (int j = 0; j < static_cast<int>(c.spec.poles.size()); ++j) {
        const auto& pole = c.spec.poles[static_cast<std::size_t>(j)];
        for (int s = 0; s < 2; ++s) {
            const SurfacePoint pt{pole.x, s};
            const Laurent l = v.in_chart(regular_chart(c, pole.x, c.w_at(pt)), pole.k + 2);
            Singularity sing{pt, {}};
            for (int ell = 1; ell <= pole.k; ++ell) sing.coeff.push_back(l.coeff(-ell));
            v.ledger.push_back(sing);
        }
    }
    return v;
}

// ---------------------------------------------------------------- periods

Differential PeriodData::v_alpha(int alpha) const {
    Differential d;
    d.name = "v_" + std::to_string(alpha + 1);
    std::vector<cplx> co(static_cast<std::size_t>(G.cols()));
    for (int k = 0; k < G.cols(); ++k) co[static_cast<std::size_t>(k)] = G(alpha, k);
    d.odd = {ComplexPoly(co), {}};
    d.a_periods = Eigen::VectorXcd::Zero(G.rows());
    d.a_periods(alpha) = 1.0;
    return d;
}

Eigen::VectorXcd PeriodData::g(cplx x, cplx w) const {
    const int n = static_cast<int>(G.cols());
    Eigen::VectorXcd xp(n);
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) {
        xp(k) = p;
        p *= x;
    }
    return G * xp / w;
}

PeriodData normalized_basis(const SpectralCurve& c, const QuadOptions& opt) {
    return normalized_basis(c, homology_basis(c), opt);
}

PeriodData normalized_basis(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt) {
    const int g = c.genus();
    if (g < 1) throw DomainError("normalized_basis: genus must be positive");
    PeriodData pd;
    pd.basis = hb;
    auto raw = [g](cplx x, cplx w) {
        Eigen::VectorXcd r(g + 1);
        cplx p = 1.0;
        for (int k = 0; k < g; ++k) {
            r(k) = p / w;
            p *= x;
        }
        return r;
    };
    // last column carries the odd part of v
    const Differential v = v_differential(c);
    auto f = [&](cplx x, cplx w) {
        Eigen::VectorXcd r = raw(x, w);
        r(g) = v.odd(x) / w;
        return r;
    };
    const Eigen::MatrixXcd L = lasso_odd_integrals(c, f, opt);
    pd.A_raw.resize(g, g);
    pd.B_raw.resize(g, g);
    pd.A.resize(g);
    pd.B.resize(g);
    for (int a = 0; a < g; ++a) {
        const Eigen::RowVectorXcd ra = cycle_integral(hb.a[static_cast<std::size_t>(a)], L);
        const Eigen::RowVectorXcd rb = cycle_integral(hb.b[static_cast<std::size_t>(a)], L);
        pd.A_raw.row(a) = ra.head(g);
        pd.B_raw.row(a) = rb.head(g);
        pd.A(a) = ra(g);
        pd.B(a) = rb(g);
    }
    const Eigen::MatrixXcd At = pd.A_raw.transpose();
    pd.G.resize(g, g);
    for (int a = 0; a < g; ++a) {
        const DenseSolve s = solve_dense(At, Eigen::VectorXcd::Unit(g, a));
        pd.G.col(a) = s.solution;
        pd.gram_condition = s.condition;
    }
    pd.Omega = pd.B_raw * pd.G.transpose();

    Eigen::MatrixXd Y = pd.Omega.imag();
    Y = 0.5 * (Y + Y.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    const auto ev = es.eigenvalues();
    if (ev.maxCoeff() < 0.0) {
        pd.basis.b_sign = -1;
        pd.Omega = -pd.Omega;
        pd.B_raw = -pd.B_raw;
        pd.B = -pd.B;
    } else if (ev.minCoeff() <= 0.0) {
        throw NumericalError("normalized_basis: Im Omega is indefinite; cycle pairing inconsistent");
    }
    return pd;
}

namespace {

Eigen::VectorXcd cycle_periods(const SpectralCurve& c, const PeriodData& pd, const Differential& d, bool b_cycles,
                               const QuadOptions& opt) {
    const int g = pd.genus();
    const auto& cycles = b_cycles ? pd.basis.b : pd.basis.a;
    Eigen::VectorXcd out(g);
    if (d.even.is_zero() || !even_pole_near_branch(c, d)) {
        auto f = [&](cplx x, cplx w) { return d.odd_value(x, w); };
        const Eigen::MatrixXcd L = lasso_odd_integrals(c, f, opt);
        for (int a = 0; a < g; ++a) out(a) = cycle_integral(cycles[static_cast<std::size_t>(a)], L)(0);
    } else {
        auto f = [&](cplx x, cplx w) { return d(x, w); };
        const LassoTable L = lasso_integrals(c, f, opt);
        for (int a = 0; a < g; ++a) out(a) = cycle_integral(cycles[static_cast<std::size_t>(a)], L)(0);
    }
    if (b_cycles) out *= static_cast<double>(pd.basis.b_sign);
    return out;
}

}  // namespace

Eigen::VectorXcd a_periods(const SpectralCurve& c, const PeriodData& pd, const Differential& d, const QuadOptions& opt) {
    return cycle_periods(c, pd, d, false, opt);
}

Eigen::VectorXcd b_periods(const SpectralCurve& c, const PeriodData& pd, const Differential& d, const QuadOptions& opt) {
    return cycle_periods(c, pd, d, true, opt);
}

Differential normalize_a_periods(const SpectralCurve& c, const PeriodData& pd, Differential d, const QuadOptions& opt) {
    const Eigen::VectorXcd a = a_periods(c, pd, d, opt);
    const auto ledger = d.ledger;
    const std::string name = d.name;
    for (int al = 0; al < pd.genus(); ++al) d = d - a(al) * pd.v_alpha(al);
    d.ledger = ledger;
    d.name = name;
    d.a_periods = Eigen::VectorXcd::Zero(pd.genus());
    return d;
}

// ---------------------------------------------------------------- second and third kind

namespace {

/// (w + T) / (2 w chi^l): singular part 1/chi^l at the point where w's Taylor polynomial is T.
Differential eta(const SpectralCurve& c, const SurfacePoint& p, int ell) {
    Differential d;
    const cplx y = p.x;
    d.even = {ComplexPoly({cplx(0.5)}), {{y, ell}}};
    bool at_branch = false;
    for (const auto& e : c.branch)
        if (e == y) at_branch = true;
    if (at_branch) {
        // dx / (2 (x - e)) = dt / t
        if (ell != 1) throw DomainError("eta: only simple poles at branch points");
        return d;
    }
    const Chart ch = regular_chart(c, y, c.w_at(p));
    const Laurent w = ch.w_series(ell);
    ComplexPoly T({cplx(0.0)});
    ComplexPoly pw({cplx(1.0)});
    for (int k = 0; k < ell; ++k) {
        T = T + pw * w.coeff(k);
        pw = pw * ComplexPoly({-y, cplx(1.0)});
    }
    d.odd = {T * cplx(0.5), {{y, ell}}};
    return d;
}

}  // namespace

Differential second_kind(const SpectralCurve& c, const PeriodData& pd, int j, int s, int ell, const QuadOptions& opt) {
    const int m = static_cast<int>(c.spec.poles.size());
    if (j < 0 || j >= m || s < 0 || s > 1) throw DomainError("second_kind: pole index out of range");
    if (ell < 2 || ell > c.spec.poles[static_cast<std::size_t>(j)].k) throw DomainError("second_kind: order out of range");
    const SurfacePoint p{c.spec.poles[static_cast<std::size_t>(j)].x, s};
    Differential d = eta(c, p, ell);
    std::vector<cplx> coeff(static_cast<std::size_t>(ell), 0.0);
    coeff.back() = 1.0;
    d.ledger = {{p, coeff}};
    d.name = "w_" + std::to_string(j + 1) + "^(" + std::to_string(s + 1) + ")," + std::to_string(ell);
    return normalize_a_periods(c, pd, d, opt);
}

Differential third_kind(const SpectralCurve& c, const PeriodData& pd, int j, int s, const QuadOptions& opt) {
    const int m = static_cast<int>(c.spec.poles.size());
    if (j < 0 || j >= m || s < 0 || s > 1) throw DomainError("third_kind: pole index out of range");
    if (j == 0 && s == 0) throw DomainError("third_kind: base point equals y_1^(1)");
    const SurfacePoint p{c.spec.poles[static_cast<std::size_t>(j)].x, s};
    const SurfacePoint q{c.spec.poles[0].x, 0};
    Differential d = eta(c, p, 1) - eta(c, q, 1);
    d.ledger = {{q, {cplx(-1.0)}}, {p, {cplx(1.0)}}};
    d.name = "u_" + std::to_string(j + 1) + "^(" + std::to_string(s + 1) + ")";
    return normalize_a_periods(c, pd, d, opt);
}

Differential third_kind_points(const SpectralCurve& c, const PeriodData& pd, const SurfacePoint& P, const SurfacePoint& Q,
                               const QuadOptions& opt) {
    if (P.x == Q.x) throw DomainError("third_kind_points: coincident base coordinates");
    Differential d = eta(c, P, 1) - eta(c, Q, 1);
    d.ledger = {{Q, {cplx(-1.0)}}, {P, {cplx(1.0)}}};
    d.name = "omega";
    return normalize_a_periods(c, pd, d, opt);
}

}  // namespace speclab
