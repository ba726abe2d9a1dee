#include "speclab/kernels.hpp"

#include <numbers>

#include "speclab/numerics/linalg.hpp"

namespace speclab {

namespace {
const cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);
cplx lin(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a.array() * b.array()).sum(); }
}

LocalPoint ChartExpansion::at(cplx t) const {
    const int g = static_cast<int>(this->g.size());
    LocalPoint p;
    p.x = chart.x(t);
    p.w = chart.w(t);
    p.A = A0;
    p.g.resize(g);
    p.g1.resize(g);
    p.g2.resize(g);
    for (int a = 0; a < g; ++a) {
        const Series& s = this->g[static_cast<std::size_t>(a)];
        const Series d1 = s.derivative();
        p.g(a) = s.eval(t);
        p.g1(a) = d1.eval(t);
        p.g2(a) = d1.derivative().eval(t);
        if (t != cplx(0.0)) p.A(a) += s.integral().eval(t);
    }
    return p;
}

CurveModel::CurveModel(SpectralCurve c, const QuadOptions& opt, const HomologyBasis* basis, const Characteristic* delta)
    : curve_(std::move(c)), opt_(opt) {
    pd_ = basis ? normalized_basis(curve_, *basis, opt_) : normalized_basis(curve_, opt_);
    v_ = v_differential(curve_);
    tp_.Omega = pd_.Omega;
    tp_.delta = delta ? *delta : odd_characteristic(pd_.Omega, tp_.radius2);
    dtheta0_ = theta(Eigen::VectorXcd::Zero(genus()), tp_, 1).grad;
    abel_xr_ = Eigen::VectorXcd::Zero(genus());
    abel_xr_ = abel(curve_.x_r());
}

Eigen::VectorXcd CurveModel::abel(const SurfacePoint& p) const {
    auto f = [this](cplx x, cplx w) { return Eigen::VectorXcd(pd_.g(x, w)); };
    return Eigen::VectorXcd(route_integral(curve_, p, f, opt_)) - abel_xr_;
}

Eigen::VectorXcd CurveModel::abel_polygon(const SurfacePoint& p) const {
    const SurfacePoint& r = curve_.x_r();
    if (p.x == r.x && p.sheet == r.sheet) return Eigen::VectorXcd::Zero(genus());
    const Differential om = third_kind_points(curve_, pd_, p, r, opt_);
    return b_periods(curve_, pd_, om, opt_) / kTwoPiI;
}

ChartExpansion CurveModel::expand(const Chart& ch, const Eigen::VectorXcd& A0, int order) const {
    ChartExpansion e;
    e.chart = ch;
    e.A0 = A0;
    for (int a = 0; a < genus(); ++a) {
        const Laurent l = pd_.v_alpha(a).in_chart(ch, order);
        if (l.val < 0) throw NumericalError("expand: holomorphic differential with a pole");
        e.g.push_back(l.s.shifted_up(l.val));
    }
    return e;
}

ChartExpansion CurveModel::expand_at(const SurfacePoint& p, int order) const {
    return expand(chart_at(curve_, p), abel(p), order);
}

LocalPoint CurveModel::point(const SurfacePoint& p) const {
    return expand(regular_chart(curve_, p.x, curve_.w_at(p)), abel(p), 4).at(0.0);
}

cplx CurveModel::bidifferential(const LocalPoint& P, const LocalPoint& Q) const {
    const ThetaValue t = theta(Q.A - P.A, tp_, 2);
    return -(P.g.transpose() * t.ddlog() * Q.g)(0, 0);
}

cplx CurveModel::prime_form(const LocalPoint& P, const LocalPoint& Q) const {
    const cplx hp = std::sqrt(lin(dtheta0_, P.g));
    const cplx hq = std::sqrt(lin(dtheta0_, Q.g));
    return theta(Q.A - P.A, tp_, 0).full() / (hp * hq);
}

cplx CurveModel::dlog_prime_ratio(const LocalPoint& X, const LocalPoint& Y, const LocalPoint& T) const {
    const Eigen::VectorXcd dx = theta(T.A - X.A, tp_, 1).dlog();
    const Eigen::VectorXcd dy = theta(T.A - Y.A, tp_, 1).dlog();
    return lin(T.g, dx - dy);
}

cplx CurveModel::bergman_projective(const LocalPoint& P) const {
    const cplx H = lin(dtheta0_, P.g);
    const cplx H1 = lin(dtheta0_, P.g1);
    const cplx H2 = lin(dtheta0_, P.g2);
    const cplx T3 = theta_third(Eigen::VectorXcd::Zero(genus()), tp_, P.g);
    return H2 / H - 1.5 * (H1 / H) * (H1 / H) - 2.0 * T3 / H;
}

// ---------------------------------------------------------------- algebraic bidifferential

AlgebraicBergman::AlgebraicBergman(const SpectralCurve& c, const PeriodData& pd, const QuadOptions& opt) : D_(c.D) {
    const int g = pd.genus();
    // sample points for the y-dependence: well outside every lasso
    double rad = 0.0;
    cplx mid = 0.0;
    for (const auto& s : c.singular) mid += s.x;
    mid /= static_cast<double>(c.singular.size());
    for (const auto& s : c.singular) rad = std::max(rad, std::abs(s.x - mid) + s.safety);
    rad = std::max(rad, std::abs(c.x0 - mid));
    Eigen::MatrixXcd J(g, g), V(g, g);
    for (int m = 0; m < g; ++m) {
        const cplx y = mid + 1.7 * rad * std::polar(1.0, 0.9 + 2.1 * m);
        const cplx wy = c.w_at({y, 0});
        auto f = [&](cplx x, cplx w) { return F(x, y) / (4.0 * (x - y) * (x - y) * w); };
        const Eigen::MatrixXcd L = lasso_odd_integrals(c, f, opt);
        for (int a = 0; a < g; ++a) J(a, m) = cycle_integral(pd.basis.a[static_cast<std::size_t>(a)], L)(0);
        cplx p = 1.0;
        for (int l = 0; l < g; ++l) {
            V(l, m) = p;
            p *= y;
        }
        (void)wy;
    }
    // J(a, m) = sum_l N(a, l) y_m^l; zero a-periods need A_raw M + N = 0
    const Eigen::MatrixXcd N = J * V.inverse();
    M_ = -pd.A_raw.fullPivLu().solve(N);
}

cplx AlgebraicBergman::F(cplx x, cplx y) const {
    cplx s = 0.0, xy = 1.0;
    for (int k = 0; 2 * k <= D_.degree(); ++k) {
        s += xy * (2.0 * D_[static_cast<std::size_t>(2 * k)] + D_[static_cast<std::size_t>(2 * k + 1)] * (x + y));
        xy *= x * y;
    }
    return s;
}

cplx AlgebraicBergman::Fyy_diag(cplx x) const {
    cplx s = 0.0;
    for (int k = 0; 2 * k <= D_.degree(); ++k) {
        const cplx a = D_[static_cast<std::size_t>(2 * k)], b = D_[static_cast<std::size_t>(2 * k + 1)];
        const double kk = k;
        // d^2/dy^2 [x^k y^k (2a + b(x + y))] at y = x
        if (k >= 2) s += kk * (kk - 1) * std::pow(x, 2 * k - 2) * (2.0 * a + 2.0 * b * x);
        if (k >= 1) s += 2.0 * kk * std::pow(x, 2 * k - 1) * b;
    }
    return s;
}

cplx AlgebraicBergman::operator()(cplx x, cplx wx, cplx y, cplx wy) const {
    const int g = static_cast<int>(M_.rows());
    cplx hol = 0.0;
    cplx xp = 1.0;
    for (int k = 0; k < g; ++k) {
        cplx yp = 1.0;
        for (int l = 0; l < g; ++l) {
            hol += M_(k, l) * xp * yp;
            yp *= y;
        }
        xp *= x;
    }
    return (F(x, y) + 2.0 * wx * wy) / (4.0 * (x - y) * (x - y) * wx * wy) + hol / (wx * wy);
}

cplx AlgebraicBergman::projective(cplx x) const {
    const auto [d0, d1] = D_.eval_with_derivative(x);
    const cplx d2 = D_.derivative().derivative()(x);
    const int g = static_cast<int>(M_.rows());
    cplx hol = 0.0;
    for (int k = 0; k < g; ++k)
        for (int l = 0; l < g; ++l) hol += M_(k, l) * std::pow(x, k + l);
    return 6.0 * ((0.5 * Fyy_diag(x) - 0.5 * d2 + d1 * d1 / (4.0 * d0)) / (4.0 * d0) + hol / d0);
}

std::vector<SurfacePoint> sample_points(const SpectralCurve& c, int n) {
    cplx mid = 0.0;
    for (const auto& s : c.singular) mid += s.x;
    mid /= static_cast<double>(c.singular.size());
    double rad = 0.0, safety = 0.0;
    for (const auto& s : c.singular) {
        rad = std::max(rad, std::abs(s.x - mid));
        safety = std::max(safety, s.safety);
    }
    std::vector<SurfacePoint> out;
    // golden-angle spiral; keep points clear of every detour disk
    for (int k = 1; static_cast<int>(out.size()) < n && k < 10000; ++k) {
        const double r = rad * std::sqrt(k / 40.0);
        const cplx x = mid + std::polar(r, 2.399963229728653 * k);
        if (c.singular_distance(x) < 2.5 * safety) continue;
        out.push_back({x, static_cast<int>(out.size()) % 2});
    }
    if (static_cast<int>(out.size()) < n) throw NumericalError("sample_points: no room between singular points");
    return out;
}

// ---------------------------------------------------------------- Schwarzians

cplx schwarzian_v(const SpectralCurve& c, cplx x, cplx w) {
    const ComplexPoly& N1 = c.spec.numer[0];
    const cplx dd1 = c.D.eval_with_derivative(x).second;
    const cplx dd2 = c.D.derivative().derivative()(x);
    const cplx w1 = dd1 / (2.0 * w);
    const cplx w2 = (dd2 - 2.0 * w1 * w1) / (2.0 * w);
    const auto [n, n1] = N1.eval_with_derivative(x);
    const cplx n2 = N1.derivative().derivative()(x);
    const cplx psi = w - n, psi1 = w1 - n1, psi2 = w2 - n2;
    const auto [p, p1] = c.P.eval_with_derivative(x);
    const cplx p2 = c.P.derivative().derivative()(x);
    // ln phi = ln psi - ln P - ln 2
    const cplx l1 = psi1 / psi - p1 / p;
    const cplx l2 = psi2 / psi - (psi1 / psi) * (psi1 / psi) - p2 / p + (p1 / p) * (p1 / p);
    return l2 - 0.5 * l1 * l1;
}

cplx schwarzian_series(const Series& V, cplx t) {
    const Series d1 = V.derivative();
    return schwarzian(V.eval(t), d1.eval(t), d1.derivative().eval(t));
}

}  // namespace speclab
