#pragma once

#include <vector>

#include <Eigen/Dense>

#include "speclab/differentials.hpp"
#include "speclab/theta.hpp"

namespace speclab {

/// A point together with the local data every kernel needs. g, g1, g2 are v_alpha / dt and
/// two t-derivatives in the point's local parameter t.
struct LocalPoint {
    cplx x, w;
    Eigen::VectorXcd A;  // Abel image relative to x_r
    Eigen::VectorXcd g, g1, g2;
};

/// Taylor data of v_alpha / dt in one chart, with the Abel map integrated termwise.
struct ChartExpansion {
    Chart chart;
    Eigen::VectorXcd A0;
    std::vector<Series> g;  // one series per alpha

    LocalPoint at(cplx t) const;
};

/// Curve, normalized periods and theta data: the substrate for B, E, S_B and all residue formulas.
class CurveModel {
public:
    explicit CurveModel(SpectralCurve c, const QuadOptions& opt = {}, const HomologyBasis* basis = nullptr,
                        const Characteristic* delta = nullptr);

    const SpectralCurve& curve() const { return curve_; }
    const PeriodData& periods() const { return pd_; }
    const ThetaParams& theta_params() const { return tp_; }
    const Differential& v() const { return v_; }
    const QuadOptions& quad() const { return opt_; }
    int genus() const { return pd_.genus(); }
    /// grad theta[delta](0)
    const Eigen::VectorXcd& theta_grad0() const { return dtheta0_; }

    /// int_{x_r}^p (v_1..v_g) along canonical routes (x0 -> p minus x0 -> x_r).
    Eigen::VectorXcd abel(const SurfacePoint& p) const;
    /// int_{x_r}^p along paths that cross no cycle representative, from b-periods of the
    /// normalized third-kind differential with poles at p and x_r.
    Eigen::VectorXcd abel_polygon(const SurfacePoint& p) const;

    ChartExpansion expand(const Chart& ch, const Eigen::VectorXcd& A0, int order = 64) const;
    /// Chart at p (branch chart on branch points) with the route Abel map at its centre.
    ChartExpansion expand_at(const SurfacePoint& p, int order = 64) const;
    /// x-chart data at a regular point.
    LocalPoint point(const SurfacePoint& p) const;

    /// B(P, Q) relative to dt_P dt_Q.
    cplx bidifferential(const LocalPoint& P, const LocalPoint& Q) const;
    /// E(P, Q) relative to dt_P^{-1/2} dt_Q^{-1/2}, h = principal square root.
    cplx prime_form(const LocalPoint& P, const LocalPoint& Q) const;
    /// d_t ln(E(x, t) / E(y, t)) / dt at T.
    cplx dlog_prime_ratio(const LocalPoint& X, const LocalPoint& Y, const LocalPoint& T) const;
    /// Bergman projective connection in the point's local parameter.
    cplx bergman_projective(const LocalPoint& P) const;

private:
    SpectralCurve curve_;
    QuadOptions opt_;
    PeriodData pd_;
    ThetaParams tp_;
    Differential v_;
    Eigen::VectorXcd dtheta0_;
    Eigen::VectorXcd abel_xr_;
};

/// Closed-form hyperelliptic bidifferential: (F(x,y) + 2 w_x w_y) / (4 (x-y)^2 w_x w_y) plus the
/// holomorphic correction sum M_kl x^k y^l / (w_x w_y) fixed by zero a-periods.
class AlgebraicBergman {
public:
    AlgebraicBergman(const SpectralCurve& c, const PeriodData& pd, const QuadOptions& opt = {});
    /// relative to dx dy
    cplx operator()(cplx x, cplx wx, cplx y, cplx wy) const;
    /// S_B relative to dx^2 (the same on both sheets)
    cplx projective(cplx x) const;
    const Eigen::MatrixXcd& correction() const { return M_; }

private:
    cplx F(cplx x, cplx y) const;
    cplx Fyy_diag(cplx x) const;
    ComplexPoly D_;
    Eigen::MatrixXcd M_;
};

/// Deterministic evaluation points away from all singular points, alternating sheets.
std::vector<SurfacePoint> sample_points(const SpectralCurve& c, int n);

/// Schwarzian {int v, x} at (x, w).
cplx schwarzian_v(const SpectralCurve& c, cplx x, cplx w);
/// Schwarzian {int V dt, t} at t for a power series V.
cplx schwarzian_series(const Series& V, cplx t);
/// Schwarzian of the antiderivative of f at t, with f, f', f'' supplied.
inline cplx schwarzian(cplx f, cplx f1, cplx f2) { return f2 / f - 1.5 * (f1 / f) * (f1 / f); }

}  // namespace speclab
