#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "speclab/numerics/jet.hpp"
#include "speclab/numerics/series.hpp"
#include "speclab/surface.hpp"

namespace speclab {

/// num(x) / prod_i (x - r_i)^{m_i}
struct Rational {
    ComplexPoly num{cplx(0.0)};
    std::vector<std::pair<cplx, int>> den;

    cplx operator()(cplx x) const;
    bool is_zero() const { return num.degree() < 0; }
};
Rational operator+(const Rational& a, const Rational& b);
Rational operator*(cplx s, Rational a);

/// Local parameter t around a point of the cover.
///   Regular: x = c + t, w continued from w_center.
///   Branch:  x = e + t^2, w = t g0 prod_{j != k} sqrt(1 + t^2 / (e - e_j)).
struct Chart {
    enum class Kind { Regular, Branch };
    Kind kind = Kind::Regular;
    cplx center;
    cplx w_center;
    int branch = -1;
    cplx g0;
    double radius = 0.0;  // jet circle radius in t
    std::vector<cplx> e;

    cplx x(cplx t) const;
    cplx dxdt(cplx t) const;
    cplx w(cplx t) const;
    Series x_series(int order) const;
    Laurent w_series(int order) const;
    Laurent dxdt_series(int order) const;
};

Chart regular_chart(const SpectralCurve& c, cplx x, cplx w);
Chart branch_chart(const SpectralCurve& c, int k);
/// Branch chart if p sits on a branch point, regular chart otherwise.
Chart chart_at(const SpectralCurve& c, const SurfacePoint& p);

/// Principal part of a differential at one point: coeff[l-1] multiplies t^{-l} dt.
struct Singularity {
    SurfacePoint point;
    std::vector<cplx> coeff;
};

/// Meromorphic differential f dx on the hyperelliptic model, f = even(x) + odd(x)/w.
struct Differential {
    std::string name;
    Rational even, odd;
    std::vector<Singularity> ledger;
    Eigen::VectorXcd a_periods;

    cplx operator()(cplx x, cplx w) const;
    /// (f dx/dt) in the chart as a Laurent series with 'order' terms past the valuation.
    Laurent in_chart(const Chart& ch, int order) const;
    /// odd part only (cycle integrals of the even part vanish when its poles avoid branch points)
    cplx odd_value(cplx x, cplx w) const { return odd(x) / w; }
};
Differential operator+(const Differential& a, const Differential& b);
Differential operator-(const Differential& a, const Differential& b);
Differential operator*(cplx s, const Differential& a);

struct PeriodData {
    HomologyBasis basis;
    Eigen::MatrixXcd A_raw, B_raw;  // (alpha, k): periods of x^k dx / w
    Eigen::MatrixXcd G;             // v_alpha = sum_k G(alpha, k) x^k dx / w
    Eigen::MatrixXcd Omega;
    Eigen::VectorXcd A, B;          // periods of v
    double gram_condition = 0.0;

    int genus() const { return static_cast<int>(G.rows()); }
    Differential v_alpha(int alpha) const;
    /// (v_1, ..., v_g) / dx at (x, w)
    Eigen::VectorXcd g(cplx x, cplx w) const;
};

/// v = phi dx
Differential v_differential(const SpectralCurve& c);

/// Raw a/b periods, Gram solve, Omega; b-cycles are reoriented so that Im Omega > 0.
PeriodData normalized_basis(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt = {});
PeriodData normalized_basis(const SpectralCurve& c, const QuadOptions& opt = {});

/// Cycle integrals of a differential over the a- and b-cycles of pd.
Eigen::VectorXcd a_periods(const SpectralCurve& c, const PeriodData& pd, const Differential& d, const QuadOptions& opt = {});
Eigen::VectorXcd b_periods(const SpectralCurve& c, const PeriodData& pd, const Differential& d, const QuadOptions& opt = {});

/// Subtract the holomorphic combination that zeroes all a-periods; fills d.a_periods with zeros.
Differential normalize_a_periods(const SpectralCurve& c, const PeriodData& pd, Differential d, const QuadOptions& opt = {});

/// w_j^{(s),l}: singular part (1/chi^l + O(1)) dchi at y_j^{(s)}, chi = x - y_j, zero a-periods.
Differential second_kind(const SpectralCurve& c, const PeriodData& pd, int j, int s, int ell, const QuadOptions& opt = {});
/// u_j^{(s)}: residue -1 at y_1^{(1)} and +1 at y_j^{(s)}, zero a-periods.
Differential third_kind(const SpectralCurve& c, const PeriodData& pd, int j, int s, const QuadOptions& opt = {});
/// Normalized third-kind differential with residue +1 at P and -1 at Q (arbitrary points).
Differential third_kind_points(const SpectralCurve& c, const PeriodData& pd, const SurfacePoint& P, const SurfacePoint& Q,
                               const QuadOptions& opt = {});

/// Jet of an arbitrary function of the chart parameter on the chart circle.
template <typename F>
JetSeries chart_jet(const Chart& ch, const F& f, int samples = 256) {
    return circle_jet(f, ch.radius, samples, ch.center);
}

}  // namespace speclab
