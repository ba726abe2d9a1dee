#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "speclab/error.hpp"
#include "speclab/numerics/contour.hpp"

namespace speclab {

template <typename V>
struct QuadResultT {
    V value{};
    double error = 0.0;
    int evaluations = 0;
};
using QuadResult = QuadResultT<std::complex<double>>;

struct QuadOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_depth = 40;
    int max_intervals = 20000;
};

namespace detail {

inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
auto gk15(const F& f, double a, double b, int& evals) {
    using V = std::decay_t<decltype(f(a))>;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const V fc = f(c);
    V k15 = fc * gk_weights[7];
    V g7 = fc * g7_weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk_nodes[static_cast<std::size_t>(i)];
        const V s = f(c - dx) + f(c + dx);
        k15 += gk_weights[static_cast<std::size_t>(i)] * s;
        if (i % 2 == 1) g7 += g7_weights[static_cast<std::size_t>(i / 2)] * s;
    }
    evals += 15;
    V diff = k15 - g7;
    return std::pair<V, double>{V(k15 * h), magnitude(diff) * std::abs(h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of a complex- or vector-valued function of a
/// real parameter over [a, b]. The piece with the largest error estimate is bisected until
/// the summed estimate meets the tolerance (max-norm for vectors).
template <typename F>
auto integrate_interval(const F& f, double a, double b, const QuadOptions& opt = {}) {
    using V = std::decay_t<decltype(f(a))>;
    struct Piece {
        double a, b;
        V val;
        double err;
        int depth;
    };
    QuadResultT<V> res;
    std::vector<Piece> work;
    {
        auto [v, e] = detail::gk15(f, a, b, res.evaluations);
        work.push_back({a, b, v, e, 0});
    }
    V total = work.front().val;
    double total_err = work.front().err;
    int intervals = 1;
    while (true) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
        if (total_err <= tol) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < work.size(); ++i)
            if (work[i].err > work[worst].err) worst = i;
        Piece p = work[worst];
        if (p.depth >= opt.max_depth || intervals >= opt.max_intervals) {
            throw NumericalError("integrate: subdivision exhausted on [" + std::to_string(p.a) + ", " +
                                 std::to_string(p.b) + "]");
        }
        const double m = 0.5 * (p.a + p.b);
        auto [v1, e1] = detail::gk15(f, p.a, m, res.evaluations);
        auto [v2, e2] = detail::gk15(f, m, p.b, res.evaluations);
        total += v1 + v2 - p.val;
        total_err += e1 + e2 - p.err;
        work[worst] = {p.a, m, v1, e1, p.depth + 1};
        work.push_back({m, p.b, v2, e2, p.depth + 1});
        ++intervals;
        if (total_err < 0) total_err = 0;
    }
    // resum to avoid drift
    total = work.front().val;
    total_err = work.front().err;
    for (std::size_t i = 1; i < work.size(); ++i) {
        total += work[i].val;
        total_err += work[i].err;
    }
    res.value = total;
    res.error = total_err;
    return res;
}

/// Integral of a single-valued f(x) dx along a contour.
template <typename F>
auto integrate(const F& f, const Contour& contour, const QuadOptions& opt = {}) {
    using V = std::decay_t<decltype(f(std::complex<double>{}))>;
    QuadResultT<V> total;
    bool first = true;
    for (const auto& seg : contour.segments) {
        auto g = [&](double s) { return V(f(seg.point(s)) * seg.tangent(s)); };
        const auto r = integrate_interval(g, 0.0, 1.0, opt);
        if (first) total.value = r.value;
        else total.value += r.value;
        first = false;
        total.error += r.error;
        total.evaluations += r.evaluations;
    }
    return total;
}

}  // namespace speclab
