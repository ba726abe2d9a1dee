#pragma once

// Template bodies for surface.hpp.

namespace speclab {

namespace detail {

cplx piece_w(const SpectralCurve& c, const PathPiece& p, double s);

template <typename V>
Eigen::VectorXcd as_vector(const V& v) {
    if constexpr (std::is_same_v<V, cplx>) {
        Eigen::VectorXcd r(1);
        r(0) = v;
        return r;
    } else {
        return Eigen::VectorXcd(v);
    }
}

}  // namespace detail

template <typename F>
auto path_integral(const SpectralCurve& c, const SheetPath& path, int sigma, const F& f, const QuadOptions& opt) {
    using V = std::decay_t<decltype(f(cplx{}, cplx{}))>;
    V total{};
    bool first = true;
    for (const auto& piece : path.pieces) {
        auto g = [&](double s) {
            const cplx x = piece.point(s);
            const cplx w = static_cast<double>(sigma) * detail::piece_w(c, piece, s);
            return V(f(x, w) * piece.dxds(s));
        };
        const auto r = integrate_interval(g, 0.0, 1.0, opt);
        if (first) total = r.value;
        else total += r.value;
        first = false;
    }
    if (first) {
        // empty path: zero of the right shape
        V z = f(path.start, static_cast<double>(sigma) * path.w_start);
        return V(z * cplx(0.0));
    }
    return total;
}

template <typename F>
auto route_integral(const SpectralCurve& c, const SurfacePoint& p, const F& f, const QuadOptions& opt) {
    SheetPath scratch;
    auto route = c.canonical_route(p, scratch);
    using V = std::decay_t<decltype(f(cplx{}, cplx{}))>;
    V total{};
    bool first = true;
    for (const auto& step : route) {
        V part = path_integral(c, *step.path, step.lift, f, opt);
        if (step.orient < 0) part = V(part * cplx(-1.0));
        if (first) total = part;
        else total += part;
        first = false;
    }
    return total;
}

template <typename F>
Eigen::MatrixXcd lasso_odd_integrals(const SpectralCurve& c, const F& f, const QuadOptions& opt) {
    const int p = c.num_branch();
    Eigen::MatrixXcd out;
    for (int k = 0; k < p; ++k) {
        const Eigen::VectorXcd leg = detail::as_vector(path_integral(c, c.legs[static_cast<std::size_t>(k)], 1, f, opt));
        const Eigen::VectorXcd circ = detail::as_vector(path_integral(c, c.circles[static_cast<std::size_t>(k)], 1, f, opt));
        if (k == 0) out.resize(p, leg.size());
        out.row(k) = (2.0 * leg + circ).transpose();
    }
    return out;
}

template <typename F>
LassoTable lasso_integrals(const SpectralCurve& c, const F& f, const QuadOptions& opt) {
    const int p = c.num_branch();
    LassoTable t;
    for (int k = 0; k < p; ++k) {
        const auto& leg = c.legs[static_cast<std::size_t>(k)];
        const auto& circ = c.circles[static_cast<std::size_t>(k)];
        const Eigen::VectorXcd lp = detail::as_vector(path_integral(c, leg, 1, f, opt));
        const Eigen::VectorXcd lm = detail::as_vector(path_integral(c, leg, -1, f, opt));
        const Eigen::VectorXcd cp = detail::as_vector(path_integral(c, circ, 1, f, opt));
        const Eigen::VectorXcd cm = detail::as_vector(path_integral(c, circ, -1, f, opt));
        if (k == 0) {
            t.plus.resize(p, lp.size());
            t.minus.resize(p, lp.size());
        }
        t.plus.row(k) = (lp + cp - lm).transpose();
        t.minus.row(k) = (lm + cm - lp).transpose();
    }
    return t;
}

}  // namespace speclab
