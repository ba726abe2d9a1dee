#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "speclab/error.hpp"

namespace speclab {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients, constant term first.
template <typename Scalar = cplx>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {}
    Poly(std::initializer_list<Scalar> coeffs) : c_(coeffs) {}

    static Poly monomial(int k, Scalar a = Scalar(1)) {
        std::vector<Scalar> c(static_cast<std::size_t>(k) + 1, Scalar(0));
        c.back() = a;
        return Poly(std::move(c));
    }
    /// prod (x - r_i)
    static Poly from_roots(std::span<const Scalar> roots, Scalar lead = Scalar(1)) {
        Poly p({lead});
        for (const auto& r : roots) p = p * Poly({-r, Scalar(1)});
        return p;
    }

    const std::vector<Scalar>& coeffs() const { return c_; }
    std::vector<Scalar>& coeffs() { return c_; }
    Scalar operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Scalar(0); }
    int size() const { return static_cast<int>(c_.size()); }

    /// Degree after ignoring exact zeros at the top; -1 for the zero polynomial.
    int degree() const {
        for (int k = size() - 1; k >= 0; --k)
            if (c_[static_cast<std::size_t>(k)] != Scalar(0)) return k;
        return -1;
    }

    Poly trimmed(double rel_tol = 0.0) const {
        double scale = 0.0;
        for (const auto& a : c_) scale = std::max(scale, std::abs(a));
        std::vector<Scalar> c = c_;
        while (!c.empty() && std::abs(c.back()) <= rel_tol * scale) c.pop_back();
        return Poly(std::move(c));
    }

    Scalar operator()(Scalar x) const {
        Scalar acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// Value and first derivative by Horner.
    std::pair<Scalar, Scalar> eval_with_derivative(Scalar x) const {
        Scalar p(0), dp(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            dp = dp * x + p;
            p = p * x + *it;
        }
        return {p, dp};
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly({Scalar(0)});
        std::vector<Scalar> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
        return Poly(std::move(d));
    }

    /// Coefficients of p(center + t) in powers of t.
    Poly shifted(Scalar center) const {
        std::vector<Scalar> c = c_;
        const int n = size();
        for (int i = 0; i < n; ++i)
            for (int k = n - 2; k >= i; --k)
                c[static_cast<std::size_t>(k)] += center * c[static_cast<std::size_t>(k) + 1];
        return Poly(std::move(c));
    }

    /// Synthetic division by (x - r); remainder discarded.
    Poly deflated(Scalar r) const {
        const int n = degree();
        if (n <= 0) return Poly({Scalar(0)});
        std::vector<Scalar> q(static_cast<std::size_t>(n));
        Scalar acc = c_[static_cast<std::size_t>(n)];
        for (int k = n - 1; k >= 0; --k) {
            q[static_cast<std::size_t>(k)] = acc;
            acc = acc * r + c_[static_cast<std::size_t>(k)];
        }
        return Poly(std::move(q));
    }

    double coefficient_scale() const {
        double s = 0.0;
        for (const auto& a : c_) s = std::max(s, std::abs(a));
        return s;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()), Scalar(0));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + b * Scalar(-1); }
    friend Poly operator*(const Poly& a, Scalar s) {
        std::vector<Scalar> c = a.c_;
        for (auto& x : c) x *= s;
        return Poly(std::move(c));
    }
    friend Poly operator*(Scalar s, const Poly& a) { return a * s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return Poly({Scalar(0)});
        std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1, Scalar(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }

private:
    std::vector<Scalar> c_;
};

using ComplexPoly = Poly<cplx>;

struct PolyRoot {
    cplx value;
    int multiplicity = 1;
};

struct RootOptions {
    double root_tol = 1e-12;
    double cluster_tol = 1e-4;
    int max_iter = 500;
};

namespace detail {

inline std::vector<cplx> companion_roots(const ComplexPoly& p) {
    const int n = p.degree();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    const cplx lead = p[static_cast<std::size_t>(n)];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solve failed");
    std::vector<cplx> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return r;
}

// Newton polish on the original polynomial.
inline cplx polish(const ComplexPoly& p, cplx z) {
    for (int it = 0; it < 4; ++it) {
        auto [f, df] = p.eval_with_derivative(z);
        if (df == cplx(0)) break;
        const cplx dz = f / df;
        z -= dz;
        if (std::abs(dz) <= 1e-17 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace detail

/// All roots of p by Aberth-Ehrlich iteration from a deterministic ring; falls back to
/// companion-matrix eigenvalues when the iteration stalls. Roots closer than cluster_tol
/// (relative) are merged and flagged with their multiplicity.
inline std::vector<PolyRoot> poly_roots(const ComplexPoly& p_in, const RootOptions& opt = {}) {
    const ComplexPoly p = p_in.trimmed();
    const int n = p.degree();
    if (n < 1) throw DomainError("poly_roots: degree must be >= 1");

    const cplx lead = p[static_cast<std::size_t>(n)];
    double radius = 0.0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, std::pow(std::abs(p[static_cast<std::size_t>(k)] / lead), 1.0 / (n - k)));
    radius = std::max(radius, 1e-3);

    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * (k + 0.25) / n + 0.4);

    bool converged = false;
    for (int it = 0; it < opt.max_iter && !converged; ++it) {
        double max_step = 0.0;
        for (int i = 0; i < n; ++i) {
            auto& zi = z[static_cast<std::size_t>(i)];
            auto [f, df] = p.eval_with_derivative(zi);
            if (f == cplx(0)) continue;
            const cplx ratio = f / df;
            cplx sum(0);
            for (int j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
            const cplx step = ratio / (1.0 - ratio * sum);
            zi -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(zi)));
        }
        if (max_step < 1e-15) converged = true;
    }
    if (!converged) z = detail::companion_roots(p);
    for (auto& zi : z) zi = detail::polish(p, zi);

    // residual check
    const double scale = p.coefficient_scale();
    for (const auto& zi : z) {
        double mag = 0.0, az = std::abs(zi), pw = 1.0;
        for (int k = 0; k <= n; ++k, pw *= az) mag += std::abs(p[static_cast<std::size_t>(k)]) * pw;
        if (std::abs(p(zi)) > std::max(opt.root_tol * mag, 1e-300 * scale) * 1e3)
            throw NumericalError("poly_roots: residual above tolerance");
    }

    std::vector<PolyRoot> out;
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        PolyRoot r{z[i], 1};
        cplx sum = z[i];
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(z[j] - z[i]) <= opt.cluster_tol * std::max(1.0, std::abs(z[i]))) {
                used[j] = true;
                ++r.multiplicity;
                sum += z[j];
            }
        }
        r.value = sum / static_cast<double>(r.multiplicity);
        out.push_back(r);
    }
    return out;
}

/// Roots as a flat list (multiplicities expanded).
inline std::vector<cplx> poly_root_values(const ComplexPoly& p, const RootOptions& opt = {}) {
    std::vector<cplx> v;
    for (const auto& r : poly_roots(p, opt))
        for (int m = 0; m < r.multiplicity; ++m) v.push_back(r.value);
    return v;
}

/// Eigenvalues of the companion matrix; used as the independent root oracle.
inline std::vector<cplx> companion_eigenvalues(const ComplexPoly& p) {
    return detail::companion_roots(p.trimmed());
}

}  // namespace speclab
