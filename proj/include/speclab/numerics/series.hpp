#pragma once

#include <complex>
#include <vector>

#include "speclab/error.hpp"
#include "speclab/numerics/poly.hpp"

namespace speclab {

/// Truncated power series sum_{k<=order} c_k t^k.
class Series {
public:
    Series() = default;
    explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1, cplx(0.0)) {}

    static Series constant(cplx a, int order) {
        Series s(order);
        s.c_[0] = a;
        return s;
    }
    /// a + b t
    static Series linear(cplx a, cplx b, int order) {
        Series s(order);
        s.c_[0] = a;
        if (order >= 1) s.c_[1] = b;
        return s;
    }
    /// p(x(t)) by Horner.
    static Series compose(const ComplexPoly& p, const Series& x) {
        Series acc(x.order());
        for (int k = p.size() - 1; k >= 0; --k) acc = acc * x + Series::constant(p[static_cast<std::size_t>(k)], x.order());
        return acc;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    cplx operator[](int k) const { return k >= 0 && k <= order() ? c_[static_cast<std::size_t>(k)] : cplx(0.0); }
    cplx& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

    cplx eval(cplx t) const {
        cplx acc = 0.0;
        for (int k = order(); k >= 0; --k) acc = acc * t + c_[static_cast<std::size_t>(k)];
        return acc;
    }
    Series derivative() const {
        Series d(order());
        for (int k = 1; k <= order(); ++k) d[k - 1] = static_cast<double>(k) * c_[static_cast<std::size_t>(k)];
        return d;
    }
    /// Antiderivative vanishing at 0 (top coefficient dropped to keep the order).
    Series integral() const {
        Series d(order());
        for (int k = 1; k <= order(); ++k) d[k] = c_[static_cast<std::size_t>(k) - 1] / static_cast<double>(k);
        return d;
    }
    /// Multiply by t^m (m >= 0), truncating.
    Series shifted_up(int m) const {
        Series d(order());
        for (int k = order(); k >= m; --k) d[k] = c_[static_cast<std::size_t>(k - m)];
        return d;
    }

    friend Series operator+(Series a, const Series& b) {
        for (int k = 0; k <= a.order(); ++k) a[k] += b[k];
        return a;
    }
    friend Series operator-(Series a, const Series& b) {
        for (int k = 0; k <= a.order(); ++k) a[k] -= b[k];
        return a;
    }
    friend Series operator*(Series a, cplx s) {
        for (auto& x : a.c_) x *= s;
        return a;
    }
    friend Series operator*(cplx s, Series a) { return a * s; }
    friend Series operator*(const Series& a, const Series& b) {
        Series r(a.order());
        for (int i = 0; i <= a.order(); ++i) {
            if (a[i] == cplx(0.0)) continue;
            for (int j = 0; i + j <= a.order(); ++j) r[i + j] += a[i] * b[j];
        }
        return r;
    }
    Series inverse() const {
        if (c_[0] == cplx(0.0)) throw NumericalError("series inverse: zero constant term");
        Series r(order());
        r[0] = 1.0 / c_[0];
        for (int k = 1; k <= order(); ++k) {
            cplx s = 0.0;
            for (int j = 1; j <= k; ++j) s += c_[static_cast<std::size_t>(j)] * r[k - j];
            r[k] = -s * r[0];
        }
        return r;
    }
    friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

    /// Square root with prescribed constant term root0 (root0^2 = c_0).
    Series sqrt(cplx root0) const {
        Series r(order());
        r[0] = root0;
        for (int k = 1; k <= order(); ++k) {
            cplx s = c_[static_cast<std::size_t>(k)];
            for (int j = 1; j < k; ++j) s -= r[j] * r[k - j];
            r[k] = s / (2.0 * root0);
        }
        return r;
    }
    /// sqrt(1 + c_1 t + ...) with value 1 at t = 0; requires c_0 = 1.
    Series sqrt1() const { return sqrt(1.0); }

private:
    std::vector<cplx> c_;
};

/// t^val * s(t)
struct Laurent {
    int val = 0;
    Series s;

    cplx coeff(int k) const { return s[k - val]; }
    cplx residue() const { return coeff(-1); }
    cplx eval(cplx t) const { return std::pow(t, val) * s.eval(t); }
};

inline Laurent operator*(const Laurent& a, const Laurent& b) { return {a.val + b.val, a.s * b.s}; }
inline Laurent operator/(const Laurent& a, const Laurent& b) { return {a.val - b.val, a.s / b.s}; }

/// Sum of two Laurent series; the result keeps the lower valuation and the shorter reach.
inline Laurent operator+(const Laurent& a, const Laurent& b) {
    const int v = std::min(a.val, b.val);
    const int top = std::min(a.val + a.s.order(), b.val + b.s.order());
    Series s(top - v);
    for (int k = v; k <= top; ++k) s[k - v] = a.coeff(k) + b.coeff(k);
    return {v, s};
}
inline Laurent operator*(cplx c, Laurent a) {
    a.s = a.s * c;
    return a;
}

}  // namespace speclab
