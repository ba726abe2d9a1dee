#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "speclab/error.hpp"

namespace speclab {

/// Laurent window of a function sampled on a circle |t| = radius in a local parameter t.
/// coeff(k) is the coefficient of t^k for -N/2 <= k < N/2.
class JetSeries {
public:
    JetSeries() = default;
    JetSeries(std::complex<double> center, double radius, std::vector<std::complex<double>> dft)
        : center_(center), radius_(radius), dft_(std::move(dft)) {}

    std::complex<double> center() const { return center_; }
    double radius() const { return radius_; }
    int samples() const { return static_cast<int>(dft_.size()); }

    std::complex<double> coeff(int k) const {
        const int n = samples();
        if (k < -n / 2 || k >= n / 2) return 0.0;
        const int idx = ((k % n) + n) % n;
        return dft_[static_cast<std::size_t>(idx)] / std::pow(radius_, k);
    }
    std::complex<double> residue() const { return coeff(-1); }

    /// |c_k| r^k over the upper quarter of the band; small when aliasing is negligible.
    double tail_estimate() const {
        const int n = samples();
        double t = 0.0;
        for (int k = n / 4; k < n / 2; ++k) t = std::max(t, std::abs(dft_[static_cast<std::size_t>(k)]));
        for (int k = -n / 2; k <= -n / 4; ++k)
            t = std::max(t, std::abs(dft_[static_cast<std::size_t>(((k % n) + n) % n)]));
        return t;
    }
    double scale() const {
        double s = 0.0;
        for (const auto& d : dft_) s = std::max(s, std::abs(d));
        return s;
    }

    /// Evaluate the retained series sum_{k=kmin}^{kmax} c_k t^k.
    std::complex<double> evaluate(std::complex<double> t, int kmin, int kmax) const {
        std::complex<double> acc = 0.0;
        for (int k = kmax; k >= kmin; --k) acc += coeff(k) * std::pow(t, k);
        return acc;
    }
    /// Regular part evaluated by Horner on the non-negative coefficients.
    std::complex<double> taylor(std::complex<double> t, int kmax = -1) const {
        if (kmax < 0) kmax = samples() / 2 - 1;
        std::complex<double> acc = 0.0;
        for (int k = kmax; k >= 0; --k) acc = acc * t + coeff(k);
        return acc;
    }
    /// Antiderivative of the regular part vanishing at t = 0.
    std::complex<double> antiderivative(std::complex<double> t, int kmax = -1) const {
        if (kmax < 0) kmax = samples() / 2 - 1;
        std::complex<double> acc = 0.0;
        for (int k = kmax; k >= 0; --k) acc = acc * t + coeff(k) / static_cast<double>(k + 1);
        return acc * t;
    }
    /// k-th derivative at t = 0 of the regular part: k! c_k.
    std::complex<double> derivative_at_center(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f * coeff(k);
    }

private:
    std::complex<double> center_{0.0, 0.0};
    double radius_ = 0.0;
    std::vector<std::complex<double>> dft_;
};

namespace detail {

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace detail

/// Discrete Fourier coefficients (divided by N) of samples taken at angles 2 pi j / N.
inline std::vector<std::complex<double>> dft_normalized(std::vector<std::complex<double>> samples) {
    const std::size_t n = samples.size();
    if (n == 0 || (n & (n - 1)) != 0) throw DomainError("dft: sample count must be a power of two");
    detail::fft_inplace(samples, false);
    for (auto& s : samples) s /= static_cast<double>(n);
    return samples;
}

/// Sample f(t) on |t| = radius at n points and return its Laurent window.
template <typename F>
JetSeries circle_jet(const F& f, double radius, int n = 256, std::complex<double> center = 0.0) {
    std::vector<std::complex<double>> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        s[static_cast<std::size_t>(j)] = f(std::polar(radius, 2.0 * std::numbers::pi * j / n));
    return JetSeries(center, radius, dft_normalized(std::move(s)));
}

/// Taylor coefficients h_{kl} of a function analytic on the polydisk |t1| <= r1, |t2| <= r2,
/// from an n x n torus sample. Returned as row-major h[k * n + l] for 0 <= k, l < n/2.
template <typename F>
std::vector<std::complex<double>> torus_taylor(const F& f, double r1, double r2, int n) {
    std::vector<std::complex<double>> grid(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j) {
        const auto t1 = std::polar(r1, 2.0 * std::numbers::pi * j / n);
        for (int l = 0; l < n; ++l)
            grid[static_cast<std::size_t>(j * n + l)] = f(t1, std::polar(r2, 2.0 * std::numbers::pi * l / n));
    }
    std::vector<std::complex<double>> row(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) row[static_cast<std::size_t>(l)] = grid[static_cast<std::size_t>(j * n + l)];
        row = dft_normalized(row);
        for (int l = 0; l < n; ++l) grid[static_cast<std::size_t>(j * n + l)] = row[static_cast<std::size_t>(l)];
    }
    for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = grid[static_cast<std::size_t>(j * n + l)];
        row = dft_normalized(row);
        for (int j = 0; j < n; ++j) grid[static_cast<std::size_t>(j * n + l)] = row[static_cast<std::size_t>(j)];
    }
    std::vector<std::complex<double>> h(static_cast<std::size_t>(n * n), 0.0);
    for (int k = 0; k < n / 2; ++k)
        for (int l = 0; l < n / 2; ++l)
            h[static_cast<std::size_t>(k * n + l)] =
                grid[static_cast<std::size_t>(k * n + l)] / (std::pow(r1, k) * std::pow(r2, l));
    return h;
}

}  // namespace speclab
