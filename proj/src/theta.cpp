#include "speclab/theta.hpp"

#include <cmath>
#include <vector>

namespace speclab {

bool Characteristic::odd() const {
    const double s = 4.0 * a.dot(b);
    return static_cast<long>(std::llround(s)) % 2 != 0;
}

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kI(0.0, 1.0);

/// Calls f(m, weight) for every shifted lattice point m = n + delta' in the truncation ellipsoid; weight is
/// exp(i pi m Omega m + 2 pi i m (z + delta'') - log_scale).
template <typename F>
double lattice_sum(const Eigen::VectorXcd& z, const ThetaParams& p, const F& f) {
    const int g = static_cast<int>(p.Omega.rows());
    if (p.delta.a.size() != g || p.delta.b.size() != g || z.size() != g) throw DomainError("theta: dimension mismatch");
    Eigen::MatrixXd Y = p.Omega.imag();
    Y = 0.5 * (Y + Y.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(Y);
    if (llt.info() != Eigen::Success) throw DomainError("theta: Im Omega is not positive definite");
    const Eigen::MatrixXd Yinv = llt.solve(Eigen::MatrixXd::Identity(g, g));
    const Eigen::VectorXd c = Yinv * z.imag();
    const double log_scale = kPi * z.imag().dot(c);

    // box bounds from the ellipsoid pi (m + c)^T Y (m + c) <= radius2
    std::vector<long> lo(static_cast<std::size_t>(g)), hi(static_cast<std::size_t>(g));
    double count = 1.0;
    for (int i = 0; i < g; ++i) {
        const double half = std::sqrt(p.radius2 / kPi * Yinv(i, i));
        const double centre = -c(i) - p.delta.a(i);
        lo[static_cast<std::size_t>(i)] = static_cast<long>(std::ceil(centre - half));
        hi[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(centre + half));
        count *= static_cast<double>(hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1);
    }
    if (count > static_cast<double>(p.max_points)) throw NumericalError("theta: truncation radius exceeds lattice-enumeration cap");

    const Eigen::VectorXcd zb = z + p.delta.b.cast<std::complex<double>>();
    std::vector<long> n(lo);
    Eigen::VectorXd m(g);
    for (;;) {
        for (int i = 0; i < g; ++i) m(i) = static_cast<double>(n[static_cast<std::size_t>(i)]) + p.delta.a(i);
        const Eigen::VectorXd mc = m + c;
        if (kPi * mc.dot(Y * mc) <= p.radius2) {
            const Eigen::VectorXcd mz = m.cast<std::complex<double>>();
            const std::complex<double> ex = kI * kPi * mz.dot(p.Omega * mz) + 2.0 * kI * kPi * mz.dot(zb) - log_scale;
            f(m, std::exp(ex));
        }
        int i = 0;
        while (i < g && ++n[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) {
            n[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
            ++i;
        }
        if (i == g) break;
    }
    return log_scale;
}

}  // namespace

ThetaValue theta(const Eigen::VectorXcd& z, const ThetaParams& p, int order) {
    const int g = static_cast<int>(z.size());
    ThetaValue out;
    out.value = 0.0;
    out.grad = Eigen::VectorXcd::Zero(order >= 1 ? g : 0);
    out.hess = Eigen::MatrixXcd::Zero(order >= 2 ? g : 0, order >= 2 ? g : 0);
    out.log_scale = lattice_sum(z, p, [&](const Eigen::VectorXd& m, std::complex<double> w) {
        out.value += w;
        if (order >= 1) {
            const Eigen::VectorXcd k = (2.0 * kPi * kI) * m.cast<std::complex<double>>();
            out.grad += w * k;
            if (order >= 2) out.hess += w * k * k.transpose();
        }
    });
    return out;
}

std::complex<double> theta_third(const Eigen::VectorXcd& z, const ThetaParams& p, const Eigen::VectorXcd& u) {
    std::complex<double> s = 0.0;
    lattice_sum(z, p, [&](const Eigen::VectorXd& m, std::complex<double> w) {
        const std::complex<double> k = 2.0 * kPi * kI * m.cast<std::complex<double>>().dot(u);
        s += w * k * k * k;
    });
    return s;
}

Characteristic odd_characteristic(const Eigen::MatrixXcd& Omega, double radius2) {
    const int g = static_cast<int>(Omega.rows());
    const long total = 1L << (2 * g);
    for (long idx = 0; idx < total; ++idx) {
        Characteristic d{Eigen::VectorXd(g), Eigen::VectorXd(g)};
        for (int pos = 0; pos < 2 * g; ++pos) {
            const double bit = static_cast<double>((idx >> (2 * g - 1 - pos)) & 1L) * 0.5;
            if (pos < g) d.a(pos) = bit;
            else d.b(pos - g) = bit;
        }
        if (!d.odd()) continue;
        ThetaParams tp{Omega, d, radius2};
        const ThetaValue t = theta(Eigen::VectorXcd::Zero(g), tp, 1);
        if (t.grad.norm() * std::exp(t.log_scale) > 1e-6) return d;
    }
    throw NumericalError("odd_characteristic: no nonsingular odd characteristic (degenerate Omega)");
}

}  // namespace speclab
