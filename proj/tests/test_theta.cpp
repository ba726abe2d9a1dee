#include <doctest.h>

#include "speclab/differentials.hpp"
#include "speclab/library.hpp"
#include "speclab/theta.hpp"

using namespace speclab;

namespace {

const cplx I(0.0, 1.0);

ThetaParams zero_char(const Eigen::MatrixXcd& Om) {
    const int g = static_cast<int>(Om.rows());
    return {Om, {Eigen::VectorXd::Zero(g), Eigen::VectorXd::Zero(g)}};
}

Eigen::MatrixXcd g2_omega() {
    Eigen::MatrixXcd Om(2, 2);
    Om << cplx(0.3, 1.1), cplx(-0.2, 0.4), cplx(-0.2, 0.4), cplx(0.45, 0.9);
    return Om;
}

}  // namespace

TEST_CASE("theta parity and quasi-periodicity") {
    const auto p = zero_char(g2_omega());
    Eigen::VectorXcd z(2);
    z << cplx(0.31, -0.22), cplx(-0.17, 0.4);
    CHECK(std::abs(theta(z, p, 0).full() - theta(-z, p, 0).full()) < 1e-12 * std::abs(theta(z, p, 0).full()));
    Eigen::VectorXd m(2), n(2);
    m << 1, -2;
    n << 3, 1;
    const Eigen::VectorXcd mc = m.cast<cplx>();
    const Eigen::VectorXcd shift = p.Omega * mc + n.cast<cplx>();
    const cplx lhs = theta(z + shift, p, 0).log();
    const cplx rhs = -I * M_PI * mc.dot(p.Omega * mc) - 2.0 * I * M_PI * mc.dot(z) + theta(z, p, 0).log();
    // compare exponentials of the difference to stay off the log branch cut
    CHECK(std::abs(std::exp(lhs - rhs) - 1.0) < 1e-10);
}

TEST_CASE("genus one theta against direct q-series") {
    Eigen::MatrixXcd Om(1, 1);
    Om(0, 0) = cplx(0.2, 0.8);
    for (int ch = 0; ch < 4; ++ch) {
        ThetaParams p{Om, {Eigen::VectorXd::Constant(1, 0.5 * (ch >> 1)), Eigen::VectorXd::Constant(1, 0.5 * (ch & 1))}};
        Eigen::VectorXcd z(1);
        z(0) = cplx(0.13, 0.21);
        cplx ref = 0.0, dref = 0.0, ddref = 0.0, d3 = 0.0;
        for (int k = -40; k <= 40; ++k) {
            const double m = k + p.delta.a(0);
            const cplx t = std::exp(I * M_PI * m * m * Om(0, 0) + 2.0 * I * M_PI * m * (z(0) + p.delta.b(0)));
            ref += t;
            dref += 2.0 * I * M_PI * m * t;
            ddref += std::pow(2.0 * I * M_PI * m, 2) * t;
            d3 += std::pow(2.0 * I * M_PI * m, 3) * t;
        }
        const ThetaValue v = theta(z, p);
        const double sc = std::exp(v.log_scale);
        CHECK(std::abs(v.full() - ref) < 1e-12 * std::abs(ref) + 1e-14);
        CHECK(std::abs(v.grad(0) * sc - dref) < 1e-11 * std::abs(dref) + 1e-13);
        CHECK(std::abs(v.hess(0, 0) * sc - ddref) < 1e-11 * std::abs(ddref) + 1e-13);
        CHECK(std::abs(theta_third(z, p, Eigen::VectorXcd::Ones(1)) * sc - d3) < 1e-11 * std::abs(d3) + 1e-12);
    }
}

TEST_CASE("odd characteristic is odd and nonsingular") {
    const auto Om = g2_omega();
    const auto d = odd_characteristic(Om);
    CHECK(d.odd());
    ThetaParams p{Om, d};
    Eigen::VectorXcd z(2);
    z << cplx(0.05, 0.1), cplx(-0.2, 0.03);
    CHECK(std::abs(theta(z, p, 0).full() + theta(-z, p, 0).full()) < 1e-12);
    CHECK(std::abs(theta(Eigen::VectorXcd::Zero(2), p, 0).full()) < 1e-14);
}

TEST_CASE("lattice cap is enforced") {
    Eigen::MatrixXcd Om(1, 1);
    Om(0, 0) = cplx(0.0, 1e-12);
    CHECK_THROWS_AS(theta(Eigen::VectorXcd::Zero(1), zero_char(Om), 0), NumericalError);
}
