#pragma once

#include <complex>

#include <Eigen/Dense>

#include "speclab/error.hpp"

namespace speclab {

/// Half characteristic [delta'; delta''], entries in {0, 1/2}.
struct Characteristic {
    Eigen::VectorXd a, b;
    bool odd() const;
};

struct ThetaParams {
    Eigen::MatrixXcd Omega;
    Characteristic delta;
    /// Lattice points with pi (m + c)^T Im Omega (m + c) <= radius2 are summed; the tail is below exp(-radius2) times
    /// a polynomial factor.
    double radius2 = 40.0;
    long max_points = 2'000'000;
};

/// theta[delta](z) and its derivatives, all stored divided by exp(log_scale).
struct ThetaValue {
    std::complex<double> value;
    double log_scale = 0.0;
    Eigen::VectorXcd grad;
    Eigen::MatrixXcd hess;

    std::complex<double> full() const { return value * std::exp(log_scale); }
    std::complex<double> log() const { return std::log(value) + log_scale; }
    Eigen::VectorXcd dlog() const { return grad / value; }
    Eigen::MatrixXcd ddlog() const { return hess / value - grad * grad.transpose() / (value * value); }
};

/// order 0: value only; 1: + gradient; 2: + Hessian.
ThetaValue theta(const Eigen::VectorXcd& z, const ThetaParams& p, int order = 2);
/// sum_{abc} d^3 theta / dz_a dz_b dz_c u_a u_b u_c, scaled like theta(z).
std::complex<double> theta_third(const Eigen::VectorXcd& z, const ThetaParams& p, const Eigen::VectorXcd& u);

/// First odd characteristic (lexicographic in (delta', delta'')) whose gradient at 0 is not negligible.
Characteristic odd_characteristic(const Eigen::MatrixXcd& Omega, double radius2 = 40.0);

}  // namespace speclab
