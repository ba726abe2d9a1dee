#pragma once

#include <Eigen/Dense>

#include "speclab/error.hpp"

namespace speclab {

struct DenseSolve {
    Eigen::VectorXcd solution;
    double condition = 0.0;
    double residual = 0.0;
};

/// Solve a square complex system with column-pivoted QR, reporting the 2-norm condition
/// number (from singular values) and the relative residual.
inline DenseSolve solve_dense(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, double singular_tol = 1e-13) {
    if (a.rows() != a.cols() || a.rows() != b.size()) throw DomainError("solve_dense: shape mismatch");
    DenseSolve out;
    if (a.rows() == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    const double smax = s(0), smin = s(s.size() - 1);
    if (!(smax > 0.0) || smin <= singular_tol * smax) throw NumericalError("solve_dense: matrix singular to tolerance");
    out.condition = smax / smin;
    out.solution = a.colPivHouseholderQr().solve(b);
    const double scale = a.norm() * out.solution.norm() + b.norm();
    out.residual = scale > 0 ? (a * out.solution - b).norm() / scale : 0.0;
    return out;
}

}  // namespace speclab
