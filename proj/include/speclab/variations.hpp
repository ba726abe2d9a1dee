#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "speclab/kernels.hpp"
#include "speclab/moduli.hpp"

namespace speclab {

/// Local data at one branch point in t = sqrt(x - e): y = v/dx as a series in t, g_alpha = v_alpha/dt,
/// direction differentials h/dt, and S_B in t.
struct BranchJet {
    int branch = -1;
    SurfacePoint point;
    ChartExpansion chart;
    Series y;  // v/dx
    cplx y0, y1, y3;
    Eigen::VectorXcd g, g2;  // g_alpha(0), g_alpha''(0)
    std::vector<Series> h;   // h/dt per direction
    cplx S_B;
};

struct BranchJetTable {
    std::vector<CoordinateDirection> dirs;
    std::vector<Differential> h;
    std::vector<BranchJet> jets;
    Eigen::MatrixXcd B;  // B(x_i, x_j) / (dt_i dt_j), i != j
};

/// Jets at every branch point. Directions default to the full coordinate list.
BranchJetTable branch_jets(const CurveModel& m, std::vector<CoordinateDirection> dirs = {}, int order = 40);

/// -(h / d ln(v/dxi))(x_i) for direction 'dir' at jet i, in the base coordinate xi = x - e.
cplx endpoint_correction(const BranchJetTable& t, int dir, int i);
/// The same with the base coordinate xi = f(x - e), f(0) = 0, f'(0) != 0.
cplx endpoint_correction(const BranchJetTable& t, int dir, int i, const ComplexPoly& f);

/// Residue at t = 0 of k(t) dt on the jet's chart circle.
cplx jet_residue(const BranchJet& j, const std::function<cplx(const LocalPoint&, cplx)>& k, int samples = 64);

struct PeriodVariation {
    Eigen::MatrixXcd pairing;  // corr * res(v_a v_b / v)
    Eigen::MatrixXcd single;   // res(v_a v_b h / (dxi dy))
};
/// dOmega / dz in both forms; throws if they differ by more than 1e-9 (relative).
PeriodVariation vary_period_matrix(const CurveModel& m, const BranchJetTable& t, int dir);

/// Kernel variations at fixed base coordinates; X, Y are x-chart points.
cplx vary_v_alpha(const CurveModel& m, const BranchJetTable& t, int dir, int alpha, const LocalPoint& X);
cplx vary_bidifferential(const CurveModel& m, const BranchJetTable& t, int dir, const LocalPoint& X, const LocalPoint& Y);
cplx vary_log_prime_form(const CurveModel& m, const BranchJetTable& t, int dir, const LocalPoint& X, const LocalPoint& Y);

/// Residue formula for d ln tau / dA_gamma, with its two sums reported separately.
struct TauGradient {
    cplx value, branch_sum, zero_sum;
};
TauGradient tau_gradient(const CurveModel& m, const BranchJetTable& t, int gamma);

/// Chain rule applied to the defining equations: cycle integrals of B_reg/v (algebraic S_B) plus
/// residues at the zeros paired with polygon Abel images and endpoint corrections.
TauGradient tau_chain_rule(const CurveModel& m, const BranchJetTable& t, int gamma);

/// Multi-differentials on points given in their local parameters.
cplx q_multidiff(const CurveModel& m, const std::vector<LocalPoint>& z, const std::vector<cplx>& vz);
cplx r_multidiff(const CurveModel& m, const std::vector<LocalPoint>& z, const std::vector<cplx>& vz);

/// d Q_n / dA_gamma (or d R_n) at fixed base coordinates of the z: residues of Q_{n+1}(z, t)
/// (R_{n+1} with t before the last slot) at the branch points, minus the motion of the v(z_j)
/// denominators.
cplx hierarchy_variation(const CurveModel& m, const BranchJetTable& t, int gamma, const std::vector<LocalPoint>& z,
                         const std::vector<cplx>& vz, bool r_variant = false);
/// The residue of Q_{n+1}(z, t) / v(t) alone, for comparison.
cplx hierarchy_variation_literal(const CurveModel& m, const BranchJetTable& t, int gamma,
                                 const std::vector<LocalPoint>& z, const std::vector<cplx>& vz);

/// d^2 Omega_ab / dA_d dA_c by the closed formula at the branch points.
cplx period_hessian(const BranchJetTable& t, int a, int b, int c, int d);

}  // namespace speclab
