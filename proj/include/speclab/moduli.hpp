#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "speclab/differentials.hpp"

namespace speclab {

/// One of the independent coordinates A_alpha, C_j^{(s),l} (l >= 2), C_j^{(s),1}.
struct CoordinateDirection {
    enum class Kind { A, C, C1 };
    Kind kind = Kind::A;
    int alpha = -1;
    int j = -1, s = -1, ell = -1;

    std::string name() const;
};

/// A_1..A_g, then C_j^{(s),l} for each pole j, sheet s, order l, skipping the dependent C_1^{(1),1}.
std::vector<CoordinateDirection> coordinate_list(const SpectralCurve& c);

struct ModuliPoint {
    Eigen::VectorXcd z;
    cplx dependent_residue;  // C_1^{(1),1}
    /// sum of all C^{(s),1}, the dependent one included
    cplx residue_sum() const;
    std::vector<CoordinateDirection> dirs;
};

/// A by quadrature over the a-cycles, C from the Laurent expansion of v at each pole in x - y_j.
ModuliPoint coordinates_of(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt = {});

/// Raw coefficients: N_1 (degree <= K - 2) followed by N_2 (degree <= 2K - 4).
Eigen::VectorXcd coefficient_vector(const InstanceSpec& spec);
InstanceSpec with_coefficients(const InstanceSpec& spec, const Eigen::VectorXcd& q);

/// delta v for a unit change of raw coefficient 'index' (ordering of coefficient_vector).
Differential coefficient_tangent(const SpectralCurve& c, int index);

struct CoordJacobian {
    Eigen::MatrixXcd J;  // d(coordinates) / d(coefficients)
    double condition = 0.0;
};
CoordJacobian coordinate_jacobian(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt = {});

/// Direction differential of Prop. "dv/dz": v_gamma, w_j^{(s),l} or u_j^{(s)}.
Differential direction_differential(const SpectralCurve& c, const PeriodData& pd, const CoordinateDirection& d,
                                    const QuadOptions& opt = {});

struct StepReport {
    int iterations = 0;
    double residual = 0.0;
};

struct FdResult {
    Eigen::VectorXcd value;   // Richardson combination
    Eigen::VectorXcd coarse;  // central difference at eps
    Eigen::VectorXcd fine;    // central difference at eps / 2
    double gap = 0.0;         // |coarse - fine|
    double eps = 0.0;
};

/// Chart around a base curve: coordinates, Jacobian, Newton navigation, finite differences.
class ModuliChart {
public:
    explicit ModuliChart(const SpectralCurve& base, const QuadOptions& opt = {});

    const SpectralCurve& base() const { return base_; }
    const ModuliPoint& point() const { return z0_; }
    const CoordJacobian& jacobian() const { return jac_; }
    int dim() const { return static_cast<int>(z0_.z.size()); }

    /// Newton iteration on the raw coefficients until the coordinates match target.
    SpectralCurve step_to(const Eigen::VectorXcd& target, StepReport* rep = nullptr) const;
    SpectralCurve step(int coord, cplx dz, StepReport* rep = nullptr) const;
    double scale(int coord) const { return std::max(1.0, std::abs(z0_.z(coord))); }

    /// Central differences of f (curve -> vector) in coordinate 'coord', with one Richardson level.
    template <typename F>
    FdResult fd(int coord, const F& f, double eps_rel = 1e-4) const {
        FdResult r;
        r.eps = eps_rel * scale(coord);
        auto central = [&](double e) {
            const Eigen::VectorXcd fp = f(step(coord, e));
            const Eigen::VectorXcd fm = f(step(coord, -e));
            return Eigen::VectorXcd((fp - fm) / (2.0 * e));
        };
        r.coarse = central(r.eps);
        r.fine = central(0.5 * r.eps);
        r.value = (4.0 * r.fine - r.coarse) / 3.0;
        r.gap = (r.coarse - r.fine).cwiseAbs().maxCoeff();
        return r;
    }

private:
    SpectralCurve base_;
    QuadOptions opt_;
    HomologyBasis hb_;
    SurfaceFrame frame_;
    ModuliPoint z0_;
    CoordJacobian jac_;
    Eigen::VectorXcd q0_;
};

}  // namespace speclab
