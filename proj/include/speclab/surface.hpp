#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "speclab/instance.hpp"
#include "speclab/numerics/contour.hpp"
#include "speclab/numerics/quadrature.hpp"

namespace speclab {

/// A point of the cover: base coordinate plus the sheet reached by the canonical path.
/// For a branch point the sheet is 0.
struct SurfacePoint {
    cplx x;
    int sheet = 0;
};

/// One piece of a path on the double cover with its own analytic formula for w:
///   Line / Arc:  w(x) = w_anchor * prod_j sqrt((x - e_j) / (anchor - e_j)),
///                with the factor of an encircled branch point replaced by exp(i dtheta / 2);
///   IntoBranch:  x = e + (q - e)(1 - s)^2, w = w_anchor (1 - s) prod_{j != k} sqrt(...).
/// Values are for the + lift; the other lift negates w.
struct PathPiece {
    enum class Kind { Line, Arc, IntoBranch };
    Kind kind = Kind::Line;
    Segment seg;
    cplx anchor;
    cplx w_anchor;
    int center_branch = -1;  // Arc around / IntoBranch towards this branch point

    cplx point(double s) const;
    cplx dxds(double s) const;
};

struct SheetPath {
    std::vector<PathPiece> pieces;
    cplx start, end;
    cplx w_start, w_end;
    Contour contour() const;  // geometry only, for dumps
};

struct SurfaceFrame {
    cplx x0;
    cplx w0;
    std::vector<cplx> branch_order;
    std::vector<SurfacePoint> base_zeros;
    SurfacePoint x_r;
};

struct SingularPoint {
    enum class Kind { Branch, Pole, Zero };
    Kind kind;
    cplx x;
    double safety = 0.0;  // detour radius
    int index = 0;        // within its kind
};

/// Spectral cover over the sphere. The hyperelliptic fields are filled for n = 2.
class SpectralCurve {
public:
    InstanceSpec spec;
    DerivedCounts counts;
    GenericityReport genericity;
    ComplexPoly P;  // prod (x - y_j)^{k_j}
    ComplexPoly D;  // w^2 = D for n = 2; general discriminant otherwise

    cplx x0;
    std::vector<cplx> phi0;               // sheet values of phi at x0, sheet order
    std::vector<cplx> branch;             // lasso order
    std::vector<SingularPoint> singular;  // branch points, poles, base zeros
    std::vector<std::vector<int>> monodromy;  // permutation per lasso

    // n = 2
    cplx w0;  // w on sheet 0 at x0
    std::vector<SurfacePoint> zeros;  // D_br (sheet 0) followed by D_0
    int n_branch_zeros = 0;
    int r_index = 0;                  // index of x_r in zeros
    std::vector<SheetPath> legs;      // x0 -> entry point of each lasso circle
    std::vector<SheetPath> circles;   // ccw circle for each lasso, + lift at entry

    int genus() const { return counts.genus; }
    int num_branch() const { return static_cast<int>(branch.size()); }
    const SurfacePoint& x_r() const { return zeros[static_cast<std::size_t>(r_index)]; }
    SurfaceFrame frame() const;

    /// Distance from x to the nearest branch point other than 'skip'.
    double branch_distance(cplx x, int skip = -1) const;
    /// Distance from x to the nearest singular point.
    double singular_distance(cplx x) const;

    /// Continuation of w from the + lift at 'anchor' (value w_anchor) to x, valid while
    /// |x - anchor| < min_j |anchor - e_j|.
    cplx continue_w(cplx anchor, cplx w_anchor, cplx x) const;

    /// Straight path from x0 to z with arc detours around singular points; routes into the
    /// disk of a singular point if z lies inside it. w follows the + lift from w0.
    SheetPath straight_path(cplx z) const;
    /// Canonical path from (x0, sheet 0) to P: sheet 1 first runs lasso 0. Each step is a
    /// stored path traversed on the lift 'lift' (+1/-1) in direction 'orient' (+1/-1).
    struct RouteStep {
        const SheetPath* path;
        int lift;
        int orient;
    };
    std::vector<RouteStep> canonical_route(const SurfacePoint& p, SheetPath& scratch) const;
    /// w at a surface point along the canonical path.
    cplx w_at(const SurfacePoint& p) const;
    /// sheet index of phi at x for w value (n = 2)
    cplx phi(cplx x, cplx w) const;

    /// Branch chart at branch point k: x = e + t^2, w = t * G(t). G(0) is fixed so that the
    /// chart matches the + lift at the lasso entry point for t = sqrt(q - e).
    cplx branch_chart_G0(int k) const;
    cplx branch_chart_w(int k, cplx t) const;

    std::string dump_json() const;

private:
    friend SpectralCurve build_surface(const InstanceSpec&, const SurfaceFrame*);
    std::vector<cplx> g0_;
};

/// Build the cover. With a frame, the basepoint, sheet labels, lasso order and zero
/// labelling are transported from a reference curve by nearest-neighbour matching.
SpectralCurve build_surface(const InstanceSpec& spec, const SurfaceFrame* frame = nullptr);

/// Integral of f(x, w) dx along a path on the lift with sign sigma. f returns a complex
/// value or an Eigen vector.
template <typename F>
auto path_integral(const SpectralCurve& c, const SheetPath& path, int sigma, const F& f, const QuadOptions& opt = {});

/// Integral of f along the canonical route from (x0, sheet 0) to p.
template <typename F>
auto route_integral(const SpectralCurve& c, const SurfacePoint& p, const F& f, const QuadOptions& opt = {});

// -------- general-n continuation

struct ContinuationLog {
    std::vector<cplx> x;
    std::vector<std::vector<cplx>> phi;  // sheet-ordered values per accepted step
    std::vector<int> end_sheet;          // end_sheet[s] = label at the end of the sheet started as s
};

/// Predictor-corrector tracking of all n roots of psi^n + N_1 psi^{n-1} + ... + N_n = 0
/// (psi = P phi) along a contour starting from the sheet ordering at its start point.
ContinuationLog continue_sheets(const SpectralCurve& c, const Contour& path, const std::vector<cplx>& start_phi);

/// Lasso geometry as a plain contour: x0 -> entry, ccw circle, back.
Contour lasso_contour(const SpectralCurve& c, int k);

// -------- homology (n = 2)

/// A closed cycle as a word of lassos, starting on the + lift.
struct Cycle {
    std::vector<int> word;
};

struct HomologyBasis {
    std::vector<Cycle> a, b;
    int b_sign = 1;  // applied to b-periods so that Im Omega > 0
};

HomologyBasis homology_basis(const SpectralCurve& c);
/// Same construction after a cyclic shift of the lasso order (used to test covariance).
HomologyBasis homology_basis_shifted(const SpectralCurve& c, int shift);

/// Per-lasso integrals of an odd form (f(x, -w) = -f(x, w)) on the + lift. Columns follow
/// the components of f; rows follow the lassos.
template <typename F>
Eigen::MatrixXcd lasso_odd_integrals(const SpectralCurve& c, const F& f, const QuadOptions& opt = {});

/// Cycle integral from per-lasso odd integrals (rows of L).
Eigen::RowVectorXcd cycle_integral(const Cycle& cyc, const Eigen::MatrixXcd& L);

/// Per-lasso integrals of a general form, starting on either lift.
struct LassoTable {
    Eigen::MatrixXcd plus, minus;
};
template <typename F>
LassoTable lasso_integrals(const SpectralCurve& c, const F& f, const QuadOptions& opt = {});
Eigen::RowVectorXcd cycle_integral(const Cycle& cyc, const LassoTable& L);

/// Permutation of sheets after continuing along a contour (n = 2 uses w tracking).
std::vector<int> monodromy_of(const SpectralCurve& c, const Contour& loop);

}  // namespace speclab

#include "speclab/surface_impl.hpp"
