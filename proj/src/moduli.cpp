#include "speclab/moduli.hpp"

#include "speclab/numerics/linalg.hpp"

namespace speclab {

std::string CoordinateDirection::name() const {
    switch (kind) {
        case Kind::A:
            return "A_" + std::to_string(alpha + 1);
        case Kind::C:
        case Kind::C1:
            return "C_" + std::to_string(j + 1) + "^(" + std::to_string(s + 1) + ")," + std::to_string(ell);
    }
    return "?";
}

std::vector<CoordinateDirection> coordinate_list(const SpectralCurve& c) {
    std::vector<CoordinateDirection> out;
    for (int a = 0; a < c.genus(); ++a) out.push_back({CoordinateDirection::Kind::A, a});
    const auto& poles = c.spec.poles;
    for (int j = 0; j < static_cast<int>(poles.size()); ++j)
        for (int s = 0; s < 2; ++s)
            for (int l = 1; l <= poles[static_cast<std::size_t>(j)].k; ++l) {
                if (j == 0 && s == 0 && l == 1) continue;
                out.push_back({l == 1 ? CoordinateDirection::Kind::C1 : CoordinateDirection::Kind::C, -1, j, s, l});
            }
    return out;
}

cplx ModuliPoint::residue_sum() const {
    cplx s = dependent_residue;
    for (int i = 0; i < static_cast<int>(dirs.size()); ++i)
        if (dirs[static_cast<std::size_t>(i)].kind == CoordinateDirection::Kind::C1) s += z(i);
    return s;
}

ModuliPoint coordinates_of(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt) {
    ModuliPoint p;
    p.dirs = coordinate_list(c);
    p.z.resize(static_cast<int>(p.dirs.size()));
    const Differential v = v_differential(c);
    auto f = [&](cplx x, cplx w) { return v.odd_value(x, w); };
    const Eigen::MatrixXcd L = lasso_odd_integrals(c, f, opt);
    const int g = c.genus();
    for (int a = 0; a < g; ++a) p.z(a) = cycle_integral(hb.a[static_cast<std::size_t>(a)], L)(0);
    // ledger order: pole j, sheet s
    auto ledger = [&](int j, int s) -> const Singularity& { return v.ledger[static_cast<std::size_t>(2 * j + s)]; };
    p.dependent_residue = ledger(0, 0).coeff[0];
    for (int i = g; i < static_cast<int>(p.dirs.size()); ++i) {
        const auto& d = p.dirs[static_cast<std::size_t>(i)];
        p.z(i) = ledger(d.j, d.s).coeff[static_cast<std::size_t>(d.ell - 1)];
    }
    return p;
}

Eigen::VectorXcd coefficient_vector(const InstanceSpec& spec) {
    const int d1 = spec.max_degree(1) + 1, d2 = spec.max_degree(2) + 1;
    Eigen::VectorXcd q(d1 + d2);
    for (int m = 0; m < d1; ++m) q(m) = spec.numer[0][static_cast<std::size_t>(m)];
    for (int m = 0; m < d2; ++m) q(d1 + m) = spec.numer[1][static_cast<std::size_t>(m)];
    return q;
}

InstanceSpec with_coefficients(const InstanceSpec& spec, const Eigen::VectorXcd& q) {
    InstanceSpec s = spec;
    const int d1 = spec.max_degree(1) + 1, d2 = spec.max_degree(2) + 1;
    if (q.size() != d1 + d2) throw DomainError("with_coefficients: length mismatch");
    s.numer[0] = ComplexPoly(std::vector<cplx>(q.data(), q.data() + d1));
    s.numer[1] = ComplexPoly(std::vector<cplx>(q.data() + d1, q.data() + d1 + d2));
    return s;
}

Differential coefficient_tangent(const SpectralCurve& c, int index) {
    const int d1 = c.spec.max_degree(1) + 1, d2 = c.spec.max_degree(2) + 1;
    if (index < 0 || index >= d1 + d2) throw DomainError("coefficient_tangent: index out of range");
    std::vector<std::pair<cplx, int>> den;
    for (const auto& p : c.spec.poles) den.emplace_back(p.x, p.k);
    Differential d;
    if (index < d1) {
        // delta N_1 = x^m: (-x^m + N_1 x^m / w) / (2P)
        const ComplexPoly xm = ComplexPoly::monomial(index);
        d.name = "dN1_" + std::to_string(index);
        d.even = {xm * cplx(-0.5), den};
        d.odd = {c.spec.numer[0] * xm * cplx(0.5), den};
    } else {
        // delta N_2 = x^m: -x^m / (P w)
        const ComplexPoly xm = ComplexPoly::monomial(index - d1);
        d.name = "dN2_" + std::to_string(index - d1);
        d.odd = {xm * cplx(-1.0), den};
    }
    return d;
}

CoordJacobian coordinate_jacobian(const SpectralCurve& c, const HomologyBasis& hb, const QuadOptions& opt) {
    const auto dirs = coordinate_list(c);
    const int n = static_cast<int>(dirs.size());
    const int nq = static_cast<int>(coefficient_vector(c.spec).size());
    const int g = c.genus();
    CoordJacobian out;
    out.J.resize(n, nq);
    std::vector<Differential> tang;
    for (int k = 0; k < nq; ++k) tang.push_back(coefficient_tangent(c, k));
    auto f = [&](cplx x, cplx w) {
        Eigen::VectorXcd r(nq);
        for (int k = 0; k < nq; ++k) r(k) = tang[static_cast<std::size_t>(k)].odd_value(x, w);
        return r;
    };
    const Eigen::MatrixXcd L = lasso_odd_integrals(c, f, opt);
    for (int a = 0; a < g; ++a) out.J.row(a) = cycle_integral(hb.a[static_cast<std::size_t>(a)], L);
    for (int k = 0; k < nq; ++k) {
        for (int i = g; i < n; ++i) {
            const auto& d = dirs[static_cast<std::size_t>(i)];
            const SurfacePoint p{c.spec.poles[static_cast<std::size_t>(d.j)].x, d.s};
            const Laurent l = tang[static_cast<std::size_t>(k)].in_chart(regular_chart(c, p.x, c.w_at(p)), d.ell + 2);
            out.J(i, k) = l.coeff(-d.ell);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.J);
    const auto sv = svd.singularValues();
    out.condition = sv(0) / sv(sv.size() - 1);
    return out;
}

Differential direction_differential(const SpectralCurve& c, const PeriodData& pd, const CoordinateDirection& d,
                                    const QuadOptions& opt) {
    switch (d.kind) {
        case CoordinateDirection::Kind::A:
            return pd.v_alpha(d.alpha);
        case CoordinateDirection::Kind::C:
            return second_kind(c, pd, d.j, d.s, d.ell, opt);
        case CoordinateDirection::Kind::C1:
            if (d.j == 0 && d.s == 0) throw DomainError("direction_differential: C_1^(1),1 is dependent");
            return third_kind(c, pd, d.j, d.s, opt);
    }
    throw DomainError("direction_differential: unknown kind");
}

// ---------------------------------------------------------------- navigation

ModuliChart::ModuliChart(const SpectralCurve& base, const QuadOptions& opt) : base_(base), opt_(opt) {
    hb_ = homology_basis(base_);
    frame_ = base_.frame();
    z0_ = coordinates_of(base_, hb_, opt_);
    jac_ = coordinate_jacobian(base_, hb_, opt_);
    q0_ = coefficient_vector(base_.spec);
    if (jac_.J.rows() != jac_.J.cols()) throw NumericalError("ModuliChart: coordinate Jacobian is not square");
}

SpectralCurve ModuliChart::step_to(const Eigen::VectorXcd& target, StepReport* rep) const {
    const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    Eigen::VectorXcd q = q0_;
    Eigen::VectorXcd z = z0_.z;
    const auto lu = jac_.J.fullPivLu();
    SpectralCurve cur = base_, best = base_;
    double prev = std::numeric_limits<double>::infinity(), best_res = prev;
    for (int it = 0; it < 40; ++it) {
        const Eigen::VectorXcd r = target - z;
        const double res = r.cwiseAbs().maxCoeff();
        if (res < best_res) {
            best_res = res;
            best = cur;
            if (rep) {
                rep->iterations = it;
                rep->residual = res;
            }
        }
        // iterate to the evaluation floor: a residual left at 1e-12 becomes FD noise of 1e-12 / eps
        if (res <= 1e-15 * scale) return cur;
        if (it > 1 && res > 0.5 * prev) {
            if (best_res <= 1e-12 * scale) return best;
            if (it > 3 && best_res <= 1e-11 * scale) return best;  // stagnated at the quadrature floor
            if (it > 3) throw NumericalError("step_to: Newton iteration diverged (residual " + std::to_string(res) + ")");
        }
        prev = res;
        q += lu.solve(r);
        cur = build_surface(with_coefficients(base_.spec, q), &frame_);
        z = coordinates_of(cur, hb_, opt_).z;
    }
    if (best_res <= 1e-12 * scale) return best;
    throw NumericalError("step_to: no convergence");
}

SpectralCurve ModuliChart::step(int coord, cplx dz, StepReport* rep) const {
    Eigen::VectorXcd t = z0_.z;
    t(coord) += dz;
    return step_to(t, rep);
}

}  // namespace speclab
