#include "speclab/harness.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "speclab/library.hpp"
#include "speclab/variations.hpp"

namespace speclab {

namespace {

using Clock = std::chrono::steady_clock;
using Vec = Eigen::VectorXcd;

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }
nlohmann::ordered_json ocjson(cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

cplx agm(cplx a, cplx b) {
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * std::abs(a); ++i) {
        const cplx an = 0.5 * (a + b);
        cplx bn = std::sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
        a = an;
        b = bn;
    }
    return a;
}

// SL(2, Z) reduction to the fundamental domain
cplx reduce_modular(cplx tau) {
    for (int i = 0; i < 100; ++i) {
        tau -= std::round(tau.real());
        if (std::abs(tau) < 1.0 - 1e-14) tau = -1.0 / tau;
        else break;
    }
    return tau;
}

/// Everything the suites evaluate on one instance, built lazily.
class Context {
public:
    explicit Context(const std::string& instance) : spec_(load_instance(instance)), curve_(build_surface(spec_)) {}

    const InstanceSpec& spec() const { return spec_; }
    const SpectralCurve& curve() const { return curve_; }
    const CurveModel& model() {
        if (!model_) model_.emplace(curve_);
        return *model_;
    }
    const BranchJetTable& jets() {
        if (!jets_) jets_.emplace(branch_jets(model()));
        return *jets_;
    }
    const ModuliChart& chart() {
        if (!chart_) chart_.emplace(curve_);
        return *chart_;
    }
    const std::vector<SurfacePoint>& points() {
        if (pts_.empty()) pts_ = sample_points(curve_, 5);
        return pts_;
    }
    CurveModel perturbed(const SpectralCurve& cc) {
        return CurveModel(cc, model().quad(), &model().periods().basis, &model().theta_params().delta);
    }
    int genus() const { return curve_.genus(); }
    int find_coordinate(const std::string& name) {
        const auto& dirs = chart().point().dirs;
        for (int i = 0; i < static_cast<int>(dirs.size()); ++i)
            if (dirs[static_cast<std::size_t>(i)].name() == name) return i;
        std::string all;
        for (const auto& d : dirs) all += (all.empty() ? "" : ", ") + d.name();
        throw DomainError("unknown coordinate '" + name + "'; available: " + all);
    }
    bool residue_free() {
        const ModuliPoint& z = chart().point();
        double s = std::abs(z.dependent_residue);
        for (int i = 0; i < static_cast<int>(z.dirs.size()); ++i)
            if (z.dirs[static_cast<std::size_t>(i)].kind == CoordinateDirection::Kind::C1) s += std::abs(z.z(i));
        return s < 1e-10;
    }

private:
    InstanceSpec spec_;
    SpectralCurve curve_;
    std::optional<CurveModel> model_;
    std::optional<BranchJetTable> jets_;
    std::optional<ModuliChart> chart_;
    std::vector<SurfacePoint> pts_;
};

// evaluation pairs for the kernel checks
const std::vector<std::pair<int, int>> kPairs{{0, 1}, {1, 2}, {2, 3}};

/// A quantity on perturbed curves together with its predicted derivative in one coordinate.
struct Functional {
    std::string name, paper_eq;
    std::function<Vec(const SpectralCurve&)> eval;
    std::function<Vec()> formula;
    std::vector<std::string> labels;
    bool logarithmic = false;  // difference ln(f+ / f-) instead of f+ - f-
};

cplx v_at(const SpectralCurve& c, const SurfacePoint& p) {
    const cplx w = c.w_at(p);
    return (w - c.spec.numer[0](p.x)) / (2.0 * c.P(p.x));
}

std::string idx(std::initializer_list<int> v) {
    std::string s;
    for (int i : v) s += std::to_string(i + 1);
    return s;
}

Functional make_functional(Context& ctx, const std::string& name, int dir) {
    const int g = ctx.genus();
    const auto& dirs = ctx.chart().point().dirs;
    const bool a_dir = dirs[static_cast<std::size_t>(dir)].kind == CoordinateDirection::Kind::A;
    Functional f;
    f.name = name;
    if (name == "v") {
        f.paper_eq = "dv/dz = h_z (coordinate vector fields)";
        const auto pts = ctx.points();
        f.eval = [pts](const SpectralCurve& cc) {
            Vec out(static_cast<int>(pts.size()));
            for (int k = 0; k < out.size(); ++k) out(k) = v_at(cc, pts[static_cast<std::size_t>(k)]);
            return out;
        };
        f.formula = [&ctx, pts, dir]() {
            const Differential& h = ctx.jets().h[static_cast<std::size_t>(dir)];
            Vec out(static_cast<int>(pts.size()));
            for (int k = 0; k < out.size(); ++k)
                out(k) = h(pts[static_cast<std::size_t>(k)].x, ctx.curve().w_at(pts[static_cast<std::size_t>(k)]));
            return out;
        };
        for (std::size_t k = 0; k < pts.size(); ++k) f.labels.push_back("x" + std::to_string(k + 1));
    } else if (name == "branch-integrals") {
        f.paper_eq = "d/dz int_{x_r}^{x_i} v = int h + endpoint correction";
        const SpectralCurve& c = ctx.curve();
        std::vector<int> ids;
        for (int i = 0; i < c.n_branch_zeros; ++i)
            if (i != c.r_index) ids.push_back(i);
        auto path_v = [](const SpectralCurve& cc, const Differential& d, const SurfacePoint& p) {
            return route_integral(cc, p, [&](cplx x, cplx w) { return d(x, w); });
        };
        f.eval = [ids, path_v](const SpectralCurve& cc) {
            const Differential v = v_differential(cc);
            const cplx base = path_v(cc, v, cc.x_r());
            Vec out(static_cast<int>(ids.size()));
            for (int k = 0; k < out.size(); ++k) out(k) = path_v(cc, v, cc.zeros[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])]) - base;
            return out;
        };
        f.formula = [&ctx, ids, dir, path_v]() {
            const SpectralCurve& c = ctx.curve();
            const auto& t = ctx.jets();
            const Differential& h = t.h[static_cast<std::size_t>(dir)];
            const cplx hr = path_v(c, h, c.x_r());
            const bool r_branch = c.r_index < c.n_branch_zeros;
            Vec out(static_cast<int>(ids.size()));
            for (int k = 0; k < out.size(); ++k) {
                const int i = ids[static_cast<std::size_t>(k)];
                out(k) = path_v(c, h, c.zeros[static_cast<std::size_t>(i)]) - hr + endpoint_correction(t, dir, i);
                if (r_branch) out(k) -= endpoint_correction(t, dir, c.r_index);
            }
            return out;
        };
        for (int i : ids) f.labels.push_back("x_r->x" + std::to_string(i + 1));
    } else if (name == "omega") {
        f.paper_eq = "dOmega_ab/dz = -2 pi i sum_i res v_a v_b h / (dxi dy)";
        const HomologyBasis hb = ctx.model().periods().basis;
        f.eval = [hb, g](const SpectralCurve& cc) {
            const PeriodData pd = normalized_basis(cc, hb);
            Vec out(g * (g + 1) / 2);
            int k = 0;
            for (int a = 0; a < g; ++a)
                for (int b = a; b < g; ++b) out(k++) = pd.Omega(a, b);
            return out;
        };
        f.formula = [&ctx, g, dir]() {
            const PeriodVariation pv = vary_period_matrix(ctx.model(), ctx.jets(), dir);
            Vec out(g * (g + 1) / 2);
            int k = 0;
            for (int a = 0; a < g; ++a)
                for (int b = a; b < g; ++b) out(k++) = pv.single(a, b);
            return out;
        };
        for (int a = 0; a < g; ++a)
            for (int b = a; b < g; ++b) f.labels.push_back("Omega_" + idx({a, b}));
    } else if (name == "v-alpha" || name == "bidifferential" || name == "log-prime-form") {
        const auto pts = ctx.points();
        const int kind = name == "v-alpha" ? 0 : name == "bidifferential" ? 1 : 2;
        f.paper_eq = kind == 0   ? "dv_a(x)/dz = sum_i corr_i res v_a(t) B(t,x) / v(t)"
                     : kind == 1 ? "dB(x,y)/dz = sum_i corr_i res B(x,t) B(t,y) / v(t)"
                                 : "d ln E(x,y)/dz = 1/2 sum_i corr_i res [d_t ln(E(x,t)/E(y,t))]^2 / v(t)";
        f.logarithmic = kind == 2;
        auto values = [pts, kind, g](const CurveModel& m) {
            std::vector<cplx> out;
            for (const auto& [i, k] : kPairs) {
                const LocalPoint X = m.point(pts[static_cast<std::size_t>(i)]);
                const LocalPoint Y = m.point(pts[static_cast<std::size_t>(k)]);
                if (kind == 0)
                    for (int a = 0; a < g; ++a) out.push_back(X.g(a));
                else if (kind == 1)
                    out.push_back(m.bidifferential(X, Y));
                else
                    out.push_back(m.prime_form(X, Y));
            }
            return Vec(Eigen::Map<Vec>(out.data(), static_cast<int>(out.size())));
        };
        f.eval = [&ctx, values](const SpectralCurve& cc) { return values(ctx.perturbed(cc)); };
        f.formula = [&ctx, pts, kind, g, dir]() {
            const CurveModel& m = ctx.model();
            const auto& t = ctx.jets();
            std::vector<cplx> out;
            for (const auto& [i, k] : kPairs) {
                const LocalPoint X = m.point(pts[static_cast<std::size_t>(i)]);
                const LocalPoint Y = m.point(pts[static_cast<std::size_t>(k)]);
                if (kind == 0)
                    for (int a = 0; a < g; ++a) out.push_back(vary_v_alpha(m, t, dir, a, X));
                else if (kind == 1)
                    out.push_back(vary_bidifferential(m, t, dir, X, Y));
                else
                    out.push_back(vary_log_prime_form(m, t, dir, X, Y));
            }
            return Vec(Eigen::Map<Vec>(out.data(), static_cast<int>(out.size())));
        };
        for (const auto& [i, k] : kPairs) {
            const std::string at = "(x" + std::to_string(i + 1) + ",x" + std::to_string(k + 1) + ")";
            if (kind == 0)
                for (int a = 0; a < g; ++a) f.labels.push_back("v_" + std::to_string(a + 1) + at);
            else
                f.labels.push_back((kind == 1 ? "B" : "lnE") + at);
        }
    } else if (name == "omega-gradient") {
        if (!a_dir) throw DomainError("functional omega-gradient needs an A-coordinate");
        f.paper_eq = "d^2 Omega_ab / dA_c dA_d (branch-point double sum)";
        f.eval = [&ctx, g](const SpectralCurve& cc) {
            const CurveModel mm = ctx.perturbed(cc);
            const auto tt = branch_jets(mm);
            Vec out(g * g * g);
            for (int d = 0; d < g; ++d) {
                const PeriodVariation pv = vary_period_matrix(mm, tt, d);
                for (int a = 0; a < g; ++a)
                    for (int b = 0; b < g; ++b) out((d * g + b) * g + a) = pv.single(a, b);
            }
            return out;
        };
        f.formula = [&ctx, g, dir]() {
            Vec out(g * g * g);
            for (int d = 0; d < g; ++d)
                for (int a = 0; a < g; ++a)
                    for (int b = 0; b < g; ++b) out((d * g + b) * g + a) = period_hessian(ctx.jets(), a, b, dir, d);
            return out;
        };
        for (int d = 0; d < g; ++d)
            for (int b = 0; b < g; ++b)
                for (int a = 0; a < g; ++a) f.labels.push_back("dOmega_" + idx({a, b}) + "/dA_" + std::to_string(d + 1));
    } else if (name == "b-periods") {
        if (!a_dir) throw DomainError("functional b-periods needs an A-coordinate");
        f.paper_eq = "dB_c/dA_a = Omega_ac";
        const HomologyBasis hb = ctx.model().periods().basis;
        f.eval = [hb](const SpectralCurve& cc) { return b_periods(cc, normalized_basis(cc, hb), v_differential(cc)); };
        f.formula = [&ctx, dir]() { return Vec(ctx.model().periods().Omega.row(dir).transpose()); };
        for (int c = 0; c < g; ++c) f.labels.push_back("B_" + std::to_string(c + 1));
    } else if (name == "q2") {
        if (!a_dir) throw DomainError("functional q2 needs an A-coordinate");
        f.paper_eq = "dQ_2/dA_c = sum_i corr_i res Q_3(z, t) - Q_2 sum_j v_c(z_j)/v(z_j)";
        const auto pts = ctx.points();
        auto values = [pts](const CurveModel& m) {
            Vec out(static_cast<int>(kPairs.size()));
            for (int k = 0; k < out.size(); ++k) {
                const LocalPoint X = m.point(pts[static_cast<std::size_t>(kPairs[static_cast<std::size_t>(k)].first)]);
                const LocalPoint Y = m.point(pts[static_cast<std::size_t>(kPairs[static_cast<std::size_t>(k)].second)]);
                out(k) = q_multidiff(m, {X, Y}, {m.v()(X.x, X.w), m.v()(Y.x, Y.w)});
            }
            return out;
        };
        f.eval = [&ctx, values](const SpectralCurve& cc) { return values(ctx.perturbed(cc)); };
        f.formula = [&ctx, pts, dir]() {
            const CurveModel& m = ctx.model();
            const int gam = ctx.chart().point().dirs[static_cast<std::size_t>(dir)].alpha;
            Vec out(static_cast<int>(kPairs.size()));
            for (int k = 0; k < out.size(); ++k) {
                const LocalPoint X = m.point(pts[static_cast<std::size_t>(kPairs[static_cast<std::size_t>(k)].first)]);
                const LocalPoint Y = m.point(pts[static_cast<std::size_t>(kPairs[static_cast<std::size_t>(k)].second)]);
                out(k) = hierarchy_variation(m, ctx.jets(), gam, {X, Y}, {m.v()(X.x, X.w), m.v()(Y.x, Y.w)});
            }
            return out;
        };
        for (const auto& [i, k] : kPairs) f.labels.push_back("Q2(x" + std::to_string(i + 1) + ",x" + std::to_string(k + 1) + ")");
    } else {
        std::string all;
        for (const auto& s : sweep_functionals()) all += (all.empty() ? "" : ", ") + s;
        throw DomainError("unknown functional '" + name + "'; available: " + all);
    }
    return f;
}

/// Central difference; 'noise' receives the Newton residual of the two builds amplified by 1/e.
Vec central_difference(Context& ctx, const Functional& f, int dir, double e, double* noise = nullptr) {
    StepReport rp, rm;
    const Vec p = f.eval(ctx.chart().step(dir, e, &rp));
    const Vec m = f.eval(ctx.chart().step(dir, -e, &rm));
    Vec out(p.size());
    if (!f.logarithmic) out = (p - m) / (2.0 * e);
    else
        for (int k = 0; k < p.size(); ++k) out(k) = std::log(p(k) / m(k)) / (2.0 * e);
    if (noise) {
        // coordinate residual times the size of the derivative, plus rounding of f itself
        const double fs = std::max(p.cwiseAbs().maxCoeff(), 1.0);
        *noise = (std::max(rp.residual, rm.residual) * std::max(1.0, out.cwiseAbs().maxCoeff()) + 1e-14 * fs) / e;
    }
    return out;
}

FdResult richardson(Context& ctx, const Functional& f, int dir, double eps_rel) {
    FdResult r;
    r.eps = eps_rel * ctx.chart().scale(dir);
    r.coarse = central_difference(ctx, f, dir, r.eps);
    r.fine = central_difference(ctx, f, dir, 0.5 * r.eps);
    r.value = (4.0 * r.fine - r.coarse) / 3.0;
    r.gap = (r.coarse - r.fine).cwiseAbs().maxCoeff();
    return r;
}

class SuiteRun {
public:
    SuiteRun(Report& r, const SuiteOptions& o) : rep_(r), opt_(o), last_(Clock::now()) {}

    void check(const std::string& group, const std::string& name, const std::string& eq, cplx lhs, cplx rhs,
               double tol, bool gating = true) {
        CheckResult c = make(group, name, eq, lhs, rhs, tol, gating);
        c.abs_err = std::abs(lhs - rhs);
        const double s = std::abs(rhs);
        c.rel_err = s > 0.0 ? c.abs_err / s : (c.abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        c.pass = std::isfinite(c.rel_err) && c.rel_err <= c.tol;
        push(std::move(c));
    }
    /// Quantities whose natural value is 0 (residual norms, symmetry defects).
    void check_abs(const std::string& group, const std::string& name, const std::string& eq, cplx lhs, cplx rhs,
                   double tol, bool gating = true) {
        CheckResult c = make(group, name, eq, lhs, rhs, tol, gating);
        c.absolute = true;
        c.abs_err = std::abs(lhs - rhs);
        c.rel_err = c.abs_err / std::max(1.0, std::abs(rhs));
        c.pass = std::isfinite(c.abs_err) && c.abs_err <= c.tol;
        push(std::move(c));
    }
    void check_flag(const std::string& group, const std::string& name, const std::string& eq, double value, bool ok,
                    const std::string& note) {
        CheckResult c = make(group, name, eq, value, 0.0, 0.0, true);
        c.absolute = true;
        c.pass = ok;
        c.note = note;
        push(std::move(c));
    }
    void fd_checks(Context& ctx, const std::string& group, const Functional& f, int dir, double tol,
                   bool gating = true) {
        const FdResult fd = richardson(ctx, f, dir, opt_.eps_rel);
        const Vec pred = f.formula();
        const std::string dn = ctx.chart().point().dirs[static_cast<std::size_t>(dir)].name();
        for (int k = 0; k < pred.size(); ++k)
            check(group, f.name + " " + f.labels[static_cast<std::size_t>(k)] + " d/d" + dn, f.paper_eq, fd.value(k),
                  pred(k), tol, gating);
    }

private:
    CheckResult make(const std::string& group, const std::string& name, const std::string& eq, cplx lhs, cplx rhs,
                     double tol, bool gating) {
        CheckResult c;
        c.group = group;
        c.name = name;
        c.paper_eq = eq;
        c.lhs = lhs;
        c.rhs = rhs;
        c.gating = gating;
        c.tol = (gating && opt_.tol) ? *opt_.tol : tol;
        return c;
    }
    void push(CheckResult c) {
        const auto now = Clock::now();
        c.seconds = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        rep_.checks.push_back(std::move(c));
    }
    Report& rep_;
    const SuiteOptions& opt_;
    Clock::time_point last_;
};

// ---------------------------------------------------------------- suites

void suite_surface(Context& ctx, SuiteRun& run) {
    const PeriodData& pd = ctx.model().periods();
    const int g = pd.genus();
    const char* eq = "Riemann bilinear relations";
    run.check_abs("riemann", "Omega symmetric", eq, (pd.Omega - pd.Omega.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.Omega.imag());
    const double lmin = es.eigenvalues().minCoeff();
    run.check_flag("riemann", "Im Omega positive definite", eq, lmin, lmin > 0.0, "smallest eigenvalue of Im Omega");
    for (int al = 0; al < g; ++al) {
        const Vec a = a_periods(ctx.curve(), pd, pd.v_alpha(al));
        for (int be = 0; be < g; ++be)
            run.check_abs("riemann", "a-period " + idx({be}) + " of v_" + idx({al}), "a-normalization", a(be),
                          al == be ? 1.0 : 0.0, 1e-10);
    }
    if (ctx.spec().label == "ell4" && g == 1 && ctx.curve().num_branch() == 4) {
        const auto& e = ctx.curve().branch;
        const cplx lambda = (e[0] - e[1]) * (e[2] - e[3]) / ((e[0] - e[2]) * (e[1] - e[3]));
        const cplx tau = cplx(0, 1) * agm(1.0, std::sqrt(1.0 - lambda)) / agm(1.0, std::sqrt(lambda));
        run.check_abs("riemann", "Omega against the AGM period ratio", "elliptic period ratio (AGM)",
                      reduce_modular(pd.Omega(0, 0)), reduce_modular(tau), 1e-9);
    }
}

void suite_dm_cubic(Context& ctx, SuiteRun& run) {
    const int g = ctx.genus();
    const int dim = ctx.chart().dim();
    const auto& dirs = ctx.chart().point().dirs;
    const auto& t = ctx.jets();
    Eigen::MatrixXcd euler = Eigen::MatrixXcd::Zero(g, g);
    std::vector<Eigen::MatrixXcd> dO(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        run.fd_checks(ctx, "vector-fields", make_functional(ctx, "v", d), d, 1e-5);
        run.fd_checks(ctx, "endpoint", make_functional(ctx, "branch-integrals", d), d, 1e-5);
        for (int i = 0; i < static_cast<int>(t.jets.size()); ++i)
            run.check("endpoint", "correction at x" + std::to_string(i + 1) + " under xi -> 2 xi + xi^3, " + dirs[static_cast<std::size_t>(d)].name(),
                      "coordinate independence of the endpoint correction",
                      endpoint_correction(t, d, i, ComplexPoly({0.0, 2.0, 0.0, 1.0})), endpoint_correction(t, d, i), 1e-8);
        run.fd_checks(ctx, "dm-cubic", make_functional(ctx, "omega", d), d, 1e-5);
        // both residue forms; vary_period_matrix throws above 1e-9, so rebuild the comparison here
        PeriodVariation pv;
        try {
            pv = vary_period_matrix(ctx.model(), t, d);
        } catch (const NumericalError& e) {
            run.check_flag("dm-cubic", "pairing vs single residue form, " + dirs[static_cast<std::size_t>(d)].name(),
                           "pairing form = single-residue form", 1.0, false, e.what());
            continue;
        }
        dO[static_cast<std::size_t>(d)] = pv.single;
        const double sc = std::max(1.0, pv.single.cwiseAbs().maxCoeff());
        run.check_abs("dm-cubic", "pairing vs single residue form, " + dirs[static_cast<std::size_t>(d)].name(),
                      "pairing form = single-residue form", (pv.pairing - pv.single).cwiseAbs().maxCoeff() / sc, 0.0, 1e-9);
        euler += ctx.chart().point().z(d) * pv.single;
    }
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            for (int c = 0; c < g; ++c) {
                if (dO[static_cast<std::size_t>(c)].size() == 0 || dO[static_cast<std::size_t>(a)].size() == 0) continue;
                const cplx x = dO[static_cast<std::size_t>(c)](a, b), y = dO[static_cast<std::size_t>(a)](b, c);
                run.check_abs("dm-cubic", "symmetry dOmega_" + idx({a, b}) + "/dA_" + idx({c}) + " = dOmega_" + idx({b, c}) + "/dA_" + idx({a}),
                              "symmetric cubic in A-directions", (x - y) / std::max(1.0, std::abs(x)), 0.0, 1e-9);
            }
    run.check_abs("dm-cubic", "Euler identity sum z dOmega/dz", "homogeneity of Omega of degree 0", euler.cwiseAbs().maxCoeff(), 0.0, 1e-8);
}

void suite_kernels(Context& ctx, SuiteRun& run) {
    const int dim = ctx.chart().dim();
    for (int d = 0; d < dim; ++d) {
        run.fd_checks(ctx, "kernel", make_functional(ctx, "v-alpha", d), d, 1e-4);
        run.fd_checks(ctx, "kernel", make_functional(ctx, "bidifferential", d), d, 1e-4);
        const CurveModel& m = ctx.model();
        const auto& pts = ctx.points();
        for (const auto& [i, k] : kPairs) {
            const LocalPoint X = m.point(pts[static_cast<std::size_t>(i)]), Y = m.point(pts[static_cast<std::size_t>(k)]);
            const cplx xy = vary_bidifferential(m, ctx.jets(), d, X, Y), yx = vary_bidifferential(m, ctx.jets(), d, Y, X);
            run.check_abs("kernel", "symmetry of dB(x" + std::to_string(i + 1) + ",x" + std::to_string(k + 1) + ")/d" +
                                        ctx.chart().point().dirs[static_cast<std::size_t>(d)].name(),
                          "symmetry of the bidifferential variation", (xy - yx) / std::max(1.0, std::abs(xy)), 0.0, 1e-8);
        }
    }
}

void suite_prime_form(Context& ctx, SuiteRun& run) {
    for (int d = 0; d < ctx.chart().dim(); ++d)
        run.fd_checks(ctx, "prime-form", make_functional(ctx, "log-prime-form", d), d, 1e-4);
}

void suite_tau(Context& ctx, SuiteRun& run) {
    const int g = ctx.genus();
    // the residue formula is stated for residue-free v; elsewhere it is reported only
    const bool gating = ctx.residue_free();
    const std::string eq = "dln tau/dA_c (branch-point and zero residues)";
    for (int a = 0; a < g; ++a) {
        const TauGradient r = tau_gradient(ctx.model(), ctx.jets(), a);
        const TauGradient o = tau_chain_rule(ctx.model(), ctx.jets(), a);
        run.check("tau", "dln tau/dA_" + idx({a}) + " against the chain-rule oracle", eq, r.value, o.value, 1e-4, gating);
    }
    std::vector<FdResult> fd;
    Functional f;
    f.name = "tau-gradient";
    f.eval = [&ctx, g](const SpectralCurve& cc) {
        const CurveModel mm = ctx.perturbed(cc);
        const auto tt = branch_jets(mm);
        Vec out(g);
        for (int a = 0; a < g; ++a) out(a) = tau_gradient(mm, tt, a).value;
        return out;
    };
    for (int b = 0; b < g; ++b) fd.push_back(richardson(ctx, f, b, 1e-4));
    for (int a = 0; a < g; ++a)
        for (int b = a + 1; b < g; ++b)
            run.check("tau", "cross-partial d^2 ln tau/dA_" + idx({a}) + "dA_" + idx({b}) + " symmetric", eq,
                      fd[static_cast<std::size_t>(b)].value(a), fd[static_cast<std::size_t>(a)].value(b), 1e-4, gating);
}

void suite_hessian(Context& ctx, SuiteRun& run) {
    const int g = ctx.genus();
    const auto& t = ctx.jets();
    for (int c = 0; c < g; ++c) run.fd_checks(ctx, "hessian", make_functional(ctx, "omega-gradient", c), c, 5e-4);
    for (int a = 0; a < g; ++a)
        for (int b = a; b < g; ++b)
            for (int c = b; c < g; ++c)
                for (int d = c; d < g; ++d) {
                    std::array<int, 4> p{a, b, c, d};
                    const cplx h = period_hessian(t, a, b, c, d);
                    double worst = 0.0;
                    do {
                        worst = std::max(worst, std::abs(period_hessian(t, p[0], p[1], p[2], p[3]) - h));
                    } while (std::next_permutation(p.begin(), p.end()));
                    run.check_abs("hessian", "24-fold symmetry of d^2 Omega_" + idx({a, b}) + "/dA_" + idx({c}) + "dA_" + idx({d}),
                                  "total symmetry of d^2 Omega", worst / std::max(1.0, std::abs(h)), 0.0, 1e-8);
                }
    for (int a = 0; a < g; ++a) run.fd_checks(ctx, "hessian", make_functional(ctx, "b-periods", a), a, 1e-5);
}

void suite_hierarchy(Context& ctx, SuiteRun& run) {
    const CurveModel& m = ctx.model();
    std::vector<LocalPoint> z;
    std::vector<cplx> vz;
    for (const auto& p : ctx.points()) {
        z.push_back(m.point(p));
        vz.push_back(m.v()(z.back().x, z.back().w));
    }
    const cplx q3 = q_multidiff(m, {z[0], z[1], z[2]}, {vz[0], vz[1], vz[2]});
    std::array<int, 3> p{0, 1, 2};
    while (std::next_permutation(p.begin(), p.end())) {
        const cplx q = q_multidiff(m, {z[p[0]], z[p[1]], z[p[2]]}, {vz[p[0]], vz[p[1]], vz[p[2]]});
        run.check_abs("hierarchy", "Q_3 under permutation " + idx({p[0], p[1], p[2]}), "symmetry of Q_n",
                      (q - q3) / std::max(1.0, std::abs(q3)), 0.0, 1e-9);
    }
    const cplx b01 = m.bidifferential(z[0], z[1]);
    run.check("hierarchy", "R_2 = B", "R_2 = B", r_multidiff(m, {z[0], z[1]}, {vz[0], vz[1]}), b01, 1e-10);
    run.check("hierarchy", "R_3(x,z,y) = B(x,z) B(z,y) / v(z)", "single path for R_3",
              r_multidiff(m, {z[0], z[2], z[1]}, {vz[0], vz[2], vz[1]}),
              m.bidifferential(z[0], z[2]) * m.bidifferential(z[2], z[1]) / vz[2], 1e-10);
    for (int gam = 0; gam < ctx.genus(); ++gam) {
        run.fd_checks(ctx, "hierarchy", make_functional(ctx, "q2", gam), gam, 1e-4);
        const cplx hv = hierarchy_variation(m, ctx.jets(), gam, {z[0], z[1]}, {vz[0], vz[1]});
        const cplx rv = hierarchy_variation(m, ctx.jets(), gam, {z[0], z[1]}, {vz[0], vz[1]}, true);
        run.check("hierarchy", "R-variation at n=2 equals dB/dA_" + idx({gam}), "dR_2 = dB", rv,
                  vary_bidifferential(m, ctx.jets(), gam, z[0], z[1]), 1e-10);
        run.check("hierarchy", "Q-variation symmetric in its points, A_" + idx({gam}), "symmetry of dQ_n",
                  hierarchy_variation(m, ctx.jets(), gam, {z[1], z[0]}, {vz[1], vz[0]}), hv, 1e-8);
        // residue of Q_3 / v(t) alone, compared with the same finite difference
        const Functional f = make_functional(ctx, "q2", gam);
        const FdResult fd = richardson(ctx, f, gam, 1e-4);
        run.check("hierarchy", "literal residue of Q_3/v(t) against FD of Q_2, A_" + idx({gam}),
                  "dQ_2/dA_c = sum_i corr_i res Q_3(z,t)/v(t)", fd.value(0),
                  hierarchy_variation_literal(m, ctx.jets(), gam, {z[0], z[1]}, {vz[0], vz[1]}), 1e-4, false);
    }
}

void suite_scaling(Context& ctx, SuiteRun& run) {
    const SpectralCurve& c = ctx.curve();
    const double lambda = 1.1;
    InstanceSpec s = c.spec;
    for (std::size_t l = 0; l < s.numer.size(); ++l) s.numer[l] = s.numer[l] * cplx(std::pow(lambda, static_cast<int>(l) + 1));
    const SurfaceFrame frame = c.frame();
    const SpectralCurve cs = build_surface(s, &frame);
    const HomologyBasis& hb = ctx.model().periods().basis;
    const ModuliPoint z0 = ctx.chart().point();
    const ModuliPoint z1 = coordinates_of(cs, hb);
    for (int i = 0; i < static_cast<int>(z0.z.size()); ++i)
        run.check_abs("scaling", "coordinate " + z0.dirs[static_cast<std::size_t>(i)].name() + " scales by lambda",
                      "v -> lambda v", (z1.z(i) - lambda * z0.z(i)) / std::max(1.0, std::abs(z0.z(i))), 0.0, 1e-9);
    const CurveModel ms = ctx.perturbed(cs);
    run.check_abs("scaling", "Omega invariant", "v -> lambda v",
                  (ms.periods().Omega - ctx.model().periods().Omega).cwiseAbs().maxCoeff(), 0.0, 1e-9);
    const auto& pts = ctx.points();
    for (const auto& [i, k] : kPairs) {
        const cplx b0 = ctx.model().bidifferential(ctx.model().point(pts[static_cast<std::size_t>(i)]), ctx.model().point(pts[static_cast<std::size_t>(k)]));
        const cplx b1 = ms.bidifferential(ms.point(pts[static_cast<std::size_t>(i)]), ms.point(pts[static_cast<std::size_t>(k)]));
        run.check_abs("scaling", "B(x" + std::to_string(i + 1) + ",x" + std::to_string(k + 1) + ") invariant", "v -> lambda v",
                      (b1 - b0) / std::max(1.0, std::abs(b0)), 0.0, 1e-9);
    }
    // convergence order of the plain central differences
    const std::vector<double> eps{2e-3, 1e-3, 5e-4, 2.5e-4};
    std::vector<std::pair<std::string, int>> jobs{{"omega", 0}, {"bidifferential", 0}, {"v-alpha", ctx.chart().dim() - 1}};
    for (const auto& [fn, d] : jobs) {
        const Functional f = make_functional(ctx, fn, d);
        const Vec pred = f.formula();
        std::vector<SweepRow> rows;
        for (double e : eps) {
            const double h = e * ctx.chart().scale(d);
            double noise = 0.0;
            const Vec fd = central_difference(ctx, f, d, h, &noise);
            SweepRow r;
            r.eps = e;
            r.err = (fd - pred).cwiseAbs().maxCoeff();
            r.noise_floor = r.err < noise;
            rows.push_back(r);
        }
        const auto ratios = sweep_ratios(rows);
        const std::string nm = fn + " in " + ctx.chart().point().dirs[static_cast<std::size_t>(d)].name();
        if (ratios.empty()) {
            run.check_flag("convergence", "error ratio per halving, " + nm, "O(eps^2) central differences", 0.0, false,
                           "noise floor reached before two usable rows");
            continue;
        }
        for (std::size_t k = 0; k < ratios.size(); ++k)
            run.check_flag("convergence", "error ratio per halving " + std::to_string(k + 1) + ", " + nm,
                           "O(eps^2) central differences", ratios[k], ratios[k] >= 3.5 && ratios[k] <= 4.5, "ratio in [3.5, 4.5]");
    }
}

const std::map<std::string, void (*)(Context&, SuiteRun&)>& suites() {
    static const std::map<std::string, void (*)(Context&, SuiteRun&)> s{
        {"surface", suite_surface}, {"dm-cubic", suite_dm_cubic}, {"kernels", suite_kernels},
        {"prime-form", suite_prime_form}, {"tau", suite_tau}, {"hessian", suite_hessian},
        {"hierarchy", suite_hierarchy}, {"scaling", suite_scaling}};
    return s;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"surface", "dm-cubic", "kernels", "prime-form", "tau", "hessian", "hierarchy", "scaling", "all"};
}

nlohmann::ordered_json environment_stamp() {
    nlohmann::ordered_json e;
#if defined(__clang__)
    e["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    e["compiler"] = std::string("gcc ") + __VERSION__;
#endif
    e["cxx"] = __cplusplus;
    e["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    return e;
}

nlohmann::ordered_json Report::to_json(bool with_timings) const {
    nlohmann::ordered_json j;
    j["instance"] = instance;
    j["suite"] = suite;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json x{{"name", c.name},        {"group", c.group},     {"paper_eq", c.paper_eq},
                         {"lhs", ocjson(c.lhs)},   {"rhs", ocjson(c.rhs)},  {"abs_err", c.abs_err},
                         {"rel_err", c.rel_err},  {"tol", c.tol},         {"absolute", c.absolute},
                         {"gating", c.gating},    {"pass", c.pass}};
        if (!c.note.empty()) x["note"] = c.note;
        if (with_timings) x["seconds"] = c.seconds;
        j["checks"].push_back(std::move(x));
    }
    if (!failure.empty()) j["failure"] = failure;
    j["environment"] = environment;
    j["pass"] = pass;
    return j;
}

Report run_suite(const std::string& instance, const std::string& suite, const SuiteOptions& opt) {
    const auto& all = suites();
    if (suite != "all" && !all.count(suite)) {
        std::string names;
        for (const auto& s : suite_names()) names += (names.empty() ? "" : ", ") + s;
        throw DomainError("unknown suite '" + suite + "'; valid suites: " + names);
    }
    Report rep;
    rep.instance = instance;
    rep.suite = suite;
    rep.environment = environment_stamp();
    try {
        Context ctx(instance);
        rep.instance = ctx.spec().label.empty() ? instance : ctx.spec().label;
        SuiteRun run(rep, opt);
        for (const auto& name : suite_names()) {
            if (name == "all" || (suite != "all" && suite != name)) continue;
            all.at(name)(ctx, run);
        }
    } catch (const Error& e) {
        rep.failure = e.what();
    }
    rep.pass = rep.failure.empty();
    for (const auto& c : rep.checks)
        if (c.gating && !c.pass) rep.pass = false;
    return rep;
}

std::vector<std::string> sweep_functionals() {
    return {"v", "branch-integrals", "omega", "v-alpha", "bidifferential", "log-prime-form", "omega-gradient", "b-periods", "q2"};
}

std::vector<SweepRow> sweep_epsilon(const std::string& instance, const std::string& functional,
                                    const std::string& coordinate, const std::vector<double>& eps) {
    if (eps.empty()) throw DomainError("sweep_epsilon: empty epsilon list");
    Context ctx(instance);
    const int d = ctx.find_coordinate(coordinate);
    const Functional f = make_functional(ctx, functional, d);
    const Vec pred = f.formula();
    int top = 0;
    pred.cwiseAbs().maxCoeff(&top);
    std::vector<SweepRow> rows;
    for (double e : eps) {
        if (!(e > 0.0)) throw DomainError("sweep_epsilon: epsilon must be positive");
        const double h = e * ctx.chart().scale(d);
        double noise = 0.0;
        const Vec fd = central_difference(ctx, f, d, h, &noise);
        SweepRow r;
        r.eps = e;
        r.fd = fd(top);
        r.formula = pred(top);
        r.err = (fd - pred).cwiseAbs().maxCoeff();
        r.noise_floor = r.err < noise;
        if (!rows.empty() && r.err > 0.0) r.ratio = rows.back().err / r.err;
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> sweep_ratios(const std::vector<SweepRow>& rows) {
    std::vector<double> out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].noise_floor || rows[k - 1].noise_floor) break;
        const double ratio = rows[k - 1].err / rows[k].err;
        // only consecutive halvings carry the factor 4
        if (std::abs(rows[k - 1].eps / rows[k].eps - 2.0) > 1e-9) continue;
        out.push_back(ratio);
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "eps,fd_re,fd_im,formula_re,formula_im,err,ratio,noise_floor\n";
    for (const auto& r : rows)
        os << r.eps << ',' << r.fd.real() << ',' << r.fd.imag() << ',' << r.formula.real() << ',' << r.formula.imag()
           << ',' << r.err << ',' << r.ratio << ',' << (r.noise_floor ? 1 : 0) << '\n';
    return os.str();
}

nlohmann::json describe(const std::string& instance) {
    const InstanceSpec spec = load_instance(instance);
    const DerivedCounts dc = derived_counts(spec);
    const GenericityReport gr = validate_genericity(spec);
    nlohmann::json j;
    j["label"] = spec.label;
    j["n"] = spec.n;
    j["poles"] = nlohmann::json::array();
    for (const auto& p : spec.poles) j["poles"].push_back({{"x", cjson(p.x)}, {"k", p.k}});
    j["counts"] = {{"genus", dc.genus}, {"branch_points", dc.branch_points}, {"zeros", dc.zeros}, {"dim", dc.dim},
                   {"coefficient_dims", dc.coefficient_dims}};
    j["branch_points"] = nlohmann::json::array();
    for (const auto& e : gr.branch_points) j["branch_points"].push_back(cjson(e));
    j["genericity"] = {{"pass", gr.pass}, {"margin", gr.margin}, {"summary", gr.summary()}};
    if (gr.pass) {
        const SpectralCurve c = build_surface(spec);
        const ModuliPoint z = coordinates_of(c, homology_basis(c));
        nlohmann::json coords = nlohmann::json::object();
        for (int i = 0; i < static_cast<int>(z.dirs.size()); ++i) coords[z.dirs[static_cast<std::size_t>(i)].name()] = cjson(z.z(i));
        j["coordinates"] = coords;
    }
    return j;
}

}  // namespace speclab
