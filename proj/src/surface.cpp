#include "speclab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// Angle difference wrapped into (-pi, pi].
double wrap(double a) {
    while (a <= -kPi) a += 2 * kPi;
    while (a > kPi) a -= 2 * kPi;
    return a;
}

struct Geo {
    Segment seg;
    PathPiece::Kind kind;
    int center_branch;  // for arcs around / radial lines into a branch point
};

}  // namespace

cplx PathPiece::point(double s) const {
    if (kind == Kind::IntoBranch) return seg.b + (seg.a - seg.b) * ((1 - s) * (1 - s));
    return seg.point(s);
}

cplx PathPiece::dxds(double s) const {
    if (kind == Kind::IntoBranch) return -2.0 * (seg.a - seg.b) * (1 - s);
    return seg.tangent(s);
}

Contour SheetPath::contour() const {
    Contour c;
    for (const auto& p : pieces) c.append(p.seg);
    return c;
}

namespace detail {

cplx piece_w(const SpectralCurve& c, const PathPiece& p, double s) {
    const cplx x = p.point(s);
    cplx w = p.w_anchor;
    for (int j = 0; j < c.num_branch(); ++j) {
        const cplx e = c.branch[static_cast<std::size_t>(j)];
        if (j == p.center_branch) {
            if (p.kind == PathPiece::Kind::Arc) {
                w *= std::exp(0.5 * kI * (s * (p.seg.theta1 - p.seg.theta0)));
                continue;
            }
            if (p.kind == PathPiece::Kind::IntoBranch) {
                w *= (1 - s);
                continue;
            }
        }
        w *= std::sqrt((x - e) / (p.anchor - e));
    }
    return w;
}

}  // namespace detail

double SpectralCurve::branch_distance(cplx x, int skip) const {
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < num_branch(); ++j)
        if (j != skip) d = std::min(d, std::abs(x - branch[static_cast<std::size_t>(j)]));
    return d;
}

double SpectralCurve::singular_distance(cplx x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : singular) d = std::min(d, std::abs(x - s.x));
    return d;
}

cplx SpectralCurve::continue_w(cplx anchor, cplx w_anchor, cplx x) const {
    cplx w = w_anchor;
    for (const auto& e : branch) w *= std::sqrt((x - e) / (anchor - e));
    return w;
}

cplx SpectralCurve::phi(cplx x, cplx w) const {
    return (-spec.numer[0](x) + w) / (2.0 * P(x));
}

namespace {

// Straight line a -> b with detours around every singular disk it crosses, except 'skip'.
std::vector<Geo> detoured_line(const SpectralCurve& c, cplx a, cplx b, int skip) {
    std::vector<Geo> out;
    const double L = std::abs(b - a);
    if (L == 0.0) return out;
    const cplx d = (b - a) / L;
    struct Hit {
        double t_in, t_out;
        int idx;
        double h;
    };
    std::vector<Hit> hits;
    for (int i = 0; i < static_cast<int>(c.singular.size()); ++i) {
        if (i == skip) continue;
        const auto& s = c.singular[static_cast<std::size_t>(i)];
        const cplx rel = (s.x - a) * std::conj(d);
        const double t = rel.real(), h = rel.imag();
        if (std::abs(h) >= s.safety) continue;
        const double half = std::sqrt(s.safety * s.safety - h * h);
        if (t + half <= 0.0 || t - half >= L) continue;
        if (t - half <= 0.0 || t + half >= L)
            throw DomainError("path endpoint inside the safety disk of a singular point");
        hits.push_back({t - half, t + half, i, h});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t_in < y.t_in; });
    cplx cur = a;
    for (const auto& hit : hits) {
        const auto& s = c.singular[static_cast<std::size_t>(hit.idx)];
        const cplx pin = a + hit.t_in * d, pout = a + hit.t_out * d;
        out.push_back({Segment::line(cur, pin), PathPiece::Kind::Line, -1});
        const double th_in = std::arg(pin - s.x), th_out = std::arg(pout - s.x);
        // keep the singular point on the same side as the straight line leaves it
        double dth = th_out - th_in;
        if (hit.h >= 0.0) {
            while (dth <= 0) dth += 2 * kPi;
        } else {
            while (dth >= 0) dth -= 2 * kPi;
        }
        const int cb = s.kind == SingularPoint::Kind::Branch ? s.index : -1;
        out.push_back({Segment::arc(s.x, s.safety, th_in, th_in + dth), PathPiece::Kind::Arc, cb});
        cur = pout;
    }
    out.push_back({Segment::line(cur, b), PathPiece::Kind::Line, -1});
    return out;
}

int singular_index_containing(const SpectralCurve& c, cplx z) {
    for (int i = 0; i < static_cast<int>(c.singular.size()); ++i)
        if (std::abs(z - c.singular[static_cast<std::size_t>(i)].x) < c.singular[static_cast<std::size_t>(i)].safety) return i;
    return -1;
}

int singular_index_of_branch(const SpectralCurve& c, int k) {
    for (int i = 0; i < static_cast<int>(c.singular.size()); ++i)
        if (c.singular[static_cast<std::size_t>(i)].kind == SingularPoint::Kind::Branch &&
            c.singular[static_cast<std::size_t>(i)].index == k)
            return i;
    return -1;
}

// Geometry from x0 to z: detoured line, and inside a disk an arc plus radial line.
std::vector<Geo> route_geometry(const SpectralCurve& c, cplx z) {
    const int inside = singular_index_containing(c, z);
    if (inside < 0) return detoured_line(c, c.x0, z, -1);
    const auto& s = c.singular[static_cast<std::size_t>(inside)];
    const cplx q = s.x + s.safety * (c.x0 - s.x) / std::abs(c.x0 - s.x);
    std::vector<Geo> g = detoured_line(c, c.x0, q, inside);
    const int cb = s.kind == SingularPoint::Kind::Branch ? s.index : -1;
    const double scale = std::max(1.0, std::abs(s.x));
    if (std::abs(z - s.x) <= 1e-14 * scale) {
        g.push_back({Segment::line(q, s.x), cb >= 0 ? PathPiece::Kind::IntoBranch : PathPiece::Kind::Line, cb});
        return g;
    }
    const double th_q = std::arg(q - s.x), th_z = std::arg(z - s.x);
    const double dth = wrap(th_z - th_q);
    cplx cur = q;
    if (dth != 0.0) {
        g.push_back({Segment::arc(s.x, s.safety, th_q, th_q + dth), PathPiece::Kind::Arc, cb});
        cur = s.x + std::polar(s.safety, th_q + dth);
    }
    g.push_back({Segment::line(cur, z), PathPiece::Kind::Line, cb});
    return g;
}

// Attach w data (n = 2): subdivide lines so each piece stays well inside the disk of
// validity of the product formula around its anchor.
SheetPath make_path(const SpectralCurve& c, const std::vector<Geo>& geo, cplx start, cplx w_start) {
    SheetPath p;
    p.start = start;
    p.w_start = w_start;
    cplx w = w_start;
    const bool has_w = c.spec.n == 2;
    for (const auto& g : geo) {
        if (g.kind == PathPiece::Kind::Line) {
            const cplx a = g.seg.a, b = g.seg.b;
            const double L = std::abs(b - a);
            double t = 0.0;
            while (t < L) {
                const cplx anchor = a + (b - a) * (t / L);
                double step = L - t;
                if (has_w) step = std::min(step, 0.45 * c.branch_distance(anchor, g.center_branch));
                step = std::max(step, 1e-12 * L);
                const double t1 = std::min(L, t + step);
                PathPiece piece;
                piece.kind = PathPiece::Kind::Line;
                piece.seg = Segment::line(anchor, a + (b - a) * (t1 / L));
                piece.anchor = anchor;
                piece.w_anchor = w;
                piece.center_branch = g.center_branch;
                if (has_w) w = detail::piece_w(c, piece, 1.0);
                p.pieces.push_back(piece);
                t = t1;
            }
        } else {
            PathPiece piece;
            piece.kind = g.kind;
            piece.seg = g.seg;
            piece.anchor = g.kind == PathPiece::Kind::IntoBranch ? g.seg.a : g.seg.start();
            piece.w_anchor = w;
            piece.center_branch = g.center_branch;
            if (has_w) w = detail::piece_w(c, piece, 1.0);
            p.pieces.push_back(piece);
        }
    }
    p.end = geo.empty() ? start : (p.pieces.back().kind == PathPiece::Kind::IntoBranch ? p.pieces.back().seg.b
                                                                                        : p.pieces.back().seg.end());
    p.w_end = w;
    return p;
}

}  // namespace

SheetPath SpectralCurve::straight_path(cplx z) const { return make_path(*this, route_geometry(*this, z), x0, w0); }

std::vector<SpectralCurve::RouteStep> SpectralCurve::canonical_route(const SurfacePoint& p, SheetPath& scratch) const {
    scratch = straight_path(p.x);
    std::vector<RouteStep> r;
    if (p.sheet == 0) {
        r.push_back({&scratch, 1, 1});
        return r;
    }
    r.push_back({&legs[0], 1, 1});
    r.push_back({&circles[0], 1, 1});
    r.push_back({&legs[0], -1, -1});
    r.push_back({&scratch, -1, 1});
    return r;
}

cplx SpectralCurve::w_at(const SurfacePoint& p) const {
    for (const auto& e : branch)
        if (p.x == e) return 0.0;
    const SheetPath s = straight_path(p.x);
    return p.sheet == 0 ? s.w_end : -s.w_end;
}

cplx SpectralCurve::branch_chart_G0(int k) const { return g0_[static_cast<std::size_t>(k)]; }

cplx SpectralCurve::branch_chart_w(int k, cplx t) const {
    const cplx e = branch[static_cast<std::size_t>(k)];
    cplx w = t * g0_[static_cast<std::size_t>(k)];
    for (int j = 0; j < num_branch(); ++j)
        if (j != k) w *= std::sqrt(1.0 + t * t / (e - branch[static_cast<std::size_t>(j)]));
    return w;
}

Contour lasso_contour(const SpectralCurve& c, int k) {
    Contour out = c.legs[static_cast<std::size_t>(k)].contour();
    out.append(c.circles[static_cast<std::size_t>(k)].contour());
    out.append(c.legs[static_cast<std::size_t>(k)].contour().reversed());
    return out;
}

// ---------------------------------------------------------------- continuation

ContinuationLog continue_sheets(const SpectralCurve& c, const Contour& path, const std::vector<cplx>& start_phi) {
    const int n = c.spec.n;
    const auto& N = c.spec.numer;
    std::vector<ComplexPoly> dN;
    for (const auto& q : N) dN.push_back(q.derivative());

    auto eval = [&](cplx psi, cplx x, cplx& F, cplx& Fpsi, cplx& Fx) {
        // F = psi^n + sum_l N_l psi^{n-l}
        F = 1.0;
        Fpsi = 0.0;
        Fx = 0.0;
        for (int l = 1; l <= n; ++l) {
            Fpsi = Fpsi * psi + F;
            F = F * psi + N[static_cast<std::size_t>(l - 1)](x);
        }
        cplx pw = 1.0;
        for (int l = n; l >= 1; --l) {
            Fx += dN[static_cast<std::size_t>(l - 1)](x) * pw;
            pw *= psi;
        }
    };
    auto min_sep = [](const std::vector<cplx>& v) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) m = std::min(m, std::abs(v[i] - v[j]));
        return m;
    };

    ContinuationLog log;
    cplx x = path.start();
    std::vector<cplx> psi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) psi[static_cast<std::size_t>(i)] = start_phi[static_cast<std::size_t>(i)] * c.P(x);
    auto record = [&](cplx xx) {
        log.x.push_back(xx);
        std::vector<cplx> ph(psi.size());
        const cplx px = c.P(xx);
        for (std::size_t i = 0; i < psi.size(); ++i) ph[i] = psi[i] / px;
        log.phi.push_back(ph);
    };
    record(x);

    for (const auto& seg : path.segments) {
        double s = 0.0, h = 1.0 / 16;
        while (s < 1.0) {
            h = std::min(h, 1.0 - s);
            const cplx x1 = seg.point(s + h);
            std::vector<cplx> pred(psi.size()), corr(psi.size());
            double slope = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                cplx F, Fp, Fx;
                eval(psi[i], x, F, Fp, Fx);
                const cplx d = -Fx / Fp;
                slope = std::max(slope, std::abs(d));
                pred[i] = psi[i] + d * (x1 - x);
            }
            const double sep_old = min_sep(psi);
            bool ok = std::abs(x1 - x) * slope < 0.2 * sep_old;
            for (std::size_t i = 0; ok && i < psi.size(); ++i) {
                cplx z = pred[i];
                bool conv = false;
                for (int it = 0; it < 8; ++it) {
                    cplx F, Fp, Fx;
                    eval(z, x1, F, Fp, Fx);
                    const cplx dz = F / Fp;
                    z -= dz;
                    if (std::abs(dz) <= 1e-13 * std::max(1.0, std::abs(z))) {
                        conv = true;
                        break;
                    }
                }
                corr[i] = z;
                ok = conv && std::abs(z - pred[i]) < 0.25 * sep_old;
            }
            if (ok && !(min_sep(corr) > 0.5 * sep_old * 0.0)) ok = false;
            if (!ok) {
                h *= 0.5;
                if (h < 1e-12) throw NumericalError("continue_sheets: root collision (path too close to a branch point)");
                continue;
            }
            psi = corr;
            x = x1;
            s += h;
            record(x);
            h *= 1.5;
        }
    }
    // label the end values by nearest start value (closed loops)
    const auto& last = log.phi.back();
    log.end_sheet.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int j = 1; j < n; ++j)
            if (std::abs(last[static_cast<std::size_t>(i)] - start_phi[static_cast<std::size_t>(j)]) <
                std::abs(last[static_cast<std::size_t>(i)] - start_phi[static_cast<std::size_t>(best)]))
                best = j;
        log.end_sheet[static_cast<std::size_t>(i)] = best;
    }
    return log;
}

std::vector<int> monodromy_of(const SpectralCurve& c, const Contour& loop) {
    return continue_sheets(c, loop, c.phi0).end_sheet;
}

// ---------------------------------------------------------------- build

namespace {

bool lex_less(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

// Reorder 'pts' to follow 'ref' by nearest neighbour; throws if the match is ambiguous.
std::vector<cplx> match_order(const std::vector<cplx>& pts, const std::vector<cplx>& ref) {
    if (pts.size() != ref.size()) throw NumericalError("frame transport: point count changed");
    double minsep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ref.size(); ++i)
        for (std::size_t j = i + 1; j < ref.size(); ++j) minsep = std::min(minsep, std::abs(ref[i] - ref[j]));
    std::vector<cplx> out(ref.size());
    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        std::size_t best = pts.size();
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (!used[j] && (best == pts.size() || std::abs(pts[j] - ref[i]) < std::abs(pts[best] - ref[i]))) best = j;
        if (std::abs(pts[best] - ref[i]) > 0.1 * minsep)
            throw NumericalError("frame transport: branch-point collision guard exceeded");
        used[best] = true;
        out[i] = pts[best];
    }
    return out;
}

}  // namespace

SpectralCurve build_surface(const InstanceSpec& spec, const SurfaceFrame* frame) {
    if (spec.n < 2) throw DomainError("build_surface: n must be >= 2");
    SpectralCurve c;
    c.spec = spec;
    c.counts = derived_counts(spec);
    c.genericity = validate_genericity(spec);
    if (!c.genericity.pass) throw GenericityError("build_surface: " + c.genericity.summary());
    c.P = spec.pole_polynomial();
    c.D = discriminant(spec);

    std::vector<cplx> br = c.genericity.branch_points;
    std::vector<cplx> bz = c.genericity.base_zeros;
    if (static_cast<int>(br.size()) != c.counts.branch_points)
        throw NumericalError("build_surface: branch point count differs from the derived count");

    // basepoint on a bounding circle, as far as possible from every singular point
    std::vector<cplx> all = br;
    for (const auto& p : spec.poles) all.push_back(p.x);
    all.insert(all.end(), bz.begin(), bz.end());
    cplx cm = 0.0;
    for (const auto& z : all) cm += z;
    cm /= static_cast<double>(all.size());
    double rmax = 0.0;
    for (const auto& z : all) rmax = std::max(rmax, std::abs(z - cm));
    if (frame) {
        c.x0 = frame->x0;
    } else {
        const double R = 1.5 * rmax + 1e-3;
        double best = -1.0;
        for (int k = 0; k < 720; ++k) {
            const cplx cand = cm + std::polar(R, 2 * kPi * k / 720);
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& z : all) dmin = std::min(dmin, std::abs(cand - z));
            if (dmin > best + 1e-12 * R) {
                best = dmin;
                c.x0 = cand;
            }
        }
    }

    // lasso order: increasing counter-clockwise angle seen from x0
    if (frame) {
        br = match_order(br, frame->branch_order);
    } else {
        const cplx u = cm - c.x0;
        std::sort(br.begin(), br.end(), [&](cplx a, cplx b) { return std::arg((a - c.x0) / u) < std::arg((b - c.x0) / u); });
    }
    c.branch = br;
    if (frame && spec.n == 2) {
        std::vector<cplx> ref;
        for (const auto& z : frame->base_zeros) ref.push_back(z.x);
        bz = match_order(bz, ref);
    } else {
        std::sort(bz.begin(), bz.end(), lex_less);
    }

    // singular set with safety radii
    for (int k = 0; k < static_cast<int>(br.size()); ++k) c.singular.push_back({SingularPoint::Kind::Branch, br[static_cast<std::size_t>(k)], 0.0, k});
    for (int j = 0; j < static_cast<int>(spec.poles.size()); ++j) c.singular.push_back({SingularPoint::Kind::Pole, spec.poles[static_cast<std::size_t>(j)].x, 0.0, j});
    for (int j = 0; j < static_cast<int>(bz.size()); ++j) c.singular.push_back({SingularPoint::Kind::Zero, bz[static_cast<std::size_t>(j)], 0.0, j});
    for (auto& s : c.singular) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& t : c.singular)
            if (&t != &s) d = std::min(d, std::abs(t.x - s.x));
        s.safety = 0.25 * d;
    }
    for (const auto& s : c.singular)
        if (std::abs(c.x0 - s.x) <= s.safety) throw DomainError("build_surface: basepoint inside a safety disk");

    // sheets at x0
    const cplx px0 = c.P(c.x0);
    if (spec.n == 2) {
        cplx w = std::sqrt(c.D(c.x0));
        if (frame) {
            if (std::abs(-w - frame->w0) < std::abs(w - frame->w0)) w = -w;
        } else {
            const cplx pa = c.phi(c.x0, w), pb = c.phi(c.x0, -w);
            if (lex_less(pb, pa)) w = -w;
        }
        c.w0 = w;
        c.phi0 = {c.phi(c.x0, w), c.phi(c.x0, -w)};
    } else {
        std::vector<cplx> co(static_cast<std::size_t>(spec.n) + 1);
        co[static_cast<std::size_t>(spec.n)] = 1.0;
        for (int l = 1; l <= spec.n; ++l) co[static_cast<std::size_t>(spec.n - l)] = spec.numer[static_cast<std::size_t>(l - 1)](c.x0);
        auto roots = poly_root_values(ComplexPoly(co));
        for (auto& r : roots) r /= px0;
        std::sort(roots.begin(), roots.end(), lex_less);
        c.phi0 = roots;
        c.w0 = 0.0;
    }

    // lassos
    for (int k = 0; k < c.num_branch(); ++k) {
        const int si = singular_index_of_branch(c, k);
        const auto& s = c.singular[static_cast<std::size_t>(si)];
        const cplx q = s.x + s.safety * (c.x0 - s.x) / std::abs(c.x0 - s.x);
        const double th = std::arg(q - s.x);
        c.legs.push_back(make_path(c, detoured_line(c, c.x0, q, si), c.x0, c.w0));
        std::vector<Geo> circ{{Segment::arc(s.x, s.safety, th, th + 2 * kPi), PathPiece::Kind::Arc, k}};
        c.circles.push_back(make_path(c, circ, q, c.legs.back().w_end));
    }

    if (spec.n == 2) {
        for (int k = 0; k < c.num_branch(); ++k) {
            const cplx e = c.branch[static_cast<std::size_t>(k)];
            const cplx q = c.legs[static_cast<std::size_t>(k)].end;
            const cplx tq = std::sqrt(q - e);
            cplx prod = 1.0;
            for (int j = 0; j < c.num_branch(); ++j)
                if (j != k) prod *= std::sqrt(1.0 + tq * tq / (e - c.branch[static_cast<std::size_t>(j)]));
            c.g0_.push_back(c.legs[static_cast<std::size_t>(k)].w_end / (tq * prod));
        }
    }

    for (int k = 0; k < c.num_branch(); ++k) c.monodromy.push_back(monodromy_of(c, lasso_contour(c, k)));

    if (spec.n == 2) {
        for (const auto& e : c.branch) c.zeros.push_back({e, 0});
        c.n_branch_zeros = static_cast<int>(c.branch.size());
        for (const auto& z : bz) {
            const cplx w = c.straight_path(z).w_end;
            const cplx n1 = spec.numer[0](z);
            c.zeros.push_back({z, std::abs(w - n1) <= std::abs(w + n1) ? 0 : 1});
        }
        if (static_cast<int>(c.zeros.size()) != c.counts.zeros)
            throw NumericalError("build_surface: zero count differs from the derived count");
        auto key_less = [](const SurfacePoint& a, const SurfacePoint& b) {
            if (a.x.real() != b.x.real()) return a.x.real() < b.x.real();
            if (a.x.imag() != b.x.imag()) return a.x.imag() < b.x.imag();
            return a.sheet < b.sheet;
        };
        c.r_index = 0;
        if (frame) {
            for (int i = 1; i < static_cast<int>(c.zeros.size()); ++i)
                if (std::abs(c.zeros[static_cast<std::size_t>(i)].x - frame->x_r.x) < std::abs(c.zeros[static_cast<std::size_t>(c.r_index)].x - frame->x_r.x))
                    c.r_index = i;
        } else {
            for (int i = 1; i < static_cast<int>(c.zeros.size()); ++i)
                if (key_less(c.zeros[static_cast<std::size_t>(c.r_index)], c.zeros[static_cast<std::size_t>(i)])) c.r_index = i;
        }
    }
    return c;
}

SurfaceFrame SpectralCurve::frame() const {
    SurfaceFrame f;
    f.x0 = x0;
    f.w0 = w0;
    f.branch_order = branch;
    for (int i = n_branch_zeros; i < static_cast<int>(zeros.size()); ++i) f.base_zeros.push_back(zeros[static_cast<std::size_t>(i)]);
    if (!zeros.empty()) f.x_r = x_r();
    return f;
}

// ---------------------------------------------------------------- homology

HomologyBasis homology_basis_shifted(const SpectralCurve& c, int shift) {
    if (c.spec.n != 2) throw DomainError("homology basis not implemented for n>2");
    const int g = c.genus(), p = c.num_branch();
    auto idx = [&](int k) { return ((k + shift) % p + p) % p; };
    HomologyBasis hb;
    for (int a = 0; a < g; ++a) {
        hb.a.push_back({{idx(2 * a), idx(2 * a + 1)}});
        Cycle b;
        for (int k = 2 * a + 1; k <= 2 * g; ++k) b.word.push_back(idx(k));
        hb.b.push_back(b);
    }
    return hb;
}

HomologyBasis homology_basis(const SpectralCurve& c) { return homology_basis_shifted(c, 0); }

Eigen::RowVectorXcd cycle_integral(const Cycle& cyc, const Eigen::MatrixXcd& L) {
    Eigen::RowVectorXcd s = Eigen::RowVectorXcd::Zero(L.cols());
    double sigma = 1.0;
    for (int k : cyc.word) {
        s += sigma * L.row(k);
        sigma = -sigma;
    }
    return s;
}

Eigen::RowVectorXcd cycle_integral(const Cycle& cyc, const LassoTable& L) {
    Eigen::RowVectorXcd s = Eigen::RowVectorXcd::Zero(L.plus.cols());
    bool plus = true;
    for (int k : cyc.word) {
        s += plus ? L.plus.row(k) : L.minus.row(k);
        plus = !plus;
    }
    return s;
}

// ---------------------------------------------------------------- dump

std::string SpectralCurve::dump_json() const {
    using nlohmann::json;
    auto cj = [](cplx z) { return json::array({z.real(), z.imag()}); };
    json d;
    d["label"] = spec.label;
    d["n"] = spec.n;
    d["x0"] = cj(x0);
    d["genus"] = counts.genus;
    d["branch_points"] = json::array();
    for (const auto& e : branch) d["branch_points"].push_back(cj(e));
    d["monodromy"] = monodromy;
    d["zeros"] = json::array();
    for (int i = 0; i < static_cast<int>(zeros.size()); ++i)
        d["zeros"].push_back({{"x", cj(zeros[static_cast<std::size_t>(i)].x)},
                              {"sheet", zeros[static_cast<std::size_t>(i)].sheet},
                              {"kind", i < n_branch_zeros ? "branch" : "base"}});
    if (!zeros.empty()) d["x_r"] = r_index;
    d["lassos"] = json::array();
    for (int k = 0; k < num_branch(); ++k) {
        json poly = json::array();
        for (const auto& seg : lasso_contour(*this, k).segments)
            for (int i = 0; i < 8; ++i) poly.push_back(cj(seg.point(i / 8.0)));
        d["lassos"].push_back(poly);
    }
    if (spec.n == 2) {
        const auto hb = homology_basis(*this);
        d["a_cycles"] = json::array();
        d["b_cycles"] = json::array();
        for (const auto& a : hb.a) d["a_cycles"].push_back(a.word);
        for (const auto& b : hb.b) d["b_cycles"].push_back(b.word);
    }
    d["genericity"] = genericity.summary();
    return d.dump(2);
}

}  // namespace speclab
