#include "speclab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace speclab {

using nlohmann::json;

ComplexPoly InstanceSpec::pole_polynomial() const {
    ComplexPoly p({cplx(1)});
    for (const auto& pole : poles)
        for (int m = 0; m < pole.k; ++m) p = p * ComplexPoly({-pole.x, cplx(1)});
    return p;
}

int InstanceSpec::coefficient_count() const {
    int s = 0;
    for (int ell = 1; ell <= n; ++ell) s += std::max(0, max_degree(ell) + 1);
    return s;
}

namespace {

cplx parse_complex(const json& j, const std::string& path) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(path, "expected complex number [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

int parse_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path, "expected integer");
    return j.get<int>();
}

}  // namespace

InstanceSpec parse_instance(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "malformed document: top level must be an object");

    InstanceSpec spec;
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw ParseError("label", "expected string");
        spec.label = doc["label"].get<std::string>();
    }
    if (!doc.contains("n")) throw ParseError("n", "missing field");
    spec.n = parse_int(doc["n"], "n");
    if (spec.n < 2) throw ParseError("n", "n < 2 (sheet count must be at least 2)");

    if (!doc.contains("poles") || !doc["poles"].is_array() || doc["poles"].empty())
        throw ParseError("poles", "expected non-empty array");
    for (std::size_t i = 0; i < doc["poles"].size(); ++i) {
        const auto& pj = doc["poles"][i];
        const std::string path = "poles[" + std::to_string(i) + "]";
        if (!pj.is_object() || !pj.contains("x") || !pj.contains("k"))
            throw ParseError(path, "expected object with fields x, k");
        Pole pole{parse_complex(pj["x"], path + ".x"), parse_int(pj["k"], path + ".k")};
        if (pole.k < 1) throw ParseError(path + ".k", "pole order must be >= 1");
        if (!std::isfinite(pole.x.real()) || !std::isfinite(pole.x.imag()))
            throw ParseError(path + ".x", "pole location must be finite");
        for (std::size_t j = 0; j < spec.poles.size(); ++j)
            if (spec.poles[j].x == pole.x)
                throw ParseError(path, "duplicate pole (same location as poles[" + std::to_string(j) + "])");
        spec.poles.push_back(pole);
    }

    if (!doc.contains("Q") || !doc["Q"].is_array()) throw ParseError("Q", "expected array");
    std::vector<bool> seen(static_cast<std::size_t>(spec.n), false);
    spec.numer.assign(static_cast<std::size_t>(spec.n), ComplexPoly({cplx(0)}));
    for (std::size_t i = 0; i < doc["Q"].size(); ++i) {
        const auto& qj = doc["Q"][i];
        const std::string path = "Q[" + std::to_string(i) + "]";
        if (!qj.is_object() || !qj.contains("ell") || !qj.contains("numer"))
            throw ParseError(path, "expected object with fields ell, numer");
        const int ell = parse_int(qj["ell"], path + ".ell");
        if (ell < 1 || ell > spec.n) throw ParseError(path + ".ell", "ell out of range 1..n");
        if (seen[static_cast<std::size_t>(ell - 1)]) throw ParseError(path, "duplicate differential ell=" + std::to_string(ell));
        seen[static_cast<std::size_t>(ell - 1)] = true;
        if (!qj["numer"].is_array()) throw ParseError(path + ".numer", "expected array");
        std::vector<cplx> c;
        for (std::size_t m = 0; m < qj["numer"].size(); ++m)
            c.push_back(parse_complex(qj["numer"][m], path + ".numer[" + std::to_string(m) + "]"));
        if (c.empty()) c.push_back(cplx(0));
        ComplexPoly p(std::move(c));
        const int bound = spec.max_degree(ell);
        if (p.degree() > bound)
            throw ParseError(path + ".numer", "degree bound violated: deg N_" + std::to_string(ell) + " = " +
                                                  std::to_string(p.degree()) + " > " + std::to_string(bound));
        spec.numer[static_cast<std::size_t>(ell - 1)] = p;
    }
    for (int ell = 1; ell <= spec.n; ++ell)
        if (!seen[static_cast<std::size_t>(ell - 1)])
            throw ParseError("Q", "missing differential ell=" + std::to_string(ell));
    return spec;
}

std::string instance_to_json(const InstanceSpec& spec, int indent) {
    json doc;
    doc["label"] = spec.label;
    doc["n"] = spec.n;
    doc["poles"] = json::array();
    for (const auto& p : spec.poles) doc["poles"].push_back({{"x", complex_json(p.x)}, {"k", p.k}});
    doc["Q"] = json::array();
    for (int ell = 1; ell <= spec.n; ++ell) {
        json numer = json::array();
        for (const auto& c : spec.numer[static_cast<std::size_t>(ell - 1)].coeffs()) numer.push_back(complex_json(c));
        doc["Q"].push_back({{"ell", ell}, {"numer", numer}});
    }
    return doc.dump(indent);
}

DerivedCounts derived_counts(const InstanceSpec& spec) {
    const int n = spec.n, K = spec.total_order(), g = 0;
    DerivedCounts c;
    c.branch_points = n * (n - 1) * (2 * g - 2 + K);
    c.genus = n * n * (g - 1) + 1 + n * (n - 1) / 2 * K;
    c.zeros = 2 * c.genus - 2 + n * K;
    c.dim = c.genus + n * K - 1;
    for (int ell = 1; ell <= n; ++ell) c.coefficient_dims.push_back(std::max(0, spec.max_degree(ell) + 1));
    return c;
}

int dimension_by_coefficients(const InstanceSpec& spec) {
    const int n = spec.n, g = 0;
    return n * (n + 1) / 2 * spec.total_order() + n * n * (g - 1);
}

namespace {

// Discriminant of the monic polynomial with coefficients a (a[0] = 1 leading) via the
// Sylvester determinant of f and f'.
cplx monic_discriminant(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    if (n == 1) return cplx(1);
    std::vector<cplx> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] * static_cast<double>(n - i);
    const int sz = 2 * n - 1;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(sz, sz);
    for (int r = 0; r < n - 1; ++r)
        for (int i = 0; i <= n; ++i) s(r, r + i) = a[static_cast<std::size_t>(i)];
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i) s(n - 1 + r, r + i) = d[static_cast<std::size_t>(i)];
    const cplx res = s.determinant();
    const double sign = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * res;
}

}  // namespace

ComplexPoly discriminant(const InstanceSpec& spec) {
    const auto& N = spec.numer;
    if (spec.n == 2) return (N[0] * N[0] - N[1] * cplx(4)).trimmed();

    // general n: interpolate on a circle of radius R through deg+1 nodes
    const int deg = spec.n * (spec.n - 1) * (spec.total_order() - 2);
    const int m = std::max(deg + 1, 1);
    double R = 1.0;
    for (const auto& p : spec.poles) R = std::max(R, std::abs(p.x));
    std::vector<cplx> vals(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const cplx x = std::polar(R, 2.0 * std::numbers::pi * k / m);
        std::vector<cplx> a{cplx(1)};
        for (const auto& q : N) a.push_back(q(x));
        vals[static_cast<std::size_t>(k)] = monic_discriminant(a);
    }
    std::vector<cplx> c(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        cplx s(0);
        for (int k = 0; k < m; ++k) s += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / m);
        c[static_cast<std::size_t>(j)] = s / (static_cast<double>(m) * std::pow(R, j));
    }
    return ComplexPoly(std::move(c)).trimmed(1e-13);
}

std::string GenericityReport::summary() const {
    std::ostringstream os;
    if (pass) {
        os << "generic (margin " << margin << ")";
        return os.str();
    }
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << issues[i].kind;
        if (!issues[i].locations.empty()) {
            os << " at";
            for (const auto& z : issues[i].locations) os << " (" << z.real() << "," << z.imag() << ")";
        }
    }
    return os.str();
}

GenericityReport validate_genericity(const InstanceSpec& spec, double rel_tol) {
    GenericityReport rep;
    auto fail = [&](std::string kind, std::vector<cplx> where) {
        rep.pass = false;
        rep.issues.push_back({std::move(kind), std::move(where)});
    };

    const int K = spec.total_order();
    const int p = spec.n * (spec.n - 1) * (K - 2);
    double scale = 1.0;
    for (const auto& pole : spec.poles) scale = std::max(scale, std::abs(pole.x));
    const double sep_tol = std::max(rel_tol, 1e-6) * scale;

    if (K < 3) {
        fail("total pole order below 3 (no zeros of v to support the cover)", {});
        return rep;
    }

    const ComplexPoly disc = discriminant(spec);
    const ComplexPoly dtr = disc.trimmed(1e-12);
    if (dtr.degree() < p) fail("branch point at infinity (discriminant degree " + std::to_string(dtr.degree()) + " < " + std::to_string(p) + ")", {});
    if (dtr.degree() >= 1) {
        for (const auto& r : poly_roots(dtr)) {
            rep.branch_points.push_back(r.value);
            if (r.multiplicity > 1) fail("non-simple branch point", {r.value});
        }
    }
    for (std::size_t i = 0; i < rep.branch_points.size(); ++i)
        for (std::size_t j = i + 1; j < rep.branch_points.size(); ++j)
            if (std::abs(rep.branch_points[i] - rep.branch_points[j]) < sep_tol)
                fail("non-simple branch point", {rep.branch_points[i], rep.branch_points[j]});

    for (const auto& pole : spec.poles)
        for (const auto& e : rep.branch_points)
            if (std::abs(pole.x - e) < sep_tol) fail("pole collides with branch point", {pole.x});

    // zeros of v over the base are the roots of N_n; they must be simple, away from
    // branch points and poles, and N_n must have full degree (no zero at infinity).
    const ComplexPoly& top = spec.numer.back();
    const ComplexPoly ttr = top.trimmed(1e-12);
    if (ttr.degree() < spec.max_degree(spec.n)) fail("zero of v at infinity (deg N_n below bound)", {});
    if (ttr.degree() >= 1) {
        for (const auto& r : poly_roots(ttr)) {
            rep.base_zeros.push_back(r.value);
            if (r.multiplicity > 1) fail("non-simple zero of v", {r.value});
        }
    }
    for (const auto& z : rep.base_zeros) {
        for (const auto& e : rep.branch_points)
            if (std::abs(z - e) < sep_tol) fail("non-simple zero of v (zero at branch point)", {z});
        for (const auto& pole : spec.poles)
            if (std::abs(z - pole.x) < sep_tol) fail("zero of v at pole", {z});
    }

    std::vector<cplx> all = rep.branch_points;
    all.insert(all.end(), rep.base_zeros.begin(), rep.base_zeros.end());
    for (const auto& pole : spec.poles) all.push_back(pole.x);
    rep.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) rep.margin = std::min(rep.margin, std::abs(all[i] - all[j]) / scale);
    return rep;
}

}  // namespace speclab
