// Draws coefficients for the built-in instances and writes them as instance files.
// Draws are retried until the cover is generic with a comfortable separation margin.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "speclab/instance.hpp"
#include "speclab/numerics/jet.hpp"
#include "speclab/numerics/series.hpp"

using namespace speclab;

namespace {

cplx draw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng), im = u(rng);
    return {std::round(re * 1e6) / 1e6, std::round(im * 1e6) / 1e6};
}

ComplexPoly random_poly(std::mt19937_64& rng, int deg) {
    std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
    for (auto& z : c) z = draw(rng);
    return ComplexPoly(c);
}

// residue at y_j of f / P, f given by its values near y_j
template <typename F>
cplx residue_over_pole(const InstanceSpec& s, int j, const F& f) {
    const cplx y = s.poles[static_cast<std::size_t>(j)].x;
    double d = 1e300;
    for (std::size_t i = 0; i < s.poles.size(); ++i)
        if (static_cast<int>(i) != j) d = std::min(d, std::abs(s.poles[i].x - y));
    const ComplexPoly P = s.pole_polynomial();
    auto jet = circle_jet([&](cplx t) { return f(y + t) / P(y + t); }, 0.25 * d, 256);
    return jet.residue();
}

// residue at y_j of sqrt(D) / P from Taylor series at y_j (D(y_j) != 0)
cplx residue_sqrt_over_pole(const InstanceSpec& s, int j, const ComplexPoly& D) {
    const cplx y = s.poles[static_cast<std::size_t>(j)].x;
    const int k = s.poles[static_cast<std::size_t>(j)].k;
    const int n = k + 2;
    // P(y + t) = t^k R(t)
    ComplexPoly R({1.0});
    for (std::size_t i = 0; i < s.poles.size(); ++i)
        if (static_cast<int>(i) != j) {
            const auto& q = s.poles[i];
            for (int e = 0; e < q.k; ++e) R = R * ComplexPoly({y - q.x, 1.0});
        }
    const Series t = Series::linear(0.0, 1.0, n);
    const Series Ds = Series::compose(D.shifted(y), t);
    const Series w = Ds.sqrt(std::sqrt(Ds[0]));
    const Series q = w / Series::compose(R, t);
    return q[k - 1];
}

// Make v residue-free. res(N_1/P) vanishes at every pole once it does at all but one (N_1/P
// decays like x^-2). res(sqrt(D)/P) has opposite signs on the two sheets, so the residue theorem
// says nothing about it: it is imposed at every pole through the lowest coefficients of D.
bool make_residue_free(InstanceSpec& s, ComplexPoly& disc) {
    const int m = static_cast<int>(s.poles.size());
    Eigen::MatrixXcd A(m - 1, m - 1);
    Eigen::VectorXcd b(m - 1);
    for (int j = 0; j < m - 1; ++j) {
        for (int c = 0; c < m - 1; ++c)
            A(j, c) = residue_over_pole(s, j, [&](cplx x) { return std::pow(x, c); });
        b(j) = -residue_over_pole(s, j, [&](cplx x) { return s.numer[0](x); });
    }
    Eigen::VectorXcd dc = A.colPivHouseholderQr().solve(b);
    for (int c = 0; c < m - 1; ++c) s.numer[0].coeffs()[static_cast<std::size_t>(c)] += dc(c);

    // Newton on the m lowest coefficients of D; the residues are holomorphic in them
    auto residues = [&](const ComplexPoly& D) {
        Eigen::VectorXcd r(m);
        for (int j = 0; j < m; ++j) r(j) = residue_sqrt_over_pole(s, j, D);
        return r;
    };
    ComplexPoly D = disc;
    for (int it = 0; it < 40; ++it) {
        const Eigen::VectorXcd r = residues(D);
        if (r.cwiseAbs().maxCoeff() < 1e-15) break;
        Eigen::MatrixXcd J(m, m);
        const double h = 1e-7;
        for (int c = 0; c < m; ++c) {
            ComplexPoly Dp = D, Dm = D;
            Dp.coeffs()[static_cast<std::size_t>(c)] += h;
            Dm.coeffs()[static_cast<std::size_t>(c)] -= h;
            J.col(c) = (residues(Dp) - residues(Dm)) / (2.0 * h);
        }
        const Eigen::VectorXcd step = J.fullPivLu().solve(r);
        for (int c = 0; c < m; ++c) D.coeffs()[static_cast<std::size_t>(c)] -= step(c);
    }
    if (residues(D).cwiseAbs().maxCoeff() > 1e-13) return false;
    disc = D;
    s.numer[1] = (s.numer[0] * s.numer[0] - disc) * cplx(0.25);
    return true;
}

InstanceSpec generate(const std::string& label, std::uint64_t seed, double margin) {
    std::mt19937_64 rng(seed);
    InstanceSpec s;
    s.label = label;
    s.n = 2;
    if (label == "ell4") s.poles = {{0.0, 4}};
    else if (label == "g2-5")
        s.poles = {{cplx(0.0, 0.0), 1}, {cplx(1.0, 0.2), 1}, {cplx(-0.3, 1.1), 1}, {cplx(-1.1, -0.4), 1}, {cplx(0.4, -1.0), 1}};
    else if (label == "g2-23" || label == "g2-resfree") s.poles = {{cplx(0.0, 0.0), 2}, {cplx(1.0, 0.3), 3}};
    else throw std::runtime_error("unknown label " + label);

    for (int attempt = 0; attempt < 100000; ++attempt) {
        s.numer = {random_poly(rng, s.max_degree(1)), random_poly(rng, s.max_degree(2))};
        if (label == "g2-resfree") {
            // draw the discriminant directly and solve for N_2
            ComplexPoly disc = random_poly(rng, s.max_degree(2));
            if (!make_residue_free(s, disc)) continue;
        }
        const auto rep = validate_genericity(s);
        if (rep.pass && rep.margin >= margin) {
            std::cerr << label << ": accepted draw " << attempt << " (margin " << rep.margin << ")\n";
            return s;
        }
    }
    throw std::runtime_error("no generic draw found for " + label);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the built-in spectral-cover instances"};
    std::string outdir = "data/instances";
    double margin = 0.12;
    app.add_option("--out", outdir, "output directory");
    app.add_option("--margin", margin, "minimal relative separation of special points");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(outdir);
    const std::vector<std::pair<std::string, std::uint64_t>> labels = {
        {"ell4", 4001}, {"g2-5", 2005}, {"g2-23", 2023}, {"g2-resfree", 2230}};
    for (const auto& [label, seed] : labels) {
        const InstanceSpec s = generate(label, seed, margin);
        std::ofstream(outdir + "/" + label + ".json") << instance_to_json(s) << "\n";
    }
    return 0;
}
