#pragma once

#include <complex>
#include <string>
#include <vector>

#include "speclab/numerics/poly.hpp"

namespace speclab {

struct Pole {
    cplx x;
    int k = 1;
};

/// Spectral cover v^n + Q_1 v^{n-1} + ... + Q_n = 0 over the sphere with
/// Q_l = N_l(x) / prod_j (x - y_j)^{l k_j} (dx)^l.
struct InstanceSpec {
    std::string label;
    int n = 2;
    std::vector<Pole> poles;
    std::vector<ComplexPoly> numer;  // numer[l-1] = N_l, constant term first

    int total_order() const {
        int s = 0;
        for (const auto& p : poles) s += p.k;
        return s;
    }
    /// Maximal allowed degree of N_l (regularity at infinity).
    int max_degree(int ell) const { return ell * total_order() - 2 * ell; }
    /// prod_j (x - y_j)^{k_j}
    ComplexPoly pole_polynomial() const;
    /// Number of free complex coefficients across all N_l.
    int coefficient_count() const;
};

struct DerivedCounts {
    int branch_points = 0;   // p
    int genus = 0;           // spectral genus
    int zeros = 0;           // r, degree of the zero divisor of v
    int dim = 0;             // moduli dimension
    std::vector<int> coefficient_dims;  // per l
};

InstanceSpec parse_instance(const std::string& document);
std::string instance_to_json(const InstanceSpec& spec, int indent = 2);

/// Spectral genus, branch point count, zero count and moduli dimension for base genus 0.
DerivedCounts derived_counts(const InstanceSpec& spec);

/// Alternative dimension count n(n+1)/2 * sum k - n^2.
int dimension_by_coefficients(const InstanceSpec& spec);

/// Discriminant in x of psi^n + N_1 psi^{n-1} + ... + N_n (polynomial, degree <= p).
ComplexPoly discriminant(const InstanceSpec& spec);

struct GenericityIssue {
    std::string kind;  // e.g. "non-simple branch point"
    std::vector<cplx> locations;
};

struct GenericityReport {
    bool pass = true;
    std::vector<GenericityIssue> issues;
    std::vector<cplx> branch_points;
    std::vector<cplx> base_zeros;  // roots of N_n
    double margin = 0.0;           // min separation among all special base points
    std::string summary() const;
};

/// Simple, distinct discriminant zeros away from poles and infinity; simple zeros of v;
/// unramified fibers over poles.
GenericityReport validate_genericity(const InstanceSpec& spec, double rel_tol = 1e-7);

}  // namespace speclab
