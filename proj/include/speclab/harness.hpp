#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/numerics/poly.hpp"

namespace speclab {

struct CheckResult {
    std::string name;
    std::string group;     // family of identities the check belongs to
    std::string paper_eq;  // identifier of the formula under test
    cplx lhs = 0.0, rhs = 0.0;
    double abs_err = 0.0, rel_err = 0.0, tol = 0.0;
    bool absolute = false;  // compared in absolute error (natural scale 0)
    bool gating = true;
    bool pass = false;
    double seconds = 0.0;
    std::string note;
};

struct Report {
    std::string instance, suite;
    std::vector<CheckResult> checks;
    nlohmann::ordered_json environment;
    bool pass = true;
    std::string failure;  // build or evaluation failure, empty otherwise

    nlohmann::ordered_json to_json(bool with_timings = true) const;
};

struct SuiteOptions {
    std::optional<double> tol;  // replaces every gating tolerance
    double eps_rel = 1e-4;      // finite-difference step relative to max(1, |z|)
};

std::vector<std::string> suite_names();
/// Runs one suite ("all" runs every suite) on a built-in label or instance file.
Report run_suite(const std::string& instance, const std::string& suite, const SuiteOptions& opt = {});

struct SweepRow {
    double eps = 0.0;
    cplx fd = 0.0, formula = 0.0;  // entry with the largest formula magnitude
    double err = 0.0;              // max over entries of |central difference - formula|
    double ratio = 0.0;            // err(previous eps) / err(this eps); 0 on the first row
    bool noise_floor = false;
};

std::vector<std::string> sweep_functionals();
/// Plain central differences (no Richardson) of a functional against its residue formula.
/// 'coordinate' is a coordinate name such as "A_1" or "C_1^(2),2"; eps are relative to max(1, |z|).
std::vector<SweepRow> sweep_epsilon(const std::string& instance, const std::string& functional,
                                    const std::string& coordinate, const std::vector<double>& eps);
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Orders of consecutive halvings before the noise floor; empty if fewer than two usable rows.
std::vector<double> sweep_ratios(const std::vector<SweepRow>& rows);

nlohmann::json describe(const std::string& instance);

nlohmann::ordered_json environment_stamp();

}  // namespace speclab
