// One line per acceptance criterion; exit code 0 iff all pass.
#include <cstdio>
#include <future>
#include <map>
#include <set>

#include "speclab/harness.hpp"
#include "speclab/library.hpp"

using namespace speclab;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::set<std::string> instances;  // empty: every built-in instance
    std::set<std::string> groups;
};

struct Tally {
    int total = 0, failed = 0;
    double worst = 0.0;  // largest err / tol among gating checks
    std::string worst_name;
    std::vector<std::string> failures;
};

}  // namespace

int main() {
    const std::vector<std::string> labels = builtin_labels();
    std::map<std::string, std::future<Report>> jobs;
    for (const auto& l : labels) jobs.emplace(l, std::async(std::launch::async, [l] { return run_suite(l, "all"); }));
    std::map<std::string, Report> reports;
    for (auto& [l, f] : jobs) reports.emplace(l, f.get());

    // sweeps of every functional in one direction each
    std::vector<std::pair<std::string, std::string>> sweeps{
        {"v", "C_2^(1),2"},       {"branch-integrals", "C_1^(2),2"}, {"omega", "A_2"},
        {"v-alpha", "C_2^(2),1"}, {"bidifferential", "A_1"},         {"log-prime-form", "C_2^(1),3"},
        {"omega-gradient", "A_1"}, {"b-periods", "A_2"},             {"q2", "A_1"}};
    const std::vector<double> eps{1e-3, 5e-4, 2.5e-4, 1.25e-4};
    std::vector<std::future<std::vector<SweepRow>>> sweep_jobs;
    for (const auto& [fn, coord] : sweeps)
        sweep_jobs.push_back(std::async(std::launch::async, [fn, coord, &eps] { return sweep_epsilon("g2-23", fn, coord, eps); }));

    const std::vector<Criterion> crit{
        {1, "surface kernel: symmetry, Im Omega > 0, a-normalization, AGM", {}, {"riemann"}},
        {2, "coordinate vector fields against FD of v", {}, {"vector-fields"}},
        {3, "endpoint corrections and their coordinate independence", {}, {"endpoint"}},
        {4, "period matrix variation: FD, residue forms, symmetry, Euler", {}, {"dm-cubic"}},
        {5, "variations of v_alpha and B against FD", {}, {"kernel"}},
        {6, "variation of ln E against FD along a tracked branch", {}, {"prime-form"}},
        {7, "tau gradient against the chain-rule oracle, symmetric cross-partials", {"g2-resfree"}, {"tau"}},
        {8, "period hessian: FD, 24-fold symmetry, dB/dA = Omega", {}, {"hessian"}},
        {9, "Q_n / R_n hierarchy: symmetry, path identities, variation", {}, {"hierarchy"}},
        {10, "convergence order of central differences", {}, {"convergence"}}};

    bool all_pass = true;
    for (const auto& c : crit) {
        Tally t;
        for (const auto& [l, rep] : reports) {
            if (!c.instances.empty() && !c.instances.count(l)) continue;
            if (!rep.failure.empty()) {
                ++t.failed;
                t.failures.push_back(l + ": " + rep.failure);
            }
            for (const auto& r : rep.checks) {
                if (!r.gating || !c.groups.count(r.group)) continue;
                ++t.total;
                if (!r.pass) {
                    ++t.failed;
                    if (t.failures.size() < 3) t.failures.push_back(l + ": " + r.name);
                }
                const double err = r.absolute ? r.abs_err : r.rel_err;
                if (r.tol > 0.0 && err / r.tol > t.worst) {
                    t.worst = err / r.tol;
                    t.worst_name = l + ": " + r.name;
                }
            }
        }
        if (c.id == 10) {
            for (std::size_t k = 0; k < sweeps.size(); ++k) {
                const std::string nm = "g2-23 sweep " + sweeps[k].first + " in " + sweeps[k].second;
                std::vector<SweepRow> rows;
                try {
                    rows = sweep_jobs[k].get();
                } catch (const std::exception& e) {
                    ++t.total;
                    ++t.failed;
                    t.failures.push_back(nm + ": " + e.what());
                    continue;
                }
                const auto ratios = sweep_ratios(rows);
                if (ratios.empty()) {
                    ++t.total;
                    ++t.failed;
                    t.failures.push_back(nm + ": no rows above the noise floor");
                }
                for (double r : ratios) {
                    ++t.total;
                    if (r < 3.5 || r > 4.5) {
                        ++t.failed;
                        t.failures.push_back(nm + ": ratio " + std::to_string(r));
                    }
                }
            }
        }
        const bool ok = t.failed == 0 && t.total > 0;
        all_pass = all_pass && ok;
        std::printf("[%s] criterion %2d: %s (%d checks", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), t.total);
        if (c.id != 10 && !t.worst_name.empty()) std::printf(", worst err/tol %.2g at %s", t.worst, t.worst_name.c_str());
        std::printf(")\n");
        for (const auto& f : t.failures) std::printf("         failed: %s\n", f.c_str());
    }
    return all_pass ? 0 : 1;
}
