#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "speclab/harness.hpp"

using namespace speclab;

namespace {

std::vector<double> parse_eps_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw DomainError("bad epsilon '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write " + path);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral cover periods, kernels and their variations"};
    app.require_subcommand(1);

    std::string instance;
    auto* describe_cmd = app.add_subcommand("describe", "Counts, branch points, genericity and coordinates");
    describe_cmd->add_option("--instance", instance, "built-in label or instance file")->required();

    std::string suite, report_path;
    SuiteOptions opt;
    double tol = 0.0;
    auto* verify_cmd = app.add_subcommand("verify", "Run a check suite and write a JSON report");
    verify_cmd->add_option("--instance", instance, "built-in label or instance file")->required();
    verify_cmd->add_option("--suite", suite, "suite name")->required();
    verify_cmd->add_option("--tol", tol, "relative tolerance replacing every gating tolerance");
    verify_cmd->add_option("--eps", opt.eps_rel, "finite-difference step relative to max(1, |z|)");
    verify_cmd->add_option("--report", report_path, "JSON report path (stdout if omitted)");

    std::string functional, coord, eps_list, out_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "Central-difference error against a residue formula over eps");
    sweep_cmd->add_option("--instance", instance, "built-in label or instance file")->required();
    sweep_cmd->add_option("--functional", functional, "one of: v, branch-integrals, omega, v-alpha, bidifferential, "
                                                      "log-prime-form, omega-gradient, b-periods, q2")
        ->required();
    sweep_cmd->add_option("--coord", coord, "coordinate name, e.g. A_1 or C_1^(2),2")->required();
    sweep_cmd->add_option("--eps-list", eps_list, "comma separated relative steps")->required();
    sweep_cmd->add_option("--out", out_path, "CSV path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*describe_cmd) {
            std::cout << describe(instance).dump(2) << '\n';
            return 0;
        }
        if (*verify_cmd) {
            if (verify_cmd->count("--tol")) opt.tol = tol;
            const Report rep = run_suite(instance, suite, opt);
            const std::string text = rep.to_json().dump(2) + "\n";
            if (report_path.empty()) std::cout << text;
            else write_text(report_path, text);
            int failed = 0, gating = 0;
            for (const auto& c : rep.checks) {
                if (!c.gating) continue;
                ++gating;
                if (!c.pass) ++failed;
            }
            std::cerr << rep.instance << " / " << rep.suite << ": " << gating - failed << "/" << gating
                      << " gating checks pass" << (rep.failure.empty() ? "" : "; failure: " + rep.failure) << '\n';
            return rep.pass ? 0 : 1;
        }
        if (*sweep_cmd) {
            const auto rows = sweep_epsilon(instance, functional, coord, parse_eps_list(eps_list));
            const std::string csv = sweep_csv(rows);
            if (out_path.empty()) std::cout << csv;
            else write_text(out_path, csv);
            for (const auto& r : rows)
                if (r.noise_floor) std::cerr << "eps " << r.eps << ": error at the Newton noise floor\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
