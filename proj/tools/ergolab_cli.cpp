#include "ergolab/scenario.hpp"
#include "ergolab/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"ergolab: weighted subsequential ergodic averages on tracial matrix algebras"};
    app.set_version_flag("--version", std::string(ergolab::library_version));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: <id>.out next to the scenario)");

    std::string suite_dir;
    std::string suite_out;
    int jobs = 1;
    auto* suite = app.add_subcommand("suite", "run every scenario in a directory");
    suite->add_option("dir", suite_dir, "directory of scenario JSON files")->required();
    suite->add_option("--jobs", jobs, "parallel scenario count")->default_val(1);
    suite->add_option("--out", suite_out, "output root (default: <dir>/suite.out)");

    std::string element_path;
    std::vector<std::string> phis;
    auto* norms = app.add_subcommand("norms", "norm table for a serialized element");
    norms->add_option("element", element_path, "element JSON file")->required();
    norms->add_option("--phi", phis, "Orlicz spec, e.g. p:2 or expm1 (repeatable)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ergolab::ScenarioOutcome outcome = ergolab::run_scenario(scenario_path, out_dir);
        if (outcome.status == ergolab::scenario_parse_error)
            std::cerr << "parse error: " << outcome.detail << "\n";
        else if (outcome.status == ergolab::scenario_hypothesis_violation)
            std::cerr << "hypothesis violation: " << outcome.detail << "\n";
        else
            std::cout << outcome.id << ": " << (outcome.passed ? "pass" : "fail") << " ("
                      << outcome.detail << ")\n";
        return outcome.status;
    }
    if (suite->parsed()) {
        if (suite_out.empty()) suite_out = suite_dir + "/suite.out";
        ergolab::SuiteSummary summary = ergolab::run_suite(suite_dir, jobs, suite_out);
        for (const auto& row : summary.rows)
            std::cout << row.id << ": " << (row.passed ? "pass" : "fail") << " (" << row.detail
                      << ")\n";
        std::cout << "summary: " << summary.summary_csv.string() << "\n";
        return summary.all_passed ? 0 : 1;
    }
    if (norms->parsed()) {
        if (phis.empty()) phis = {"p:1", "p:2"};
        try {
            std::cout << ergolab::norms_table(element_path, phis);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        return 0;
    }
    return 0;
}
