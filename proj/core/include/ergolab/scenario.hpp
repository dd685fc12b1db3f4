#ifndef ERGOLAB_SCENARIO_HPP
#define ERGOLAB_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ergolab {

/// Exit statuses shared by the library entry points and the CLI.
enum ScenarioStatus : int {
    scenario_ok = 0,
    scenario_acceptance_failed = 1,
    scenario_parse_error = 2,
    scenario_hypothesis_violation = 3,
};

struct ScenarioOutcome {
    int status = scenario_ok;
    std::string id;
    std::string experiment;
    bool passed = false;
    std::string detail;
    std::filesystem::path out_dir;
};

/// Parses, validates and runs one scenario file; writes manifest.json, the
/// per-experiment CSV and certificate JSON into out_dir (default: a directory
/// named after the scenario id next to the config).  The ERGOLAB_SEED
/// environment variable overrides the config seed.  Fixed seeds produce
/// byte-identical CSV output.
ScenarioOutcome run_scenario(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir = {});

struct SuiteSummary {
    std::vector<ScenarioOutcome> rows;
    bool all_passed = false;
    std::filesystem::path summary_csv;
};

/// Runs every *.json scenario under dir (sorted by filename) with the given
/// parallelism and writes suite_summary.csv into out_root.  Crashing
/// scenarios are recorded as failures and the suite continues.
SuiteSummary run_suite(const std::filesystem::path& dir, int jobs,
                       const std::filesystem::path& out_root);

/// Norm table for a serialized element: one row per requested Orlicz spec.
/// Returns the CSV text (header + rows).
std::string norms_table(const std::filesystem::path& element_path,
                        const std::vector<std::string>& phi_specs);

}  // namespace ergolab

#endif  // ERGOLAB_SCENARIO_HPP
