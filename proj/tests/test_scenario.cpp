#include "ergolab/scenario.hpp"
#include "ergolab/serialization.hpp"
#include "ergolab/maximal.hpp"
#include "ergolab/averaging.hpp"
#include "ergolab/random.hpp"
#include "support/helpers.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sstream>

using namespace ergolab;
namespace fs = std::filesystem;

namespace {

const fs::path scenario_dir = ERGOLAB_SCENARIO_DIR;

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("ergolab_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("bundled yeadon_identity scenario produces one valid certificate row") {
    fs::path out = fresh_dir("yeadon_out");
    ScenarioOutcome res = run_scenario(scenario_dir / "yeadon_identity.json", out);
    CHECK(res.status == scenario_ok);
    CHECK(res.passed);
    const std::string csv = slurp(out / "maximal_search.csv");
    // header plus exactly one row, flagged valid and found
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("true,true") != std::string::npos);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "certificates.json"));
}

TEST_CASE("bundled convergence scenario emits a decreasing three-row gap curve") {
    fs::path out = fresh_dir("conv_out");
    ScenarioOutcome res = run_scenario(scenario_dir / "convergence_nosquares.json", out);
    CHECK(res.status == scenario_ok);
    const std::string csv = slurp(out / "convergence.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "N,gap,trace_defect");
    std::vector<double> gaps;
    while (std::getline(is, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        gaps.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[1] <= gaps[0]);
    CHECK(gaps[2] <= gaps[1]);
    CHECK(fs::exists(out / "gap_curve.svg"));
}

TEST_CASE("malformed configs exit 2 without creating an output directory") {
    fs::path tmp = fresh_dir("bad_cfg");
    fs::path cfg = tmp / "broken.json";
    atomic_write_file(cfg, "{ this is not json");
    fs::path out = tmp / "should_not_exist";
    ScenarioOutcome res = run_scenario(cfg, out);
    CHECK(res.status == scenario_parse_error);
    CHECK_FALSE(fs::exists(out));

    SUBCASE("unknown spec_version is a parse error") {
        fs::path cfg2 = tmp / "version.json";
        atomic_write_file(cfg2, R"({"spec_version": 9, "experiment": "norm-table",
                                    "algebra": {"dims": [1], "weights": [1.0]}})");
        CHECK(run_scenario(cfg2, tmp / "nope").status == scenario_parse_error);
    }
}

TEST_CASE("hypothesis violations exit 3 and name the hypothesis") {
    fs::path tmp = fresh_dir("hypothesis");
    fs::path cfg = tmp / "noncentral.json";
    atomic_write_file(cfg, R"({
      "spec_version": 1, "id": "noncentral", "experiment": "maximal-search",
      "seed": 3, "algebra": {"dims": [2], "weights": [1.0]},
      "operator": {"type": "unitary"}, "kind": "weighted",
      "weights": {"kind": "trig", "haar_terms": 1},
      "instances": 1, "horizon": 8
    })");
    ScenarioOutcome res = run_scenario(cfg, tmp / "out");
    CHECK(res.status == scenario_hypothesis_violation);
    CHECK(res.detail.find("Z(M)") != std::string::npos);
}

TEST_CASE("certificates re-validate on reload through the independent verifier") {
    fs::path out = fresh_dir("revalidate");
    ScenarioOutcome res = run_scenario(scenario_dir / "yeadon_identity.json", out);
    REQUIRE(res.status == scenario_ok);

    // reconstruct the instance exactly as the runner does
    std::ifstream in(out / "certificates.json");
    nlohmann::json certs;
    in >> certs;
    REQUIRE(certs.size() == 1);
    const auto& c = certs.at(0);

    AlgebraPtr alg = make_algebra({2, 1}, {1.0, 2.0});
    Rng inst_rng(Rng::mix(7, 1000 + 0));
    Rng op_rng = inst_rng.fork(1);
    Rng w_rng = inst_rng.fork(2);
    Rng x_rng = inst_rng.fork(3);
    (void)op_rng;
    (void)w_rng;
    DsOperator op = DsOperator::identity(alg);
    AlgebraElement x = random_positive(alg, x_rng);

    Projection e = Projection::checked(element_from_json(c.at("projection").dump()), 1e-8);
    std::vector<AlgebraElement> family =
        plain_average_family(op, x, c.at("horizon").get<std::int64_t>());
    MaximalCertificate cert = verify_certificate(
        family, e, c.at("trace_bound").get<double>(), c.at("sup_bound").get<double>(),
        MaximalConstants{c.at("eps").get<double>(), std::nullopt, std::nullopt});
    CHECK(cert.valid());
    CHECK(cert.achieved_sup == doctest::Approx(c.at("achieved_sup").get<double>()).epsilon(1e-9));
    CHECK(cert.trace_defect == doctest::Approx(c.at("trace_defect").get<double>()).epsilon(1e-9));
}

TEST_CASE("suite runs are deterministic and parallelism-independent") {
    fs::path out1 = fresh_dir("suite1");
    fs::path out2 = fresh_dir("suite2");
    SuiteSummary s1 = run_suite(scenario_dir / "suite", 1, out1);
    SuiteSummary s2 = run_suite(scenario_dir / "suite", 4, out2);
    CHECK(s1.all_passed);
    CHECK(s2.all_passed);
    CHECK(slurp(s1.summary_csv) == slurp(s2.summary_csv));

    // every CSV byte-identical across the two runs
    for (const auto& entry : fs::recursive_directory_iterator(out1)) {
        if (entry.path().extension() != ".csv") continue;
        fs::path other = out2 / fs::relative(entry.path(), out1);
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("a crashing scenario is recorded as a failure and the suite continues") {
    fs::path dir = fresh_dir("mixed_suite");
    fs::path out = fresh_dir("mixed_suite_out");
    fs::copy_file(scenario_dir / "norms_basic.json", dir / "a_norms.json");
    atomic_write_file(dir / "b_broken.json", R"({"spec_version": 1, "experiment": "norm-table",
        "algebra": {"dims": [2], "weights": [-1.0]}})");  // invalid weight
    SuiteSummary s = run_suite(dir, 2, out);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].passed);
    CHECK_FALSE(s.rows[1].passed);
    CHECK_FALSE(s.all_passed);
    CHECK(slurp(s.summary_csv).find("fail") != std::string::npos);
}

TEST_CASE("ERGOLAB_SEED overrides the config seed") {
    fs::path out1 = fresh_dir("seed_default");
    fs::path out2 = fresh_dir("seed_env");
    ScenarioOutcome base = run_scenario(scenario_dir / "norms_basic.json", out1);
    REQUIRE(base.status == scenario_ok);
    setenv("ERGOLAB_SEED", "987654321", 1);
    ScenarioOutcome overridden = run_scenario(scenario_dir / "norms_basic.json", out2);
    unsetenv("ERGOLAB_SEED");
    REQUIRE(overridden.status == scenario_ok);
    CHECK(slurp(out1 / "norm_table.csv") != slurp(out2 / "norm_table.csv"));
}

TEST_CASE("empty suite directory yields an empty passing summary") {
    fs::path dir = fresh_dir("empty_suite");
    fs::path out = fresh_dir("empty_suite_out");
    SuiteSummary s = run_suite(dir, 2, out);
    CHECK(s.rows.empty());
    CHECK(s.all_passed);
    CHECK(slurp(s.summary_csv) == "scenario,experiment,passed,detail\n");
}

TEST_CASE("two-sided and permutation-operator configs run end to end") {
    fs::path tmp = fresh_dir("extra_cfgs");
    atomic_write_file(tmp / "two_sided.json", R"({
      "spec_version": 1, "id": "two_sided", "experiment": "convergence",
      "seed": 5, "algebra": {"dims": [2], "weights": [1.0]},
      "operator": {"type": "unitary"},
      "weights": {"kind": "trig", "haar_terms": 1},
      "right_weights": {"kind": "scalar", "coeffs": [[0.5, 0.0]], "phases": [1.3]},
      "element": {"random": "general"},
      "schedule": [16, 64], "delta": 0.1,
      "acceptance": {"gap_halving": false, "max_witness_defect": 0.1}
    })");
    ScenarioOutcome two = run_scenario(tmp / "two_sided.json", tmp / "two_out");
    CHECK(two.status == scenario_ok);
    CHECK(slurp(tmp / "two_out" / "convergence.csv").find("N,gap") == 0);

    atomic_write_file(tmp / "perm.json", R"({
      "spec_version": 1, "id": "perm", "experiment": "average-trace",
      "seed": 6, "algebra": {"dims": [2, 2], "weights": [1.0, 1.0]},
      "operator": {"type": "permutation", "perm": [1, 0]},
      "weights": {"kind": "constant-one"},
      "subsequence": {"type": "arithmetic", "step": 2, "offset": 0},
      "element": {"random": "selfadjoint"},
      "horizon": 16
    })");
    ScenarioOutcome perm = run_scenario(tmp / "perm.json", tmp / "perm_out");
    CHECK(perm.status == scenario_ok);
    CHECK(slurp(tmp / "perm_out" / "average_trace.csv").find("n,phi_norm") == 0);
}

TEST_CASE("norms table for a serialized element") {
    fs::path tmp = fresh_dir("norms");
    AlgebraElement x = ergolab::testing::example_element();
    write_element_json_file(tmp / "x.json", x);
    const std::string table = norms_table(tmp / "x.json", {"p:1", "p:2"});
    CHECK(table.find("phi,luxemburg,modular1,l1,l2,op") == 0);
    // row for p:1 starts with the Luxemburg norm ||x||_1 = 14
    const size_t row = table.find("p:1,");
    REQUIRE(row != std::string::npos);
    CHECK(std::stod(table.substr(row + 4)) == doctest::Approx(14.0).epsilon(1e-8));
}

#ifdef ERGOLAB_CLI_PATH
TEST_CASE("CLI exit codes") {
    const std::string cli = ERGOLAB_CLI_PATH;
    fs::path tmp = fresh_dir("cli_codes");
    atomic_write_file(tmp / "broken.json", "{nope");
    const int parse_rc =
        std::system((cli + " run " + (tmp / "broken.json").string() + " >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(parse_rc) == scenario_parse_error);
}
#endif
