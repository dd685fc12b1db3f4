#include "ergolab/scenario.hpp"

#include "ergolab/algebra.hpp"
#include "ergolab/averaging.hpp"
#include "ergolab/convergence.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/maximal.hpp"
#include "ergolab/orlicz.hpp"
#include "ergolab/random.hpp"
#include "ergolab/serialization.hpp"
#include "ergolab/singular_values.hpp"
#include "ergolab/subsequence.hpp"
#include "ergolab/version.hpp"
#include "ergolab/weights.hpp"

#include <json.hpp>

#include <atomic>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ergolab {

using nlohmann::json;

namespace {

// theorem-hypothesis violations get their own exit status
class hypothesis_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Complex json_complex(const json& v) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2)
        return Complex(v.at(0).get<double>(), v.at(1).get<double>());
    throw std::invalid_argument("complex values must be numbers or [re, im] pairs");
}

PerturbationSchedule parse_perturbation(const json& spec) {
    PerturbationSchedule sched;
    if (spec.is_null()) return sched;
    const std::string type = spec.value("type", "none");
    if (type == "none") {
        sched.type = PerturbationSchedule::Type::none;
    } else if (type == "harmonic") {
        sched.type = PerturbationSchedule::Type::harmonic;
        sched.eps0 = spec.at("eps0").get<double>();
    } else if (type == "geometric") {
        sched.type = PerturbationSchedule::Type::geometric;
        sched.eps0 = spec.at("eps0").get<double>();
        sched.ratio = spec.value("ratio", 0.5);
    } else {
        throw std::invalid_argument("perturbation schedule '" + type +
                                    "' is not Cesaro-null; use none, harmonic or geometric");
    }
    sched.validate();
    return sched;
}

DsOperator build_operator(const json& spec, const AlgebraPtr& alg, Rng& rng) {
    const std::string type = spec.value("type", "identity");
    if (type == "identity") return DsOperator::identity(alg);
    if (type == "unitary") {
        if (spec.contains("u")) {
            AlgebraElement u = element_from_json(spec.at("u").dump());
            if (!(*u.algebra() == *alg))
                throw std::invalid_argument("inline unitary algebra mismatch");
            return DsOperator::from_unitary(AlgebraElement(alg, u.blocks()));
        }
        if (spec.value("equispaced_phases", false)) {
            std::vector<Matrix> blocks;
            for (int b = 0; b < alg->block_count(); ++b) {
                const int d = alg->block_dim(b);
                const double offset = rng.uniform(0.0, 2.0 * M_PI);
                Matrix m = Matrix::Zero(d, d);
                for (int i = 0; i < d; ++i)
                    m(i, i) = std::polar(1.0, offset + 2.0 * M_PI * i / d);
                blocks.push_back(std::move(m));
            }
            return DsOperator::from_unitary(AlgebraElement(alg, std::move(blocks)));
        }
        return DsOperator::from_unitary(random_unitary(alg, rng));
    }
    if (type == "kraus") {
        if (spec.contains("ks")) {
            std::vector<AlgebraElement> ks;
            for (const auto& k : spec.at("ks")) {
                AlgebraElement e = element_from_json(k.dump());
                if (!(*e.algebra() == *alg))
                    throw std::invalid_argument("inline Kraus algebra mismatch");
                ks.emplace_back(alg, e.blocks());
            }
            return DsOperator::from_kraus(std::move(ks));
        }
        const int m = spec.value("random_unistochastic", 2);
        if (m < 1) throw std::invalid_argument("random_unistochastic needs >= 1 terms");
        std::vector<double> w;
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            w.push_back(rng.uniform(0.2, 1.0));
            total += w.back();
        }
        std::vector<AlgebraElement> ks;
        for (int i = 0; i < m; ++i) {
            const double c = std::sqrt(w[static_cast<size_t>(i)] / total);
            ks.push_back(c * random_unitary(alg, rng));
        }
        return DsOperator::from_kraus(std::move(ks));
    }
    if (type == "permutation")
        return DsOperator::from_block_permutation(alg, spec.at("perm").get<std::vector<int>>());
    if (type == "mix") {
        std::vector<std::pair<double, DsOperator>> parts;
        for (const auto& c : spec.at("components"))
            parts.emplace_back(c.at("weight").get<double>(),
                               build_operator(c.at("operator"), alg, rng));
        return DsOperator::mixture(std::move(parts));
    }
    throw std::invalid_argument("unknown operator type: " + type);
}

WeightSequence build_weights(const json& spec, const AlgebraPtr& alg, Rng& rng,
                             std::uint64_t default_seed) {
    const std::string kind = spec.value("kind", "constant-one");
    const std::uint64_t seed = spec.value("seed", default_seed);
    PerturbationSchedule sched = parse_perturbation(spec.value("perturbation", json()));
    if (kind == "constant-one") return WeightSequence::constant_one(alg);
    if (kind == "central-scalar") {
        std::vector<Complex> coeffs;
        std::vector<std::vector<double>> phases;
        if (spec.contains("random_terms")) {
            const int terms = spec.at("random_terms").get<int>();
            if (terms < 1) throw std::invalid_argument("random_terms needs >= 1");
            for (int t = 0; t < terms; ++t) {
                coeffs.push_back(std::polar(rng.uniform(0.3, 1.0), rng.uniform(0.0, 2.0 * M_PI)));
                std::vector<double> row;
                for (int b = 0; b < alg->block_count(); ++b)
                    row.push_back(rng.uniform(0.4, 2.0 * M_PI - 0.4));
                phases.push_back(std::move(row));
            }
            double norm = 0.0;
            for (Complex z : coeffs) norm += std::abs(z);
            for (Complex& z : coeffs) z /= norm;
        } else {
            for (const auto& c : spec.at("coeffs")) coeffs.push_back(json_complex(c));
            for (const auto& p : spec.at("phases"))
                phases.push_back(p.get<std::vector<double>>());
        }
        return make_central_besicovitch(alg, std::move(coeffs), std::move(phases), sched, seed);
    }
    if (kind == "scalar") {
        if (spec.value("alternating", false))
            return WeightSequence::scalar(alg, {Complex(1.0, 0.0)}, {M_PI}, sched, seed);
        std::vector<Complex> coeffs;
        for (const auto& c : spec.at("coeffs")) coeffs.push_back(json_complex(c));
        const auto& angles = spec.contains("phases") ? spec.at("phases") : spec.at("angles");
        return WeightSequence::scalar(alg, std::move(coeffs), angles.get<std::vector<double>>(),
                                      sched, seed);
    }
    if (kind == "trig" || kind == "perturbed-trig") {
        std::vector<Complex> coeffs;
        std::vector<AlgebraElement> unitaries;
        if (spec.contains("haar_terms")) {
            const int terms = spec.at("haar_terms").get<int>();
            for (int t = 0; t < terms; ++t) {
                coeffs.push_back(std::polar(rng.uniform(0.3, 1.0), rng.uniform(0.0, 2.0 * M_PI)));
                unitaries.push_back(random_unitary(alg, rng));
            }
            double norm = 0.0;
            for (Complex z : coeffs) norm += std::abs(z);
            for (Complex& z : coeffs) z /= norm;
        } else {
            for (const auto& c : spec.at("coeffs")) coeffs.push_back(json_complex(c));
            for (const auto& u : spec.at("unitaries")) {
                AlgebraElement e = element_from_json(u.dump());
                unitaries.emplace_back(alg, e.blocks());
            }
        }
        return WeightSequence::from_trig(TrigPolynomial(std::move(coeffs), std::move(unitaries)),
                                         sched, seed);
    }
    throw std::invalid_argument("unknown weight kind: " + kind);
}

std::optional<Subsequence> build_subsequence(const json& spec) {
    if (spec.is_null()) return std::nullopt;
    const std::string type = spec.value("type", "all");
    if (type == "all") return Subsequence::all();
    if (type == "arithmetic")
        return Subsequence::arithmetic(spec.at("step").get<std::int64_t>(),
                                       spec.value("offset", std::int64_t{0}));
    if (type == "nosquares") return Subsequence::squares_complement();
    if (type == "list")
        return Subsequence::explicit_list(spec.at("values").get<std::vector<std::int64_t>>());
    throw std::invalid_argument("unknown subsequence type: " + type);
}

AlgebraElement build_element(const json& spec, const AlgebraPtr& alg, Rng& rng) {
    if (spec.is_null()) return random_self_adjoint(alg, rng);
    if (spec.contains("inline")) {
        AlgebraElement e = element_from_json(spec.at("inline").dump());
        if (!(*e.algebra() == *alg))
            throw std::invalid_argument("inline element algebra mismatch");
        return AlgebraElement(alg, e.blocks());
    }
    const std::string kind = spec.value("random", "selfadjoint");
    const double scale = spec.value("scale", 1.0);
    if (kind == "positive") return random_positive(alg, rng, scale);
    if (kind == "selfadjoint") return random_self_adjoint(alg, rng, scale);
    if (kind == "general") return random_element(alg, rng, scale);
    throw std::invalid_argument("unknown element kind: " + kind);
}

struct Parsed {
    json config;
    std::string id;
    std::string experiment;
    std::uint64_t seed = 0;
    AlgebraPtr algebra;
};

Parsed parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
    Parsed p;
    in >> p.config;
    const int version = p.config.value("spec_version", 0);
    if (version != 1)
        throw std::invalid_argument("unsupported spec_version (expected 1)");
    p.id = p.config.value("id", path.stem().string());
    p.experiment = p.config.at("experiment").get<std::string>();
    p.seed = p.config.value("seed", std::uint64_t{0});
    if (const char* env = std::getenv("ERGOLAB_SEED")) p.seed = std::strtoull(env, nullptr, 10);
    const json& alg = p.config.at("algebra");
    p.algebra = make_algebra(alg.at("dims").get<std::vector<int>>(),
                             alg.at("weights").get<std::vector<double>>());
    return p;
}

// ---------------------------------------------------------------------------
// experiment runners; each returns (passed, detail) and appends output files

struct Outputs {
    std::filesystem::path dir;
    std::vector<std::string> names;
    void write(const std::string& name, const std::string& contents) {
        atomic_write_file(dir / name, contents);
        names.push_back(name);
    }
};

std::string svg_curve(const std::vector<double>& ys) {
    const double width = 640, height = 400, margin = 48;
    double lo = 0.0, hi = 1e-300;
    for (double y : ys) hi = std::max(hi, y);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
    os << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (size_t i = 0; i < ys.size(); ++i) {
        const double x = margin + (width - 2 * margin) * (ys.size() == 1 ? 0.5 : static_cast<double>(i) / (ys.size() - 1));
        const double y = height - margin - (height - 2 * margin) * ((ys[i] - lo) / (hi - lo));
        os << format_double(x) << "," << format_double(y) << " ";
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

std::pair<bool, std::string> run_average_trace(const Parsed& p, Outputs& out) {
    Rng op_rng(Rng::mix(p.seed, 1));
    Rng w_rng(Rng::mix(p.seed, 2));
    Rng x_rng(Rng::mix(p.seed, 4));
    DsOperator op = build_operator(p.config.value("operator", json{{"type", "identity"}}),
                                   p.algebra, op_rng);
    WeightSequence left = build_weights(p.config.value("weights", json{{"kind", "constant-one"}}),
                                        p.algebra, w_rng, p.seed);
    std::optional<WeightSequence> right;
    if (p.config.contains("right_weights")) {
        Rng r_rng(Rng::mix(p.seed, 3));
        right = build_weights(p.config.at("right_weights"), p.algebra, r_rng, p.seed + 1);
    }
    std::optional<Subsequence> subseq = build_subsequence(p.config.value("subsequence", json()));
    AlgebraElement x = build_element(p.config.value("element", json()), p.algebra, x_rng);
    OrliczFunction phi = OrliczFunction::parse(p.config.value("orlicz", "p:2"));
    const auto horizon = p.config.value("horizon", std::int64_t{64});

    std::vector<std::array<int, 3>> entries;
    if (p.config.contains("entries"))
        for (const auto& e : p.config.at("entries"))
            entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    else
        entries.push_back({0, 0, 0});

    AverageRequest req(op, left, right, subseq, x, horizon);
    std::vector<std::int64_t> points;
    for (std::int64_t n = 1; n <= horizon; ++n) points.push_back(n);
    std::vector<AlgebraElement> avgs = average_trajectory(req, points, subseq.has_value());

    const double c_bound = left.bound() * (right ? right->bound() : 1.0);
    const double x_phi = luxemburg_norm(x, phi);
    const double slack = p.config.value("acceptance", json::object()).value("norm_bound_slack", 1e-8);

    std::ostringstream csv;
    csv << "n,phi_norm,step_delta_inf";
    for (size_t e = 0; e < entries.size(); ++e) csv << ",entry" << e << "_re,entry" << e << "_im";
    csv << "\n";
    bool norm_ok = true;
    for (size_t i = 0; i < avgs.size(); ++i) {
        const double phi_norm = luxemburg_norm(avgs[i], phi);
        norm_ok = norm_ok && phi_norm <= c_bound * x_phi + slack;
        const double step = i == 0 ? 0.0 : operator_norm(avgs[i] - avgs[i - 1]);
        csv << points[i] << "," << format_double(phi_norm) << "," << format_double(step);
        for (const auto& e : entries) {
            const Complex v = avgs[i].block(e[0])(e[1], e[2]);
            csv << "," << format_double(v.real()) << "," << format_double(v.imag());
        }
        csv << "\n";
    }
    out.write("average_trace.csv", csv.str());

    bool rewrite_ok = true;
    std::string detail = "norm_bound=" + std::string(norm_ok ? "ok" : "violated");
    if (subseq) {
        const double tol = p.config.value("acceptance", json::object()).value("rewrite_tol", 1e-12);
        RewriteCheck rc = rewrite_identity_check(
            AverageRequest(op, left, std::nullopt, subseq, x, horizon), horizon, tol);
        rewrite_ok = rc.within_tol;
        detail += ";rewrite_defect=" + format_double(rc.defect);
    }
    return {norm_ok && rewrite_ok, detail};
}

std::pair<bool, std::string> run_maximal_search(const Parsed& p, Outputs& out) {
    const std::string kind = p.config.value("kind", "yeadon");
    const int instances = p.config.value("instances", 20);
    const auto horizon = p.config.value("horizon", std::int64_t{64});
    const double pp = p.config.value("p", 2.0);
    std::vector<double> eps_factors =
        p.config.value("eps_factors", std::vector<double>{0.25, 0.5, 1.0});

    if (kind == "weighted") {
        // centrality is required for the weighted maximal bounds; probe the config up front
        json wspec = p.config.value("weights", json{{"kind", "constant-one"}});
        const std::string wk = wspec.value("kind", "constant-one");
        if (wk == "trig" || wk == "perturbed-trig")
            throw hypothesis_error(
                "weighted maximal theorem requires b_j in Z(M): non-central weights given");
    }

    std::ostringstream csv;
    csv << "instance,eps,p,weight_bound,trace_defect,trace_bound,achieved_sup,sup_bound,valid,found\n";
    json certs = json::array();
    int searches = 0, successes = 0;
    bool all_returned_valid = true;

    for (int i = 0; i < instances; ++i) {
        Rng inst_rng(Rng::mix(p.seed, 1000 + static_cast<std::uint64_t>(i)));
        Rng op_rng = inst_rng.fork(1);
        Rng w_rng = inst_rng.fork(2);
        Rng x_rng = inst_rng.fork(3);
        DsOperator op = build_operator(p.config.value("operator", json{{"type", "unitary"}}),
                                       p.algebra, op_rng);
        op.verify(8, 1e-8, Rng::mix(p.seed, 77 + static_cast<std::uint64_t>(i)));

        json espec = p.config.value("element", json{{"random", "positive"}});
        AlgebraElement x = kind == "weighted" ? build_element(espec, p.algebra, x_rng)
                                              : random_positive(p.algebra, x_rng);
        std::optional<WeightSequence> weights;
        if (kind == "weighted")
            weights = build_weights(p.config.value("weights", json{{"kind", "central-scalar"},
                                                                   {"random_terms", 2}}),
                                    p.algebra, w_rng, Rng::mix(p.seed, 7 + static_cast<std::uint64_t>(i)));

        const double tau1 = p.algebra->total_trace();
        for (double f : eps_factors) {
            const double eps = kind == "yeadon"
                                   ? f * trace_norm(x) / tau1
                                   : f * lp_norm(x, pp) / std::pow(tau1, 1.0 / pp);
            const MaximalSearchResult res = [&] {
                if (kind == "yeadon") return search_yeadon(op, x, eps, horizon);
                if (kind == "lp") return search_lp(op, x, pp, eps, horizon);
                if (kind == "weighted") return search_weighted(op, *weights, x, pp, eps, horizon);
                throw std::invalid_argument("unknown maximal-search kind: " + kind);
            }();
            ++searches;
            if (res.found) ++successes;
            if (res.found && !res.certificate.valid()) all_returned_valid = false;
            const MaximalCertificate& c = res.certificate;
            csv << i << "," << format_double(eps) << ","
                << (c.constants.p ? format_double(*c.constants.p) : "") << ","
                << (c.constants.weight_bound ? format_double(*c.constants.weight_bound) : "")
                << "," << format_double(c.trace_defect) << "," << format_double(c.paper_bound_trace)
                << "," << format_double(c.achieved_sup) << "," << format_double(c.paper_bound_sup)
                << "," << (c.valid() ? "true" : "false") << "," << (res.found ? "true" : "false")
                << "\n";
            json cj;
            cj["instance"] = i;
            cj["kind"] = kind;
            cj["eps"] = eps;
            if (c.constants.p) cj["p"] = *c.constants.p;
            if (c.constants.weight_bound) cj["weight_bound"] = *c.constants.weight_bound;
            cj["horizon"] = c.horizon;
            cj["trace_defect"] = c.trace_defect;
            cj["trace_bound"] = c.paper_bound_trace;
            cj["achieved_sup"] = c.achieved_sup;
            cj["sup_bound"] = c.paper_bound_sup;
            cj["valid"] = c.valid();
            cj["found"] = res.found;
            cj["projection"] = json::parse(element_to_json(c.e.element()));
            certs.push_back(std::move(cj));
        }
    }

    out.write("maximal_search.csv", csv.str());
    out.write("certificates.json", certs.dump(2) + "\n");

    const double rate = searches == 0 ? 0.0 : static_cast<double>(successes) / searches;
    const json acc = p.config.value("acceptance", json::object());
    const double min_rate = acc.value("min_success_rate", 0.95);
    const bool passed = all_returned_valid && rate >= min_rate;
    return {passed, "success_rate=" + format_double(rate) +
                        ";all_valid=" + (all_returned_valid ? "true" : "false")};
}

std::pair<bool, std::string> run_buem_probe(const Parsed& p, Outputs& out) {
    Rng op_rng(Rng::mix(p.seed, 1));
    Rng w_rng(Rng::mix(p.seed, 2));
    DsOperator op = build_operator(p.config.value("operator", json{{"type", "unitary"}}),
                                   p.algebra, op_rng);
    WeightSequence weights =
        build_weights(p.config.value("weights", json{{"kind", "central-scalar"},
                                                     {"random_terms", 2}}),
                      p.algebra, w_rng, p.seed);
    if (!weights.central())
        throw hypothesis_error("b.u.e.m. probe requires central bounded weights (b_j in Z(M))");
    std::optional<Subsequence> subseq = build_subsequence(p.config.value("subsequence", json()));
    OrliczFunction phi = OrliczFunction::parse(p.config.value("orlicz", "p:2"));

    const double eps = p.config.value("eps", 0.1);
    const double delta = p.config.value("delta", 0.1);
    const auto horizon = p.config.value("horizon", std::int64_t{64});
    const int instances = p.config.value("instances", 50);
    std::vector<double> grid = p.config.value("gamma_grid", std::vector<double>{1e-2, 1e-4, 1e-6});

    BuemProbeReport report = buem_probe({op, weights, subseq}, phi, eps, delta, grid, horizon,
                                        instances, p.seed);

    std::ostringstream csv;
    csv << "gamma,instances,successes,rate\n";
    for (const auto& r : report.rows)
        csv << format_double(r.gamma) << "," << r.instances << "," << r.successes << ","
            << format_double(r.rate) << "\n";
    out.write("buem_probe.csv", csv.str());

    const json acc = p.config.value("acceptance", json::object());
    bool passed = true;
    if (acc.value("rates_nondecreasing", true)) passed = passed && report.rates_nondecreasing();
    const double final_rate = acc.value("final_rate", 1.0);
    passed = passed && !report.rows.empty() && report.rows.back().rate >= final_rate;
    return {passed, "final_rate=" + format_double(report.rows.back().rate)};
}

std::pair<bool, std::string> run_convergence(const Parsed& p, Outputs& out) {
    Rng op_rng(Rng::mix(p.seed, 1));
    Rng w_rng(Rng::mix(p.seed, 2));
    Rng x_rng(Rng::mix(p.seed, 4));
    DsOperator op = build_operator(p.config.value("operator", json{{"type", "unitary"}}),
                                   p.algebra, op_rng);
    WeightSequence left =
        build_weights(p.config.value("weights", json{{"kind", "constant-one"}}), p.algebra, w_rng,
                      p.seed);
    std::optional<WeightSequence> right;
    if (p.config.contains("right_weights")) {
        Rng r_rng(Rng::mix(p.seed, 3));
        right = build_weights(p.config.at("right_weights"), p.algebra, r_rng, p.seed + 1);
    }
    if (!right && !left.central())
        throw hypothesis_error(
            "one-sided convergence probe requires central weights (b_j in Z(M))");
    std::optional<Subsequence> subseq = build_subsequence(p.config.value("subsequence", json()));
    AlgebraElement x = build_element(p.config.value("element", json()), p.algebra, x_rng);
    OrliczFunction phi = OrliczFunction::parse(p.config.value("orlicz", "p:2"));
    const double delta = p.config.value("delta", 0.05);
    std::vector<std::int64_t> schedule =
        p.config.value("schedule", std::vector<std::int64_t>{64, 256, 1024});

    AverageRequest req(op, left, right, subseq, x, 2 * schedule.back() + 1);
    ConvergenceReport report = convergence_probe(req, phi, delta, schedule);

    std::ostringstream csv;
    csv << "N,gap,trace_defect\n";
    for (size_t i = 0; i < schedule.size(); ++i)
        csv << schedule[i] << "," << format_double(report.gaps[i]) << ","
            << format_double(report.witness_trace_defect) << "\n";
    out.write("convergence.csv", csv.str());
    if (p.config.value("svg", false)) out.write("gap_curve.svg", svg_curve(report.gaps));

    const json acc = p.config.value("acceptance", json::object());
    bool passed = true;
    if (acc.value("gap_halving", true)) passed = passed && report.gap_halved();
    passed = passed && report.witness_trace_defect < acc.value("max_witness_defect", delta);
    passed = passed && report.limit_norm_bounded(acc.value("limit_norm_slack", 1e-6));
    return {passed, "gap_first=" + format_double(report.gaps.front()) +
                        ";gap_last=" + format_double(report.gaps.back()) +
                        ";witness_defect=" + format_double(report.witness_trace_defect)};
}

std::pair<bool, std::string> run_norm_table(const Parsed& p, Outputs& out) {
    Rng x_rng(Rng::mix(p.seed, 4));
    std::vector<std::string> phis =
        p.config.value("phis", std::vector<std::string>{"p:1", "p:2", "p:3"});
    const int count = p.config.value("count", 5);

    std::vector<AlgebraElement> elements;
    if (p.config.contains("element"))
        elements.push_back(build_element(p.config.at("element"), p.algebra, x_rng));
    else
        for (int i = 0; i < count; ++i) elements.push_back(random_self_adjoint(p.algebra, x_rng));

    std::ostringstream csv;
    csv << "id,phi,luxemburg,modular1,l1,l2,op\n";
    for (size_t i = 0; i < elements.size(); ++i) {
        for (const auto& spec : phis) {
            OrliczFunction phi = OrliczFunction::parse(spec);
            csv << i << "," << spec << "," << format_double(luxemburg_norm(elements[i], phi)) << ","
                << format_double(modular(elements[i], phi, 1.0)) << ","
                << format_double(lp_norm(elements[i], 1.0)) << ","
                << format_double(lp_norm(elements[i], 2.0)) << ","
                << format_double(operator_norm(elements[i])) << "\n";
        }
    }
    out.write("norm_table.csv", csv.str());
    return {true, "rows=" + std::to_string(elements.size() * phis.size())};
}

}  // namespace

ScenarioOutcome run_scenario(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir) {
    ScenarioOutcome outcome;
    Parsed parsed;
    try {
        parsed = parse_scenario(config_path);
    } catch (const std::exception& e) {
        outcome.status = scenario_parse_error;
        outcome.detail = e.what();
        outcome.passed = false;
        return outcome;
    }
    outcome.id = parsed.id;
    outcome.experiment = parsed.experiment;
    outcome.out_dir = out_dir.empty()
                          ? config_path.parent_path() / (parsed.id + ".out")
                          : out_dir;

    const auto start = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(outcome.out_dir);
        Outputs outputs{outcome.out_dir, {}};
        std::pair<bool, std::string> result;
        if (parsed.experiment == "average-trace")
            result = run_average_trace(parsed, outputs);
        else if (parsed.experiment == "maximal-search")
            result = run_maximal_search(parsed, outputs);
        else if (parsed.experiment == "buem-probe")
            result = run_buem_probe(parsed, outputs);
        else if (parsed.experiment == "convergence")
            result = run_convergence(parsed, outputs);
        else if (parsed.experiment == "norm-table")
            result = run_norm_table(parsed, outputs);
        else
            throw std::invalid_argument("unknown experiment: " + parsed.experiment);

        outcome.passed = result.first;
        outcome.detail = result.second;
        outcome.status = result.first ? scenario_ok : scenario_acceptance_failed;

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest;
        manifest["id"] = parsed.id;
        manifest["spec_version"] = 1;
        manifest["library_version"] = library_version;
        manifest["generator"] = Rng::generator_name();
        manifest["seed"] = parsed.seed;
        manifest["scenario"] = parsed.config;
        manifest["wall_time_seconds"] = wall;
        manifest["outputs"] = outputs.names;
        manifest["passed"] = outcome.passed;
        manifest["detail"] = outcome.detail;
        atomic_write_file(outcome.out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const hypothesis_error& e) {
        outcome.status = scenario_hypothesis_violation;
        outcome.detail = e.what();
        outcome.passed = false;
    } catch (const json::exception& e) {
        outcome.status = scenario_parse_error;
        outcome.detail = std::string("config error: ") + e.what();
        outcome.passed = false;
    } catch (const std::invalid_argument& e) {
        outcome.status = scenario_parse_error;
        outcome.detail = std::string("config error: ") + e.what();
        outcome.passed = false;
    } catch (const std::exception& e) {
        outcome.status = scenario_acceptance_failed;
        outcome.detail = std::string("error: ") + e.what();
        outcome.passed = false;
    }
    return outcome;
}

SuiteSummary run_suite(const std::filesystem::path& dir, int jobs,
                       const std::filesystem::path& out_root) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::filesystem::create_directories(out_root);
    SuiteSummary summary;
    summary.rows.resize(files.size());

    jobs = std::max(1, jobs);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            const std::filesystem::path out = out_root / files[i].stem();
            summary.rows[i] = run_scenario(files[i], out);
            if (summary.rows[i].id.empty()) summary.rows[i].id = files[i].stem().string();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "scenario,experiment,passed,detail\n";
    summary.all_passed = true;
    for (const auto& row : summary.rows) {
        summary.all_passed = summary.all_passed && row.passed;
        csv << row.id << "," << row.experiment << "," << (row.passed ? "pass" : "fail") << ",\""
            << row.detail << "\"\n";
    }
    summary.summary_csv = out_root / "suite_summary.csv";
    atomic_write_file(summary.summary_csv, csv.str());
    return summary;
}

std::string norms_table(const std::filesystem::path& element_path,
                        const std::vector<std::string>& phi_specs) {
    AlgebraElement x = element_from_json_file(element_path);
    std::ostringstream csv;
    csv << "phi,luxemburg,modular1,l1,l2,op\n";
    for (const auto& spec : phi_specs) {
        OrliczFunction phi = OrliczFunction::parse(spec);
        csv << spec << "," << format_double(luxemburg_norm(x, phi)) << ","
            << format_double(modular(x, phi, 1.0)) << "," << format_double(lp_norm(x, 1.0)) << ","
            << format_double(lp_norm(x, 2.0)) << "," << format_double(operator_norm(x)) << "\n";
    }
    return csv.str();
}

}  // namespace ergolab
