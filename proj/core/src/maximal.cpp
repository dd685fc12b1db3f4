#include "ergolab/maximal.hpp"

#include "ergolab/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

namespace {

AlgebraElement weighted_term(const WeightSequence& b, const AlgebraElement& x, std::int64_t j) {
    if (auto z = b.center_at(j)) return (*z) * x;
    return b.at(j) * x;
}

}  // namespace

std::vector<AlgebraElement> plain_average_family(const DsOperator& t, const AlgebraElement& x,
                                                 std::int64_t horizon) {
    std::vector<AlgebraElement> out;
    AlgebraElement partial = AlgebraElement::zero(t.algebra());
    for (std::int64_t j = 0; j < horizon; ++j) {
        partial = partial + t.apply_power(j, x);
        out.push_back(partial.scaled(Complex(1.0 / static_cast<double>(j + 1), 0.0)));
    }
    return out;
}

std::vector<AlgebraElement> weighted_average_family(const DsOperator& t, const WeightSequence& b,
                                                    const AlgebraElement& x, std::int64_t horizon,
                                                    const std::optional<Subsequence>& subseq) {
    std::vector<AlgebraElement> out;
    AlgebraElement partial = AlgebraElement::zero(t.algebra());
    for (std::int64_t n = 0; n < horizon; ++n) {
        const std::int64_t j = subseq ? subseq->at(n) : n;
        partial = partial + t.apply_power(j, weighted_term(b, x, j));
        out.push_back(partial.scaled(Complex(1.0 / static_cast<double>(n + 1), 0.0)));
    }
    return out;
}

double family_compressed_sup(const std::vector<AlgebraElement>& family, const Projection& e) {
    double sup = 0.0;
    for (const auto& a : family) sup = std::max(sup, compressed_norm(e, a));
    return sup;
}

MaximalCertificate verify_certificate(const std::vector<AlgebraElement>& family,
                                      const Projection& e, double paper_bound_trace,
                                      double paper_bound_sup, MaximalConstants constants) {
    MaximalCertificate cert{e,
                            e.trace_defect(),
                            family_compressed_sup(family, e),
                            static_cast<std::int64_t>(family.size()),
                            paper_bound_trace,
                            paper_bound_sup,
                            std::move(constants)};
    return cert;
}

namespace {

struct Scored {
    Projection e;
    double sup = 0.0;
    double defect = 0.0;
};

Scored score(const std::vector<AlgebraElement>& family, Projection e) {
    Scored s{std::move(e), 0.0, 0.0};
    s.sup = family_compressed_sup(family, s.e);
    s.defect = std::max(0.0, s.e.trace_defect());
    return s;
}

}  // namespace

std::optional<Projection> peel_worst_direction(const std::vector<AlgebraElement>& family,
                                               const Projection& e) {
    double worst = -1.0;
    size_t worst_n = 0;
    for (size_t n = 0; n < family.size(); ++n) {
        const double s = compressed_norm(e, family[n]);
        if (s > worst) {
            worst = s;
            worst_n = n;
        }
    }
    if (worst <= 0.0) return std::nullopt;
    const AlgebraElement c = compress(e, family[worst_n]);
    double top = -1.0;
    int top_block = -1;
    Eigen::VectorXcd top_vec;
    for (int b = 0; b < c.block_count(); ++b) {
        Eigen::JacobiSVD<Matrix> svd(c.block(b), Eigen::ComputeFullU);
        if (svd.singularValues().size() == 0) continue;
        if (svd.singularValues()(0) > top) {
            top = svd.singularValues()(0);
            top_block = b;
            top_vec = svd.matrixU().col(0);
        }
    }
    if (top_block < 0 || top <= 0.0) return std::nullopt;
    // left singular vectors of e A e lie in range(e) up to rounding
    Eigen::VectorXcd v = e.element().block(top_block) * top_vec;
    const double vn = v.norm();
    if (vn < 1e-8) return std::nullopt;
    v /= vn;
    std::vector<Matrix> blocks = e.element().blocks();
    blocks[static_cast<size_t>(top_block)] -= v * v.adjoint();
    return spectral_projection_above(AlgebraElement(e.algebra(), std::move(blocks)), 0.5);
}

BoundedSupSearch search_bounded_sup(const std::vector<AlgebraElement>& family,
                                    const AlgebraPtr& algebra, double sup_target,
                                    double trace_budget, bool strict) {
    if (family.empty()) throw std::invalid_argument("bounded-sup search needs a nonempty family");
    auto ok = [&](const Scored& s) {
        return strict ? (s.sup < sup_target && s.defect < trace_budget)
                      : (s.sup <= sup_target + 1e-9 && s.defect <= trace_budget + 1e-9);
    };

    std::vector<Scored> scored;
    int tried = 0;
    auto consider = [&](Projection e) {
        scored.push_back(score(family, std::move(e)));
        ++tried;
    };

    consider(Projection::identity(algebra));

    // accumulated violation operator V = (1/N) sum (|A_n| - target)_+
    {
        AlgebraElement v = AlgebraElement::zero(algebra);
        for (const auto& a : family) {
            AlgebraElement shifted =
                abs(a) - sup_target * AlgebraElement::identity(algebra);
            v = v + positive_part(shifted);
        }
        v = v.scaled(Complex(1.0 / static_cast<double>(family.size()), 0.0));
        consider(spectral_projection_interval(v, -1e-12, sup_target));
        consider(spectral_projection_interval(v, -1e-12, 1e-12));
    }

    // meet of the per-n lower spectral cuts: guarantees the sup bound
    {
        Projection acc = Projection::identity(algebra);
        for (const auto& a : family)
            acc = meet(acc, spectral_projection_interval(abs(a), -1e-12, sup_target * (1.0 - 1e-12)));
        consider(acc);
    }

    // exhaustive-style fallback on tiny algebras: every lower cut of every
    // |A_n| plus pairwise meets of the best few
    if (algebra->total_dim() <= 4) {
        std::vector<Projection> cuts;
        for (const auto& a : family) {
            auto dec = spectral_decomposition(abs(a));
            for (double lambda : dec.eigenvalues)
                cuts.push_back(spectral_projection_interval(abs(a), -1e-12, lambda * (1.0 + 1e-12)));
        }
        std::vector<Scored> cut_scores;
        for (auto& c : cuts) cut_scores.push_back(score(family, std::move(c)));
        std::sort(cut_scores.begin(), cut_scores.end(),
                  [](const Scored& a, const Scored& b) { return a.defect < b.defect; });
        const size_t keep = std::min<size_t>(cut_scores.size(), 10);
        for (size_t i = 0; i < keep; ++i)
            for (size_t j = i + 1; j < keep; ++j)
                consider(meet(cut_scores[i].e, cut_scores[j].e));
        for (size_t i = 0; i < keep; ++i) scored.push_back(cut_scores[i]);
        tried += static_cast<int>(cut_scores.size());
    }

    // greedy spectral peeling from the identity
    {
        Projection e = Projection::identity(algebra);
        for (int iter = 0; iter < algebra->total_dim(); ++iter) {
            Scored s = score(family, e);
            const bool sup_ok = strict ? s.sup < sup_target : s.sup <= sup_target + 1e-9;
            if (sup_ok) {
                scored.push_back(s);
                ++tried;
                break;
            }
            auto next = peel_worst_direction(family, e);
            if (!next) break;
            e = *next;
        }
    }

    consider(Projection::zero(algebra));

    const Scored* best_valid = nullptr;
    for (const auto& s : scored)
        if (ok(s) && (!best_valid || s.defect < best_valid->defect)) best_valid = &s;

    BoundedSupSearch out{false, Projection::identity(algebra), 0.0, 0.0, tried};
    if (best_valid) {
        out.found = true;
        out.e = best_valid->e;
        out.achieved_sup = best_valid->sup;
        out.trace_defect = best_valid->defect;
        return out;
    }
    // best attempt: minimize the worst relative violation
    const Scored* best = nullptr;
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& s : scored) {
        const double v = std::max(s.sup / std::max(sup_target, 1e-300),
                                  s.defect / std::max(trace_budget, 1e-300));
        if (v < best_score) {
            best_score = v;
            best = &s;
        }
    }
    if (best) {
        out.e = best->e;
        out.achieved_sup = best->sup;
        out.trace_defect = best->defect;
    }
    return out;
}

namespace {

void require_positive_element(const AlgebraElement& x, const char* who) {
    const double scale = operator_norm(x);
    if (min_eigenvalue(x) < -1e-8 * std::max(1.0, scale) ||
        operator_norm(x - x.adjoint()) > 1e-8 * std::max(1.0, scale))
        throw std::invalid_argument(std::string(who) + " requires a positive element");
}

MaximalSearchResult finalize(const std::vector<AlgebraElement>& verifier_family,
                             const BoundedSupSearch& search,
                             const std::vector<Projection>& extra_candidates, double bound_trace,
                             double bound_sup, MaximalConstants constants) {
    // verify the search pick and any construction candidates independently,
    // then keep the best valid certificate (max trace mass)
    std::vector<MaximalCertificate> certs;
    certs.push_back(verify_certificate(verifier_family, search.e, bound_trace, bound_sup, constants));
    for (const auto& e : extra_candidates)
        certs.push_back(verify_certificate(verifier_family, e, bound_trace, bound_sup, constants));

    const MaximalCertificate* best_valid = nullptr;
    for (const auto& c : certs)
        if (c.valid() && (!best_valid || c.trace_defect < best_valid->trace_defect)) best_valid = &c;

    const int tried = search.candidates_tried + static_cast<int>(extra_candidates.size());
    if (best_valid) return MaximalSearchResult(true, *best_valid, tried);
    return MaximalSearchResult(false, certs.front(), tried);
}

}  // namespace

MaximalSearchResult search_yeadon(const DsOperator& t, const AlgebraElement& x, double eps,
                                  std::int64_t horizon) {
    if (!(eps > 0.0)) throw std::invalid_argument("search_yeadon needs eps > 0");
    if (horizon < 1) throw std::invalid_argument("search_yeadon needs horizon >= 1");
    require_positive_element(x, "search_yeadon");

    const double bound_trace = trace_norm(x) / eps;
    const double bound_sup = eps;
    MaximalConstants constants{eps, std::nullopt, std::nullopt};

    AverageRequest req(t, WeightSequence::constant_one(t.algebra()), std::nullopt, std::nullopt, x,
                       horizon);
    std::vector<std::int64_t> points(static_cast<size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) points[static_cast<size_t>(n - 1)] = n;
    const std::vector<AlgebraElement> search_family = average_trajectory(req, points, false);

    BoundedSupSearch search =
        search_bounded_sup(search_family, t.algebra(), bound_sup, bound_trace, false);

    // closed-form Chebyshev candidate chi_[0,eps](x)
    std::vector<Projection> extras;
    extras.push_back(spectral_projection_above(x, eps).complement());

    const std::vector<AlgebraElement> verifier_family = plain_average_family(t, x, horizon);
    return finalize(verifier_family, search, extras, bound_trace, bound_sup, constants);
}

MaximalSearchResult search_lp(const DsOperator& t, const AlgebraElement& x, double p, double eps,
                              std::int64_t horizon) {
    if (!(eps > 0.0)) throw std::invalid_argument("search_lp needs eps > 0");
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("search_lp needs 1 <= p < inf");
    require_positive_element(x, "search_lp");

    const double bound_trace = std::pow(lp_norm(x, p) / eps, p);
    const double bound_sup = 2.0 * eps;
    MaximalConstants constants{eps, p, std::nullopt};

    AverageRequest req(t, WeightSequence::constant_one(t.algebra()), std::nullopt, std::nullopt, x,
                       horizon);
    std::vector<std::int64_t> points(static_cast<size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) points[static_cast<size_t>(n - 1)] = n;
    const std::vector<AlgebraElement> search_family = average_trajectory(req, points, false);

    BoundedSupSearch search =
        search_bounded_sup(search_family, t.algebra(), bound_sup, bound_trace, false);

    std::vector<Projection> extras;
    // the lemma's own construction: Yeadon on x^p at level eps^p
    {
        AlgebraElement xp = functional_calculus(
            [p](double s) { return std::pow(std::max(s, 0.0), p); }, real_part(x));
        MaximalSearchResult inner = search_yeadon(t, xp, std::pow(eps, p), horizon);
        extras.push_back(inner.certificate.e);
    }
    extras.push_back(spectral_projection_above(x, eps).complement());
    extras.push_back(spectral_projection_above(x, 2.0 * eps).complement());

    const std::vector<AlgebraElement> verifier_family = plain_average_family(t, x, horizon);
    return finalize(verifier_family, search, extras, bound_trace, bound_sup, constants);
}

MaximalSearchResult search_weighted(const DsOperator& t, const WeightSequence& b,
                                    const AlgebraElement& x, double p, double eps,
                                    std::int64_t horizon) {
    if (!b.central())
        throw std::invalid_argument("weighted maximal theorem requires central weights");
    if (!(eps > 0.0)) throw std::invalid_argument("search_weighted needs eps > 0");
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("search_weighted needs 1 <= p < inf");

    const double c = b.bound();
    const double bound_trace = 4.0 * std::pow(lp_norm(x, p) / eps, p);
    const double bound_sup = 48.0 * c * eps;
    MaximalConstants constants{eps, p, c};

    AverageRequest req(t, b, std::nullopt, std::nullopt, x, horizon);
    std::vector<std::int64_t> points(static_cast<size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) points[static_cast<size_t>(n - 1)] = n;
    const std::vector<AlgebraElement> search_family = average_trajectory(req, points, false);

    BoundedSupSearch search =
        search_bounded_sup(search_family, t.algebra(), bound_sup, bound_trace, false);

    // the theorem's construction: split into four positives, run the L^p
    // search on each, meet the projections
    std::vector<Projection> extras;
    {
        const AlgebraElement re = real_part(x);
        const AlgebraElement im = imag_part(x);
        std::vector<AlgebraElement> parts{positive_part(re), negative_part(re),
                                          positive_part(im), negative_part(im)};
        std::vector<Projection> met;
        for (const auto& part : parts) {
            if (operator_norm(part) <= 1e-14) continue;  // construction collapse
            MaximalSearchResult inner = search_lp(t, part, p, eps, horizon);
            met.push_back(inner.certificate.e);
        }
        if (!met.empty()) extras.push_back(meet(met));
    }

    const std::vector<AlgebraElement> verifier_family =
        weighted_average_family(t, b, x, horizon);
    return finalize(verifier_family, search, extras, bound_trace, bound_sup, constants);
}

bool BuemProbeReport::rates_nondecreasing() const {
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i + 1].rate < rows[i].rate - 1e-12) return false;
    return true;
}

BuemProbeReport buem_probe(const AverageFamilySpec& family, const OrliczFunction& phi, double eps,
                           double delta, const std::vector<double>& gamma_grid,
                           std::int64_t horizon, int instances, std::uint64_t seed) {
    if (gamma_grid.empty()) throw std::invalid_argument("buem_probe needs a gamma grid");
    for (size_t i = 0; i < gamma_grid.size(); ++i) {
        if (!(gamma_grid[i] > 0.0))
            throw std::invalid_argument("buem_probe gamma grid must be positive");
        if (i > 0 && !(gamma_grid[i] < gamma_grid[i - 1]))
            throw std::invalid_argument("buem_probe gamma grid must be decreasing");
    }
    if (!family.weights.central() || !(family.weights.bound() < std::numeric_limits<double>::infinity()))
        throw std::invalid_argument("buem_probe needs central bounded weights");

    BuemProbeReport report;
    report.eps = eps;
    report.delta = delta;
    report.horizon = horizon;

    const AlgebraPtr& alg = family.op.algebra();
    for (size_t gi = 0; gi < gamma_grid.size(); ++gi) {
        BuemProbeRow row;
        row.gamma = gamma_grid[gi];
        row.instances = instances;
        for (int i = 0; i < instances; ++i) {
            Rng rng(Rng::mix(seed, gi * 1000003ULL + static_cast<std::uint64_t>(i)));
            AlgebraElement raw = random_element(alg, rng);
            const double norm = luxemburg_norm(raw, phi);
            if (norm == 0.0) continue;
            const double target = row.gamma * rng.uniform(0.5, 0.999);
            AlgebraElement x = (target / norm) * raw;

            const std::vector<AlgebraElement> avgs =
                weighted_average_family(family.op, family.weights, x, horizon, family.subsequence);
            BoundedSupSearch search = search_bounded_sup(avgs, alg, delta, eps, /*strict=*/true);
            if (search.found) ++row.successes;
        }
        row.rate = static_cast<double>(row.successes) / static_cast<double>(row.instances);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace ergolab
