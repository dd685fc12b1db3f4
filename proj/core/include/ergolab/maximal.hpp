#ifndef ERGOLAB_MAXIMAL_HPP
#define ERGOLAB_MAXIMAL_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/averaging.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/orlicz.hpp"
#include "ergolab/subsequence.hpp"
#include "ergolab/weights.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ergolab {

struct MaximalConstants {
    double eps = 0.0;
    std::optional<double> p;
    std::optional<double> weight_bound;  // C for weighted certificates
};

/// A concrete projection together with the pair (tau(e_perp), sup_n ||eA_ne||)
/// validated against a theorem's stated bounds.
struct MaximalCertificate {
    Projection e;
    double trace_defect = 0.0;
    double achieved_sup = 0.0;
    std::int64_t horizon = 0;
    double paper_bound_trace = 0.0;
    double paper_bound_sup = 0.0;
    MaximalConstants constants;

    bool valid(double slack = 1e-9) const {
        return trace_defect <= paper_bound_trace + slack &&
               achieved_sup <= paper_bound_sup + slack;
    }
};

/// Search outcome: when the heuristics exhaust their budget without a valid
/// certificate, found is false and certificate carries the best attempt, so
/// an invalid result can never masquerade as success.
struct MaximalSearchResult {
    MaximalSearchResult(bool found_, MaximalCertificate certificate_, int candidates_tried_)
        : found(found_), certificate(std::move(certificate_)), candidates_tried(candidates_tried_) {}
    bool found;
    MaximalCertificate certificate;
    int candidates_tried;
};

/// A_1, ..., A_N of the plain averages A_n({1}, x), computed term by term via
/// binary operator powers (the verifier's route).
std::vector<AlgebraElement> plain_average_family(const DsOperator& t, const AlgebraElement& x,
                                                 std::int64_t horizon);
/// Same for A_n({b_j}, x); masked by the subsequence when one is given.
std::vector<AlgebraElement> weighted_average_family(const DsOperator& t, const WeightSequence& b,
                                                    const AlgebraElement& x, std::int64_t horizon,
                                                    const std::optional<Subsequence>& subseq = {});

double family_compressed_sup(const std::vector<AlgebraElement>& family, const Projection& e);

/// Independent verifier: recomputes the compressed sup and trace defect for a
/// stored projection against freshly computed averages.
MaximalCertificate verify_certificate(const std::vector<AlgebraElement>& family,
                                      const Projection& e, double paper_bound_trace,
                                      double paper_bound_sup, MaximalConstants constants);

/// Yeadon bounds: tau(e_perp) <= ||x||_1 / eps, sup_n ||e A_n({1},x) e|| <= eps.
MaximalSearchResult search_yeadon(const DsOperator& t, const AlgebraElement& x, double eps,
                                  std::int64_t horizon);

/// L^p bounds: tau(e_perp) <= (||x||_p / eps)^p, sup <= 2 eps.  Mirrors the
/// splitting x <= x_eps + eps^(1-p) x^p by running the Yeadon search on x^p
/// at level eps^p.
MaximalSearchResult search_lp(const DsOperator& t, const AlgebraElement& x, double p, double eps,
                              std::int64_t horizon);

/// Weighted bounds for central bounded weights: tau(e_perp) <= 4(||x||_p/eps)^p,
/// sup_n ||e A_n({b_j},x) e|| <= 48 C eps with C the recorded weight bound.
/// Follows the four-positive-parts construction and meets the projections.
MaximalSearchResult search_weighted(const DsOperator& t, const WeightSequence& b,
                                    const AlgebraElement& x, double p, double eps,
                                    std::int64_t horizon);

/// Generic bounded-sup search over an arbitrary family: find e with
/// sup_n ||e F_n e|| below sup_target and tau(e_perp) within trace_budget
/// (strict comparisons when strict is set).
struct BoundedSupSearch {
    bool found = false;
    Projection e;
    double achieved_sup = 0.0;
    double trace_defect = 0.0;
    int candidates_tried = 0;
};
BoundedSupSearch search_bounded_sup(const std::vector<AlgebraElement>& family,
                                    const AlgebraPtr& algebra, double sup_target,
                                    double trace_budget, bool strict = false);

/// One greedy peeling step: removes the top singular direction of the worst
/// compressed family element from the range of e.  nullopt once e is
/// numerically zero.
std::optional<Projection> peel_worst_direction(const std::vector<AlgebraElement>& family,
                                               const Projection& e);

struct AverageFamilySpec {
    DsOperator op;
    WeightSequence weights;
    std::optional<Subsequence> subsequence;
};

struct BuemProbeRow {
    double gamma = 0.0;
    int instances = 0;
    int successes = 0;
    double rate = 0.0;
};

struct BuemProbeReport {
    double eps = 0.0;
    double delta = 0.0;
    std::int64_t horizon = 0;
    std::vector<BuemProbeRow> rows;  // in gamma-grid order (decreasing)

    bool rates_nondecreasing() const;
};

/// Empirical probe of bilateral uniform equicontinuity in measure at zero:
/// for each gamma, samples x with ||x||_phi < gamma and searches for e with
/// tau(e_perp) < eps and sup_n ||e A_n(x) e|| < delta, reporting success
/// rates without judgment.
BuemProbeReport buem_probe(const AverageFamilySpec& family, const OrliczFunction& phi, double eps,
                           double delta, const std::vector<double>& gamma_grid,
                           std::int64_t horizon, int instances, std::uint64_t seed);

}  // namespace ergolab

#endif  // ERGOLAB_MAXIMAL_HPP
