#ifndef ERGOLAB_AVERAGING_HPP
#define ERGOLAB_AVERAGING_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/subsequence.hpp"
#include "ergolab/weights.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ergolab {

/// Everything needed to evaluate A_n({b_j}, {d_j}, x) and its subsequential
/// variants: missing right weights mean d_j = 1.
struct AverageRequest {
    DsOperator op;
    WeightSequence left;
    std::optional<WeightSequence> right;
    std::optional<Subsequence> subsequence;
    AlgebraElement x;
    std::int64_t n_max;

    AverageRequest(DsOperator op_, WeightSequence left_, std::optional<WeightSequence> right_,
                   std::optional<Subsequence> subsequence_, AlgebraElement x_, std::int64_t n_max_);
};

/// Running evaluation of A_n for n = 1, 2, ...: one operator-power step per
/// term, with weights memoized per index and a full recomputation through the
/// independent binary-power route every 256 steps (drift asserted <= 1e-9).
/// Single-owner; distinct accumulators never share state.
class AverageAccumulator {
public:
    /// masked: accumulate A_n({c_j b_j}, {d_j}, x) with c_j the indicator of
    /// req.subsequence (used by the subsequence rewrite).
    explicit AverageAccumulator(AverageRequest req, bool masked = false);

    std::int64_t terms() const { return terms_; }
    /// A_terms; terms >= 1 required
    AlgebraElement current() const;
    /// adds one term and returns the new average
    AlgebraElement advance();
    AlgebraElement average_at(std::int64_t n);  // advances as needed; n >= terms

private:
    AlgebraElement term(std::int64_t j, bool via_power_iterator);
    AlgebraElement weighted_input(std::int64_t j);

    AverageRequest req_;
    bool masked_;
    PowerIterator piter_;
    AlgebraElement sum_;
    std::int64_t terms_ = 0;
    std::vector<AlgebraElement> weighted_inputs_;  // memoized b_j x d_j
};

/// A_n({b_j}, {d_j}, x) = (1/n) sum_{j<n} T^j(b_j x d_j)
AlgebraElement average(const AverageRequest& req, std::int64_t n);

/// A_n^k = (1/n) sum_{j<n} T^{k_j}(b_{k_j} x d_{k_j}), evaluated directly via
/// binary operator powers (independent of the incremental route).
AlgebraElement subsequential_average(const AverageRequest& req, std::int64_t n);

/// M_n = (1/k_n) sum_{j<n} T^{k_j}(b_{k_j} x d_{k_j}) = (n/k_n) A_n^k
AlgebraElement m_average(const AverageRequest& req, std::int64_t n);

struct RewriteCheck {
    double defect;
    bool within_tol;
};

/// Both sides of A_n^k({b_j}, x) = ((k_{n-1}+1)/n) A_{k_{n-1}+1}({c_j b_j}, x),
/// evaluated by independent code paths; returns the norm of the difference.
RewriteCheck rewrite_identity_check(const AverageRequest& req, std::int64_t n, double tol);

/// A_n at each requested horizon, sharing one accumulator pass.  Points must
/// be positive and nondecreasing.
std::vector<AlgebraElement> average_trajectory(const AverageRequest& req,
                                               std::span<const std::int64_t> points,
                                               bool subsequential);

}  // namespace ergolab

#endif  // ERGOLAB_AVERAGING_HPP
