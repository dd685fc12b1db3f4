#include "ergolab/averaging.hpp"

#include <cmath>
#include <stdexcept>

namespace ergolab {

AverageRequest::AverageRequest(DsOperator op_, WeightSequence left_,
                               std::optional<WeightSequence> right_,
                               std::optional<Subsequence> subsequence_, AlgebraElement x_,
                               std::int64_t n_max_)
    : op(std::move(op_)),
      left(std::move(left_)),
      right(std::move(right_)),
      subsequence(std::move(subsequence_)),
      x(std::move(x_)),
      n_max(n_max_) {
    if (n_max < 1) throw std::invalid_argument("average request needs n_max >= 1");
    const AlgebraPtr& alg = op.algebra();
    auto matches = [&](const AlgebraPtr& other) { return alg == other || *alg == *other; };
    if (!matches(x.algebra()))
        throw std::invalid_argument("element does not belong to the operator's algebra");
    if (!matches(left.algebra()))
        throw std::invalid_argument("left weights do not belong to the operator's algebra");
    if (right && !matches(right->algebra()))
        throw std::invalid_argument("right weights do not belong to the operator's algebra");
}

AverageAccumulator::AverageAccumulator(AverageRequest req, bool masked)
    : req_(std::move(req)),
      masked_(masked),
      piter_(req_.op.power_iterator()),
      sum_(AlgebraElement::zero(req_.op.algebra())) {
    if (masked_ && !req_.subsequence)
        throw std::invalid_argument("masked accumulation needs a subsequence");
}

AlgebraElement AverageAccumulator::weighted_input(std::int64_t j) {
    if (masked_ && !req_.subsequence->contains(j))
        return AlgebraElement::zero(req_.op.algebra());
    const bool plain = req_.left.is_constant_one() && !req_.right;
    if (plain) return req_.x;
    while (static_cast<std::int64_t>(weighted_inputs_.size()) <= j) {
        const auto i = static_cast<std::int64_t>(weighted_inputs_.size());
        if (masked_ && !req_.subsequence->contains(i)) {
            weighted_inputs_.push_back(AlgebraElement::zero(req_.op.algebra()));
            continue;
        }
        AlgebraElement w = [&] {
            if (auto z = req_.left.center_at(i)) return (*z) * req_.x;
            return req_.left.at(i) * req_.x;
        }();
        if (req_.right) {
            if (auto z = req_.right->center_at(i))
                w = (*z) * w;
            else
                w = w * req_.right->at(i);
        }
        weighted_inputs_.push_back(std::move(w));
    }
    return weighted_inputs_[static_cast<size_t>(j)];
}

AlgebraElement AverageAccumulator::current() const {
    if (terms_ < 1) throw std::logic_error("average of zero terms");
    return sum_.scaled(Complex(1.0 / static_cast<double>(terms_), 0.0));
}

AlgebraElement AverageAccumulator::advance() {
    const std::int64_t j = terms_;
    const bool active = !masked_ || req_.subsequence->contains(j);
    if (active) sum_ = sum_ + piter_.apply(weighted_input(j));
    piter_.advance();
    ++terms_;
    if (terms_ % 256 == 0) {
        // full recomputation through the binary-power route caps drift
        AlgebraElement fresh = AlgebraElement::zero(req_.op.algebra());
        for (std::int64_t i = 0; i < terms_; ++i) {
            if (masked_ && !req_.subsequence->contains(i)) continue;
            fresh = fresh + req_.op.apply_power(i, weighted_input(i));
        }
        const double defect = operator_norm(fresh - sum_);
        if (defect > 1e-9 * std::max(1.0, operator_norm(fresh)))
            throw std::runtime_error("incremental average drifted more than 1e-9 from fresh sum");
        sum_ = std::move(fresh);
    }
    return current();
}

AlgebraElement AverageAccumulator::average_at(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("average index must be >= 1");
    if (n < terms_) throw std::invalid_argument("accumulator already advanced past requested n");
    while (terms_ < n) advance();
    return current();
}

AlgebraElement average(const AverageRequest& req, std::int64_t n) {
    if (n < 1 || n > req.n_max) throw std::invalid_argument("average needs 1 <= n <= n_max");
    AverageAccumulator acc(req);
    return acc.average_at(n);
}

AlgebraElement subsequential_average(const AverageRequest& req, std::int64_t n) {
    if (!req.subsequence)
        throw std::invalid_argument("subsequential average needs a subsequence");
    if (n < 1 || n > req.n_max) throw std::invalid_argument("average needs 1 <= n <= n_max");
    AlgebraElement sum = AlgebraElement::zero(req.op.algebra());
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t k = req.subsequence->at(i);
        AlgebraElement w = [&] {
            if (auto z = req.left.center_at(k)) return (*z) * req.x;
            return req.left.at(k) * req.x;
        }();
        if (req.right) {
            if (auto z = req.right->center_at(k))
                w = (*z) * w;
            else
                w = w * req.right->at(k);
        }
        sum = sum + req.op.apply_power(k, w);
    }
    return sum.scaled(Complex(1.0 / static_cast<double>(n), 0.0));
}

AlgebraElement m_average(const AverageRequest& req, std::int64_t n) {
    if (!req.subsequence) throw std::invalid_argument("m_average needs a subsequence");
    const auto kn = static_cast<double>(req.subsequence->at(n));
    return subsequential_average(req, n).scaled(Complex(static_cast<double>(n) / kn, 0.0));
}

RewriteCheck rewrite_identity_check(const AverageRequest& req, std::int64_t n, double tol) {
    if (!req.subsequence || req.right)
        throw std::invalid_argument("rewrite identity needs a one-sided request with a subsequence");
    if (n < 1) throw std::invalid_argument("rewrite identity needs n >= 1");
    const AlgebraElement lhs = subsequential_average(req, n);
    const std::int64_t m = req.subsequence->at(n - 1) + 1;

    AverageRequest masked_req(req.op, mask_by_indicator(req.left, *req.subsequence), std::nullopt,
                              std::nullopt, req.x, std::max(req.n_max, m));
    AverageAccumulator acc(masked_req);
    const AlgebraElement rhs =
        acc.average_at(m).scaled(Complex(static_cast<double>(m) / static_cast<double>(n), 0.0));
    const double defect = operator_norm(lhs - rhs);
    return {defect, defect <= tol};
}

std::vector<AlgebraElement> average_trajectory(const AverageRequest& req,
                                               std::span<const std::int64_t> points,
                                               bool subsequential) {
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 1) throw std::invalid_argument("trajectory points must be >= 1");
        if (i > 0 && points[i] < points[i - 1])
            throw std::invalid_argument("trajectory points must be nondecreasing");
    }
    std::vector<AlgebraElement> out;
    if (!subsequential) {
        AverageAccumulator acc(req);
        for (std::int64_t p : points) out.push_back(acc.average_at(p));
        return out;
    }
    if (!req.subsequence)
        throw std::invalid_argument("subsequential trajectory needs a subsequence");
    // A_n^k = ((k_{n-1}+1)/n) * A_{k_{n-1}+1} over the indicator-masked weights,
    // so one masked pass serves every horizon
    AverageAccumulator acc(req, /*masked=*/true);
    for (std::int64_t p : points) {
        const std::int64_t m = req.subsequence->at(p - 1) + 1;
        out.push_back(acc.average_at(m).scaled(
            Complex(static_cast<double>(m) / static_cast<double>(p), 0.0)));
    }
    return out;
}

}  // namespace ergolab
