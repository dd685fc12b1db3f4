#include "ergolab/convergence.hpp"

#include "ergolab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ergolab {

NeighborhoodWitness in_measure_neighborhood(const AlgebraElement& x, double eps, double delta,
                                            bool bilateral) {
    if (!(eps > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("neighborhood test needs eps, delta > 0");

    auto witness_norm = [&](const Projection& e) {
        return bilateral ? compressed_norm(e, x) : one_sided_compressed_norm(e, x);
    };

    std::vector<Projection> candidates;
    candidates.push_back(Projection::identity(x.algebra()));
    candidates.push_back(spectral_projection_interval(abs(x), -1e-12, eps * (1.0 + 1e-12)));
    if (bilateral) {
        if (is_self_adjoint(x, 1e-10 * std::max(1.0, operator_norm(x))))
            candidates.push_back(spectral_projection_interval(x, -eps * (1.0 + 1e-12),
                                                              eps * (1.0 + 1e-12)));
        const double half = 0.5 * eps * (1.0 + 1e-12);
        candidates.push_back(meet(spectral_projection_interval(real_part(x), -half, half),
                                  spectral_projection_interval(imag_part(x), -half, half)));
    }

    const double norm_slack = eps * (1.0 + 1e-9) + 1e-14;
    NeighborhoodWitness best{false, Projection::zero(x.algebra()),
                             std::numeric_limits<double>::infinity(),
                             x.algebra()->total_trace()};
    bool have_admissible = false;
    for (const auto& e : candidates) {
        const double n = witness_norm(e);
        if (n > norm_slack) continue;
        const double defect = e.trace_defect();
        if (!have_admissible || defect < best.trace_defect) {
            best = {defect <= delta, e, n, defect};
            have_admissible = true;
        }
    }
    return best;
}

BauDistance bau_distance(std::span<const AlgebraElement> tail, const AlgebraElement& xhat,
                         double delta) {
    if (tail.empty()) throw std::invalid_argument("bau_distance needs a nonempty tail");
    if (!(delta > 0.0)) throw std::invalid_argument("bau_distance needs delta > 0");

    std::vector<AlgebraElement> diffs;
    for (const auto& a : tail) diffs.push_back(a - xhat);

    auto sup_under = [&](const Projection& e) { return family_compressed_sup(diffs, e); };

    Projection e = Projection::identity(xhat.algebra());
    BauDistance best{sup_under(e), e};
    while (true) {
        auto next = peel_worst_direction(diffs, e);
        if (!next) break;
        if (!(next->trace_defect() < delta)) break;
        e = *next;
        const double s = sup_under(e);
        if (s < best.sup_gap) best = {s, e};
    }
    return best;
}

AlgebraElement estimate_limit(std::span<const AlgebraElement> averages) {
    if (averages.size() < 2) throw std::invalid_argument("estimate_limit needs at least 2 averages");
    const size_t start = averages.size() / 2;
    AlgebraElement sum = AlgebraElement::zero(averages.front().algebra());
    for (size_t i = start; i < averages.size(); ++i) sum = sum + averages[i];
    return sum.scaled(Complex(1.0 / static_cast<double>(averages.size() - start), 0.0));
}

AlgebraElement fixed_point_limit(const DsOperator& t, const AlgebraElement& x, double tol) {
    const Matrix& m = t.coordinate_matrix();
    const Eigen::Index dim = m.rows();
    Matrix a = m - Matrix::Identity(dim, dim);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = std::max(1e-8 * std::max(1.0, smax), 1e-12);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
    const Eigen::Index nullity = dim - rank;

    Matrix p;
    if (nullity == 0) {
        p = Matrix::Zero(dim, dim);
    } else {
        Matrix kernel = svd.matrixV().rightCols(nullity);   // basis of ker(M - 1)
        Matrix range = svd.matrixU().leftCols(rank);        // basis of ran(M - 1)
        Matrix basis(dim, dim);
        basis << kernel, range;
        // P maps kernel-coordinates through, kills range-coordinates
        Matrix inv = basis.inverse();
        p = kernel * inv.topRows(nullity);
    }

    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if ((p * p - p).cwiseAbs().maxCoeff() > tol * scale ||
        (m * p - p).cwiseAbs().maxCoeff() > tol * scale ||
        (p * m - p).cwiseAbs().maxCoeff() > tol * scale)
        throw std::runtime_error("fixed-point projection failed its stationarity checks");

    return element_from_coordinates(t.algebra(), p * coordinate_vector(x));
}

bool ConvergenceReport::gap_halved() const {
    if (gaps.size() < 2) return true;
    // gaps at rounding level are already converged
    return gaps.back() <= 0.5 * gaps.front() + 1e-12;
}

bool ConvergenceReport::limit_norm_bounded(double tol) const {
    return limit_phi_norm <= weight_bound * input_phi_norm + tol;
}

int ConvergenceReport::non_monotone_steps() const {
    int steps = 0;
    for (size_t i = 0; i + 1 < gaps.size(); ++i)
        if (gaps[i + 1] > gaps[i] + 1e-12) ++steps;
    return steps;
}

ConvergenceReport convergence_probe(const AverageRequest& req, const OrliczFunction& phi,
                                    double delta, std::vector<std::int64_t> schedule) {
    if (schedule.empty()) throw std::invalid_argument("convergence probe needs a schedule");
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) throw std::invalid_argument("schedule entries must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("schedule must strictly increase");
    }
    if (!req.right && !req.left.central())
        throw std::invalid_argument(
            "one-sided Orlicz probe requires central weights (b_j in Z(M))");

    // window [N, 2N] sampled at ninths
    std::set<std::int64_t> point_set;
    std::vector<std::vector<std::int64_t>> windows;
    for (std::int64_t n : schedule) {
        std::vector<std::int64_t> w;
        for (int s = 0; s <= 8; ++s) {
            const std::int64_t v = n + (s * n) / 8;
            if (w.empty() || w.back() != v) w.push_back(v);
            point_set.insert(v);
        }
        windows.push_back(std::move(w));
    }
    std::vector<std::int64_t> points(point_set.begin(), point_set.end());

    const bool subsequential = req.subsequence.has_value();
    std::vector<AlgebraElement> avgs = average_trajectory(req, points, subsequential);
    auto average_at = [&](std::int64_t n) -> const AlgebraElement& {
        const size_t idx = static_cast<size_t>(
            std::lower_bound(points.begin(), points.end(), n) - points.begin());
        return avgs[idx];
    };

    ConvergenceReport report(estimate_limit(avgs), Projection::identity(req.op.algebra()));
    report.schedule = schedule;
    report.mode = req.right ? ConvergenceMode::almost_uniform
                            : ConvergenceMode::bilateral_almost_uniform;
    report.weight_bound = req.left.bound() * (req.right ? req.right->bound() : 1.0);
    report.input_phi_norm = luxemburg_norm(req.x, phi);
    report.limit_phi_norm = luxemburg_norm(report.limit_estimate, phi);

    auto gaps_under = [&](const Projection& e) {
        std::vector<double> gaps;
        for (const auto& w : windows) {
            double g = 0.0;
            for (size_t i = 0; i < w.size(); ++i)
                for (size_t j = i + 1; j < w.size(); ++j) {
                    const AlgebraElement d = average_at(w[i]) - average_at(w[j]);
                    g = std::max(g, report.mode == ConvergenceMode::bilateral_almost_uniform
                                        ? compressed_norm(e, d)
                                        : one_sided_compressed_norm(e, d));
                }
            gaps.push_back(g);
        }
        return gaps;
    };

    Projection witness = Projection::identity(req.op.algebra());
    report.gaps = gaps_under(witness);
    report.witness = witness;
    report.witness_trace_defect = 0.0;
    if (!report.gap_halved()) {
        // try to improve the witness by peeling against the limit estimate
        BauDistance bd = bau_distance(avgs, report.limit_estimate, delta);
        std::vector<double> improved = gaps_under(bd.e);
        if (improved.back() <= 0.5 * improved.front() + 1e-15 ||
            improved.back() < report.gaps.back()) {
            report.gaps = std::move(improved);
            report.witness = bd.e;
            report.witness_trace_defect = bd.e.trace_defect();
        }
    }
    return report;
}

}  // namespace ergolab
