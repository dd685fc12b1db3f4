#ifndef ERGOLAB_CONVERGENCE_HPP
#define ERGOLAB_CONVERGENCE_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/averaging.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/orlicz.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ergolab {

struct NeighborhoodWitness {
    bool inside = false;
    Projection e;
    double compressed_norm = 0.0;  // ||xe|| or ||exe|| for the returned e
    double trace_defect = 0.0;
};

/// Membership test for the measure-topology neighborhoods N(eps, delta) (one
/// sided, ||xe|| <= eps) and N'(eps, delta) (bilateral, ||exe|| <= eps), by
/// searching spectral projections of |x| and of the self-adjoint parts.
NeighborhoodWitness in_measure_neighborhood(const AlgebraElement& x, double eps, double delta,
                                            bool bilateral);

struct BauDistance {
    double sup_gap = 0.0;
    Projection e;
};

/// Heuristically minimal sup_n ||e (x_n - xhat) e|| over projections with
/// tau(e_perp) < delta, found by greedy spectral peeling.
BauDistance bau_distance(std::span<const AlgebraElement> tail, const AlgebraElement& xhat,
                         double delta);

/// Cesaro mean of the tail half of the list.
AlgebraElement estimate_limit(std::span<const AlgebraElement> averages);

/// Mean-ergodic limit of the plain averages A_n({1}, x): the orthogonal-free
/// fixed-point projection of the coordinatized map, P onto ker(M - 1) along
/// ran(M - 1).  Independent of the averaging code; residuals of P^2 = P and
/// MP = PM = P are verified to tol.
AlgebraElement fixed_point_limit(const DsOperator& t, const AlgebraElement& x, double tol = 1e-10);

enum class ConvergenceMode { almost_uniform, bilateral_almost_uniform };

struct ConvergenceReport {
    ConvergenceReport(AlgebraElement limit_estimate_, Projection witness_)
        : limit_estimate(std::move(limit_estimate_)), witness(std::move(witness_)) {}

    std::vector<std::int64_t> schedule;
    AlgebraElement limit_estimate;
    std::vector<double> gaps;  // windowed Cauchy gap per schedule point
    Projection witness;
    double witness_trace_defect = 0.0;
    ConvergenceMode mode = ConvergenceMode::bilateral_almost_uniform;
    double limit_phi_norm = 0.0;
    double input_phi_norm = 0.0;
    double weight_bound = 1.0;

    /// gap at the last schedule point <= half the gap at the first (both
    /// zero counts as converged)
    bool gap_halved() const;
    /// ||xhat||_phi <= C ||x||_phi + tol
    bool limit_norm_bounded(double tol = 1e-6) const;
    /// number of upward steps in the gap curve (one is tolerated and flagged)
    int non_monotone_steps() const;
};

/// Runs the averages along the schedule, measures windowed Cauchy gaps
/// sup_{m,n in [N, 2N]} of the compressed difference under a witness with
/// tau(e_perp) < delta, and estimates the limit.  One-sided requests demand
/// central weights (b.a.u. convergence of weighted subsequential averages is
/// only guaranteed for b_j in Z(M)); two-sided requests are probed in a.u.
/// mode.
ConvergenceReport convergence_probe(const AverageRequest& req, const OrliczFunction& phi,
                                    double delta, std::vector<std::int64_t> schedule);

}  // namespace ergolab

#endif  // ERGOLAB_CONVERGENCE_HPP
