#ifndef ERGOLAB_WEIGHTS_HPP
#define ERGOLAB_WEIGHTS_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/subsequence.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace ergolab {

/// psi(k) = sum_j z_j u_j^k over unitaries u_j.  In finite dimensions every
/// unitary has finite spectrum, so these range over all of U(M).
class TrigPolynomial {
public:
    TrigPolynomial(std::vector<Complex> coefficients, std::vector<AlgebraElement> unitaries);

    AlgebraElement eval(std::int64_t k) const;
    /// sum |z_j|, an upper bound for ||psi(k)|| at every k
    double coefficient_abs_sum() const;
    const AlgebraPtr& algebra() const;
    int term_count() const { return static_cast<int>(coefficients_.size()); }
    const std::vector<Complex>& coefficients() const { return coefficients_; }
    const std::vector<AlgebraElement>& unitaries() const { return unitaries_; }

private:
    std::vector<Complex> coefficients_;
    std::vector<AlgebraElement> unitaries_;
};

/// Decay schedule for the perturbation added on top of a designed trig
/// polynomial.  Only Cesaro-null schedules are accepted, so membership in the
/// Besicovitch class holds by construction.
struct PerturbationSchedule {
    enum class Type { none, harmonic, geometric };
    Type type = Type::none;
    double eps0 = 0.0;   // harmonic: eps0/(j+1); geometric: eps0 * ratio^j
    double ratio = 0.5;  // geometric only, must satisfy 0 <= ratio < 1

    double delta(std::int64_t j) const;
    void validate() const;  // throws std::invalid_argument for non-null schedules
};

/// Sequence {b_j} of algebra elements approximable in average operator norm
/// by its designed trig polynomial; the canonical Besicovitch family here.
class WeightSequence {
public:
    enum class Kind { trig, perturbed_trig, scalar, central_scalar, indicator_masked };

    Kind kind() const;
    bool central() const;
    /// C with ||b_j|| <= C for all j (analytic upper bound)
    double bound() const;
    const AlgebraPtr& algebra() const;

    AlgebraElement at(std::int64_t j) const;
    /// Exact central value for central kinds; nullopt otherwise.
    std::optional<CenterElement> center_at(std::int64_t j) const;

    /// The designed psi the sequence is measured against (null for masked).
    std::shared_ptr<const TrigPolynomial> design_polynomial() const;

    bool is_constant_one() const;

    /// b_j = 1 for all j.
    static WeightSequence constant_one(const AlgebraPtr& algebra);
    /// General (possibly non-central) trig weights plus perturbation.
    static WeightSequence from_trig(TrigPolynomial psi, PerturbationSchedule schedule,
                                    std::uint64_t seed);
    /// beta_j = sum_l r_l exp(i j theta_l), embedded as scalar multiples of 1.
    static WeightSequence scalar(const AlgebraPtr& algebra, std::vector<Complex> coefficients,
                                 std::vector<double> angles, PerturbationSchedule schedule,
                                 std::uint64_t seed);

    struct Impl;  // defined in weights.cpp

private:
    explicit WeightSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
    friend WeightSequence make_central_besicovitch(const AlgebraPtr&, std::vector<Complex>,
                                                   std::vector<std::vector<double>>,
                                                   PerturbationSchedule, std::uint64_t);
    friend WeightSequence mask_by_indicator(const WeightSequence&, Subsequence);
};

/// Central Besicovitch sequence: b_j = sum_l z_l * phase_l^j + delta_j * c_j,
/// where phase_l is the central unitary with block angles phase_angles[l] and
/// c_j is a deterministic central direction of norm 1 derived from the seed.
WeightSequence make_central_besicovitch(const AlgebraPtr& algebra,
                                        std::vector<Complex> coefficients,
                                        std::vector<std::vector<double>> phase_angles,
                                        PerturbationSchedule schedule, std::uint64_t seed);

/// c_j * b_j with c_j the indicator of the subsequence.
WeightSequence mask_by_indicator(const WeightSequence& b, Subsequence k);

/// (1/n) sum_{j<n} ||b_j - psi(j)||_inf
double besicovitch_error(const WeightSequence& b, const TrigPolynomial& psi, std::int64_t n);

}  // namespace ergolab

#endif  // ERGOLAB_WEIGHTS_HPP
