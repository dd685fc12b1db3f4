#ifndef ERGOLAB_DS_OPERATOR_HPP
#define ERGOLAB_DS_OPERATOR_HPP

#include "ergolab/algebra.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ergolab {

/// Verification record for a candidate Dunford-Schwartz operator: maximal
/// defects observed over sampled inputs plus the exact structural checks
/// T(1) <= 1 and tau(T(x)) <= tau(x) on positives.
struct DsCertificate {
    int samples = 0;
    double positivity_defect = 0.0;
    double sup_norm_defect = 0.0;    // ||Tx||_inf - ||x||_inf, clamped at 0
    double trace_norm_defect = 0.0;  // ||Tx||_1 - ||x||_1, clamped at 0
    double unitality_defect = 0.0;   // max eigenvalue of T(1) - 1, clamped at 0
    double trace_defect = 0.0;       // tau(T(x)) - tau(x) on positives, clamped at 0
    double tolerance = 0.0;

    double max_defect() const;
    bool passed() const { return max_defect() <= tolerance; }
};

class certification_error : public std::runtime_error {
public:
    certification_error(const std::string& msg, AlgebraElement witness)
        : std::runtime_error(msg),
          witness_(std::make_shared<AlgebraElement>(std::move(witness))) {}
    const AlgebraElement& witness() const { return *witness_; }

private:
    std::shared_ptr<AlgebraElement> witness_;
};

class PowerIterator;

/// Positive, unital-dominated, trace-nonincreasing linear map on the algebra.
/// The built-in constructors are exactly Dunford-Schwartz; the unchecked
/// Kraus constructor admits arbitrary completely positive maps so that
/// verify() has something to reject.
class DsOperator {
public:
    static DsOperator identity(const AlgebraPtr& algebra);
    /// T(x) = u* x u for unitary u (checked to 1e-10).
    static DsOperator from_unitary(AlgebraElement u);
    /// T(x) = sum_i K_i x K_i*.  Requires sum K_i* K_i = 1 and
    /// sum K_i K_i* = 1 within 1e-9 (doubly stochastic channel).
    static DsOperator from_kraus(std::vector<AlgebraElement> kraus);
    /// Same map without the sum checks; verify() is expected to fail it
    /// when the channel is not doubly stochastic.
    static DsOperator from_kraus_unchecked(std::vector<AlgebraElement> kraus);
    /// Moves block b to block perm[b]; blocks along an orbit must share
    /// dimension and trace weight.
    static DsOperator from_block_permutation(const AlgebraPtr& algebra, std::vector<int> perm);
    /// Convex combination; weights must be nonnegative and sum to 1.
    static DsOperator mixture(std::vector<std::pair<double, DsOperator>> parts);

    const AlgebraPtr& algebra() const;

    AlgebraElement apply(const AlgebraElement& x) const;
    /// T^j(x), j >= 0, via cached binary powers of the coordinate matrix for
    /// representations without a cheaper direct form.
    AlgebraElement apply_power(std::int64_t j, const AlgebraElement& x) const;

    /// Samples random positive and general elements, measures all defects and
    /// runs the structural checks.  Throws certification_error carrying the
    /// witness if any defect exceeds tol; otherwise records and returns the
    /// certificate.
    DsCertificate verify(int samples, double tol, std::uint64_t seed = 0x5eedULL) const;
    std::optional<DsCertificate> certificate() const;

    /// Matrix of T on the coordinatized algebra (blockwise column-major vec),
    /// built lazily and cached.
    const Matrix& coordinate_matrix() const;

    PowerIterator power_iterator() const;
    std::string describe() const;

private:
    struct Impl;
    explicit DsOperator(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
    friend class PowerIterator;
};

/// Stateful iterate of T^j for j = 0, 1, 2, ...: one coordinate-matrix (or
/// unitary-power) multiplication per advance, with a periodic refresh from
/// binary powers every 256 steps to cap drift (defect asserted <= 1e-9).
class PowerIterator {
public:
    std::int64_t index() const { return index_; }
    /// T^index(w)
    AlgebraElement apply(const AlgebraElement& w) const;
    void advance();

private:
    friend class DsOperator;
    explicit PowerIterator(DsOperator op);
    DsOperator op_;
    std::int64_t index_ = 0;
    std::optional<AlgebraElement> unitary_power_;  // u^j when T = u* . u
    std::optional<Matrix> matrix_power_;           // M^j otherwise
};

/// vec/unvec between elements and coordinate vectors (blockwise column-major).
Eigen::VectorXcd coordinate_vector(const AlgebraElement& x);
AlgebraElement element_from_coordinates(const AlgebraPtr& algebra, const Eigen::VectorXcd& v);

}  // namespace ergolab

#endif  // ERGOLAB_DS_OPERATOR_HPP
