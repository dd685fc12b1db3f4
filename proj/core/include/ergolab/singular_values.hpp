#ifndef ERGOLAB_SINGULAR_VALUES_HPP
#define ERGOLAB_SINGULAR_VALUES_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

/// Distribution function lambda_s(x) = tau(chi_(s,inf)(|x|)), s > 0.
/// Nonincreasing and right-continuous in s.
double distribution_function(const AlgebraElement& x, double s);

/// Generalized singular number t -> mu_t(x) as an explicit step function on
/// [0, tau(1)): the weighted decreasing rearrangement of the singular values,
/// each carrying its block trace weight as interval length.
StepFunction singular_number_function(const AlgebraElement& x);

/// mu_t(x) evaluated at one point (right-continuous).
double singular_number(const AlgebraElement& x, double t);

/// Common value of tau(f(|x|)) and the integral of f(mu_t(x)) dt, computed
/// from the step function.  Requires continuous increasing f with f(0) = 0.
double trace_of_function(const RealFunction& f, const AlgebraElement& x);

/// Integral of mu_t(x) over [0, s].
double majorization_integral(const AlgebraElement& x, double s);

}  // namespace ergolab

#endif  // ERGOLAB_SINGULAR_VALUES_HPP
