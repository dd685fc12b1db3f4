#ifndef ERGOLAB_ORLICZ_HPP
#define ERGOLAB_ORLICZ_HPP

#include "ergolab/algebra.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ergolab {

/// Convex increasing function with Phi(0) = 0 and Phi > 0 off zero, plus
/// optional Delta_2 metadata.  Convexity and Delta_2 are checked on the
/// validation grid at construction, not proven.
class OrliczFunction {
public:
    OrliczFunction(std::string name, RealFunction evaluate,
                   std::optional<double> delta2_constant = std::nullopt,
                   std::vector<double> validation_grid = default_grid());

    double operator()(double t) const { return evaluate_(t); }
    const std::string& name() const { return name_; }
    std::optional<double> delta2_constant() const { return delta2_; }
    const std::vector<double>& validation_grid() const { return grid_; }

    /// Phi(u) = u^p / p, Delta_2 constant 2^p.
    static OrliczFunction power(double p);
    /// Phi(u) = e^u - 1 on a restricted grid; no Delta_2 constant.
    static OrliczFunction expm1();
    /// "p:<real>" or "expm1"
    static OrliczFunction parse(std::string_view spec);

    /// 512 log-spaced points on [1e-6, 1e3].
    static std::vector<double> default_grid();

private:
    std::string name_;
    RealFunction evaluate_;
    std::optional<double> delta2_;
    std::vector<double> grid_;
};

/// Smallest u with u * Phi(t) >= t for t >= delta, namely delta / Phi(delta);
/// the guarantee holds because Phi(t)/t is nondecreasing for convex Phi with
/// Phi(0) = 0.  Verified on the grid.
double find_linearization_constant(const OrliczFunction& phi, double delta);

/// tau(Phi(|x| / lambda)).
double modular(const AlgebraElement& x, const OrliczFunction& phi, double lambda);

/// Luxemburg norm inf{lambda > 0 : tau(Phi(|x|/lambda)) <= 1} by bisection on
/// the monotone modular, to relative tolerance tol.
double luxemburg_norm(const AlgebraElement& x, const OrliczFunction& phi, double tol = 1e-10);

/// tau(|x|^p)^(1/p) for 1 <= p < inf; p = inf delegates to operator_norm.
double lp_norm(const AlgebraElement& x, double p);

}  // namespace ergolab

#endif  // ERGOLAB_ORLICZ_HPP
