#include "ergolab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

std::vector<double> OrliczFunction::default_grid() {
    std::vector<double> g;
    const int n = 512;
    const double lo = std::log(1e-6), hi = std::log(1e3);
    for (int i = 0; i < n; ++i) g.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
    return g;
}

OrliczFunction::OrliczFunction(std::string name, RealFunction evaluate,
                               std::optional<double> delta2_constant,
                               std::vector<double> validation_grid)
    : name_(std::move(name)),
      evaluate_(std::move(evaluate)),
      delta2_(delta2_constant),
      grid_(std::move(validation_grid)) {
    if (std::fabs(evaluate_(0.0)) > 1e-15)
        throw std::invalid_argument("Orlicz function must vanish at 0");
    for (double t : grid_) {
        const double v = evaluate_(t);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("Orlicz function must be positive and finite on the grid");
    }
    // midpoint convexity, tolerance relative to the local scale
    for (size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double a = grid_[i], b = grid_[i + 1];
        const double lhs = evaluate_(0.5 * (a + b));
        const double rhs = 0.5 * (evaluate_(a) + evaluate_(b));
        if (lhs > rhs + 1e-12 * std::max(1.0, rhs))
            throw std::invalid_argument("Orlicz function fails midpoint convexity on the grid");
    }
    if (delta2_) {
        for (double t : grid_) {
            const double v2 = evaluate_(2.0 * t);
            if (!std::isfinite(v2) || v2 > *delta2_ * evaluate_(t) * (1.0 + 1e-12))
                throw std::invalid_argument("declared Delta_2 constant fails on the grid");
        }
    }
}

OrliczFunction OrliczFunction::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("power Orlicz function needs 1 <= p < inf");
    return OrliczFunction("p:" + std::to_string(p),
                          [p](double t) { return std::pow(t, p) / p; }, std::pow(2.0, p));
}

OrliczFunction OrliczFunction::expm1() {
    std::vector<double> grid;
    const int n = 512;
    const double lo = std::log(1e-6), hi = std::log(30.0);
    for (int i = 0; i < n; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
    return OrliczFunction("expm1", [](double t) { return std::expm1(t); }, std::nullopt,
                          std::move(grid));
}

OrliczFunction OrliczFunction::parse(std::string_view spec) {
    if (spec == "expm1") return expm1();
    if (spec.rfind("p:", 0) == 0) {
        const double p = std::stod(std::string(spec.substr(2)));
        return power(p);
    }
    throw std::invalid_argument("unknown Orlicz function spec: " + std::string(spec));
}

double find_linearization_constant(const OrliczFunction& phi, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("linearization needs delta > 0");
    const double u = delta / phi(delta);
    for (double t : phi.validation_grid()) {
        if (t < delta) continue;
        if (u * phi(t) < t * (1.0 - 1e-12))
            throw std::runtime_error("linearization constant failed grid verification");
    }
    return u;
}

double modular(const AlgebraElement& x, const OrliczFunction& phi, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("modular needs lambda > 0");
    double total = 0.0;
    for (const auto& [sigma, mass] : singular_values_with_masses(x))
        total += mass * phi(sigma / lambda);
    return total;
}

double luxemburg_norm(const AlgebraElement& x, const OrliczFunction& phi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm needs tol > 0");
    auto sv = singular_values_with_masses(x);
    const double sup = operator_norm(x);
    if (sup == 0.0) return 0.0;

    auto modular_at = [&](double lambda) {
        double total = 0.0;
        for (const auto& [sigma, mass] : sv) total += mass * phi(sigma / lambda);
        return total;
    };

    const double tau1 = x.algebra()->total_trace();
    double hi = sup * std::max(1.0, tau1);
    for (int i = 0; i < 200 && modular_at(hi) > 1.0; ++i) hi *= 2.0;
    if (modular_at(hi) > 1.0) throw std::runtime_error("luxemburg bracket expansion failed");
    double lo = hi;
    while (lo > hi * 1e-18 && modular_at(0.5 * lo) <= 1.0) lo *= 0.5;
    lo *= 0.5;
    // invariant: modular(lo) > 1 >= modular(hi) unless lo underflowed
    while ((hi - lo) > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (modular_at(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double lp_norm(const AlgebraElement& x, double p) {
    if (std::isinf(p)) return operator_norm(x);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
    double total = 0.0;
    for (const auto& [sigma, mass] : singular_values_with_masses(x))
        total += mass * std::pow(sigma, p);
    return std::pow(total, 1.0 / p);
}

}  // namespace ergolab
