#include "ergolab/singular_values.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

double distribution_function(const AlgebraElement& x, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("distribution function needs s > 0");
    double mass = 0.0;
    for (const auto& [sigma, w] : singular_values_with_masses(x))
        if (sigma > s) mass += w;
    return mass;
}

StepFunction singular_number_function(const AlgebraElement& x) {
    auto sv = singular_values_with_masses(x);
    std::sort(sv.begin(), sv.end(), [](auto a, auto b) { return a.first > b.first; });

    const double end = x.algebra()->total_trace();
    std::vector<double> knots{0.0};
    std::vector<double> values;
    double t = 0.0;
    for (const auto& [sigma, w] : sv) {
        if (sigma <= 0.0) break;  // zero tail handled below
        if (!values.empty() && values.back() == sigma) {
            t += w;
            knots.back() = t;
            continue;
        }
        t += w;
        values.push_back(sigma);
        knots.push_back(t);
    }
    // clamp accumulated rounding so the support never exceeds tau(1)
    if (!knots.empty() && knots.back() > end) knots.back() = end;
    if (knots.back() < end) {
        values.push_back(0.0);
        knots.push_back(end);
    }
    if (values.empty()) return StepFunction::zero(end);
    return StepFunction::from_steps(std::move(knots), std::move(values));
}

double singular_number(const AlgebraElement& x, double t) {
    return singular_number_function(x).value_at(t);
}

double trace_of_function(const RealFunction& f, const AlgebraElement& x) {
    if (std::fabs(f(0.0)) > 1e-14)
        throw std::invalid_argument("trace_of_function requires f(0) = 0");
    StepFunction mu = singular_number_function(x);
    double total = 0.0;
    for (size_t i = 0; i < mu.values().size(); ++i)
        total += f(mu.values()[i]) * (mu.knots()[i + 1] - mu.knots()[i]);
    return total;
}

double majorization_integral(const AlgebraElement& x, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("majorization integral needs s > 0");
    return singular_number_function(x).integral(0.0, s);
}

}  // namespace ergolab
