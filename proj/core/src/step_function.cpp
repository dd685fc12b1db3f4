#include "ergolab/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace ergolab {

StepFunction StepFunction::from_steps(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 2 || values.size() + 1 != knots.size())
        throw std::invalid_argument("step function needs n+1 knots for n values");
    if (knots.front() != 0.0) throw std::invalid_argument("step function domain starts at 0");
    for (size_t i = 0; i + 1 < knots.size(); ++i)
        if (!(knots[i] < knots[i + 1])) throw std::invalid_argument("knots must strictly increase");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("step values must be finite and >= 0");
    return StepFunction(std::move(knots), std::move(values));
}

StepFunction StepFunction::zero(double domain_end) {
    return from_steps({0.0, domain_end}, {0.0});
}

double StepFunction::value_at(double t) const {
    if (t < 0.0) throw std::invalid_argument("step function evaluated at negative t");
    if (t >= knots_.back()) return 0.0;
    // first knot strictly greater than t; value lives on [knots[i-1], knots[i])
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    size_t idx = static_cast<size_t>(it - knots_.begin()) - 1;
    return values_[idx];
}

double StepFunction::integral(double a, double b) const {
    if (a < 0.0 || b < a) throw std::invalid_argument("bad integration bounds");
    double total = 0.0;
    for (size_t i = 0; i < values_.size(); ++i) {
        const double lo = std::max(a, knots_[i]);
        const double hi = std::min(b, knots_[i + 1]);
        if (hi > lo) total += values_[i] * (hi - lo);
    }
    return total;
}

bool StepFunction::nonincreasing(double tol) const {
    for (size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i + 1] > values_[i] + tol) return false;
    return true;
}

namespace {
void put_double(std::ostream& os, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}
}  // namespace

void StepFunction::write_csv(std::ostream& os) const {
    os << "t_start,t_end,value\n";
    for (size_t i = 0; i < values_.size(); ++i) {
        put_double(os, knots_[i]);
        os << ',';
        put_double(os, knots_[i + 1]);
        os << ',';
        put_double(os, values_[i]);
        os << '\n';
    }
}

}  // namespace ergolab
