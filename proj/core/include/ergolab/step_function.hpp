#ifndef ERGOLAB_STEP_FUNCTION_HPP
#define ERGOLAB_STEP_FUNCTION_HPP

#include <iosfwd>
#include <vector>

namespace ergolab {

/// Right-continuous step function on [0, domain_end): value values[i] on
/// [knots[i], knots[i+1]), zero at and beyond knots.back().
class StepFunction {
public:
    static StepFunction from_steps(std::vector<double> knots, std::vector<double> values);
    static StepFunction zero(double domain_end);

    double domain_end() const { return knots_.back(); }
    double value_at(double t) const;
    /// exact integral over [a, b]
    double integral(double a, double b) const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

    bool nonincreasing(double tol = 0.0) const;

    /// rows "t_start,t_end,value"
    void write_csv(std::ostream& os) const;

private:
    StepFunction(std::vector<double> knots, std::vector<double> values)
        : knots_(std::move(knots)), values_(std::move(values)) {}
    std::vector<double> knots_;   // strictly increasing, knots_.front() == 0
    std::vector<double> values_;  // one per interval, size == knots_.size() - 1
};

}  // namespace ergolab

#endif  // ERGOLAB_STEP_FUNCTION_HPP
