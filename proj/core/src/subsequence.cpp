#include "ergolab/subsequence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

namespace {

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(std::int64_t n) {
    const std::int64_t r = isqrt(n);
    return r * r == n;
}

}  // namespace

std::int64_t Subsequence::at(std::int64_t j) const {
    if (j < 0) throw std::invalid_argument("subsequence index must be >= 0");
    return generator_(j);
}

bool Subsequence::contains(std::int64_t m) const {
    if (m < 0) return false;
    return membership_(m);
}

Subsequence Subsequence::all() {
    Subsequence s;
    s.generator_ = [](std::int64_t j) { return j; };
    s.membership_ = [](std::int64_t) { return true; };
    s.density_ = 1.0;
    s.name_ = "all";
    return s;
}

Subsequence Subsequence::arithmetic(std::int64_t step, std::int64_t offset) {
    if (step < 1 || offset < 0)
        throw std::invalid_argument("arithmetic subsequence needs step >= 1, offset >= 0");
    Subsequence s;
    s.generator_ = [step, offset](std::int64_t j) { return step * j + offset; };
    s.membership_ = [step, offset](std::int64_t m) {
        return m >= offset && (m - offset) % step == 0;
    };
    s.density_ = 1.0 / static_cast<double>(step);
    s.name_ = "arithmetic(" + std::to_string(step) + "," + std::to_string(offset) + ")";
    return s;
}

Subsequence Subsequence::squares_complement() {
    Subsequence s;
    // closed form for the (j+1)-th nonsquare, verified against membership
    s.generator_ = [](std::int64_t j) {
        const auto n = static_cast<double>(j + 1);
        std::int64_t k = j + 1 + static_cast<std::int64_t>(std::floor(0.5 + std::sqrt(n)));
        while (is_square(k)) ++k;  // guards the float boundary cases
        return k;
    };
    s.membership_ = [](std::int64_t m) { return !is_square(m); };
    s.density_ = 1.0;
    s.name_ = "squares-complement";
    return s;
}

Subsequence Subsequence::explicit_list(std::vector<std::int64_t> values) {
    if (values.empty()) throw std::invalid_argument("explicit subsequence must be nonempty");
    if (values.front() < 0) throw std::invalid_argument("subsequence entries must be >= 0");
    for (size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1]))
            throw std::invalid_argument("explicit subsequence must strictly increase");
    auto shared = std::make_shared<std::vector<std::int64_t>>(std::move(values));
    Subsequence s;
    s.generator_ = [shared](std::int64_t j) {
        if (j >= static_cast<std::int64_t>(shared->size()))
            throw std::out_of_range("index beyond the end of the explicit subsequence");
        return (*shared)[static_cast<size_t>(j)];
    };
    s.membership_ = [shared](std::int64_t m) {
        return std::binary_search(shared->begin(), shared->end(), m);
    };
    s.name_ = "list[" + std::to_string(shared->size()) + "]";
    return s;
}

Subsequence Subsequence::custom(std::function<std::int64_t(std::int64_t)> generator,
                                std::function<bool(std::int64_t)> membership,
                                std::optional<double> density, std::string name) {
    Subsequence s;
    s.generator_ = std::move(generator);
    s.membership_ = std::move(membership);
    s.density_ = density;
    s.name_ = std::move(name);
    return s;
}

double empirical_density(const Subsequence& k, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("empirical_density needs n >= 0");
    std::int64_t count = 0;
    for (std::int64_t m = 0; m <= n; ++m)
        if (k.contains(m)) ++count;
    return static_cast<double>(count) / static_cast<double>(n + 1);
}

LowerDensityWitness lower_density_witness(const Subsequence& k, std::int64_t n_max,
                                          std::int64_t n_min) {
    if (n_max < 1 || n_min < 1 || n_min > n_max)
        throw std::invalid_argument("lower_density_witness needs 1 <= n_min <= n_max");
    double sup = 0.0;
    for (std::int64_t n = n_min; n <= n_max; ++n)
        sup = std::max(sup, static_cast<double>(k.at(n)) / static_cast<double>(n));
    return {sup, static_cast<double>(k.at(n_max)) / static_cast<double>(n_max)};
}

}  // namespace ergolab
