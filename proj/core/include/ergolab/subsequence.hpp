#ifndef ERGOLAB_SUBSEQUENCE_HPP
#define ERGOLAB_SUBSEQUENCE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ergolab {

/// Strictly increasing sequence of natural numbers (0 included), with a
/// membership test consistent with the generator and optional analytic
/// density metadata for the built-in families.
class Subsequence {
public:
    /// k_j, j >= 0
    std::int64_t at(std::int64_t j) const;
    bool contains(std::int64_t m) const;
    std::optional<double> declared_density() const { return density_; }
    const std::string& describe() const { return name_; }

    static Subsequence all();
    /// k_j = step * j + offset, step >= 1, offset >= 0
    static Subsequence arithmetic(std::int64_t step, std::int64_t offset = 0);
    /// naturals that are not perfect squares: 2, 3, 5, 6, 7, 8, 10, ...
    static Subsequence squares_complement();
    static Subsequence explicit_list(std::vector<std::int64_t> values);
    static Subsequence custom(std::function<std::int64_t(std::int64_t)> generator,
                              std::function<bool(std::int64_t)> membership,
                              std::optional<double> density, std::string name);

private:
    Subsequence() = default;
    std::function<std::int64_t(std::int64_t)> generator_;
    std::function<bool(std::int64_t)> membership_;
    std::optional<double> density_;
    std::string name_;
};

/// |{0, 1, ..., n} n k| / (n + 1)
double empirical_density(const Subsequence& k, std::int64_t n);

struct LowerDensityWitness {
    double sup_ratio;    // max over n in [n_min, n_max] of k_n / n
    double final_ratio;  // k_{n_max} / n_max, the 1/d estimate
};

/// Finite sup_ratio certifies positive lower density at desk scale.
LowerDensityWitness lower_density_witness(const Subsequence& k, std::int64_t n_max,
                                          std::int64_t n_min = 1);

}  // namespace ergolab

#endif  // ERGOLAB_SUBSEQUENCE_HPP
