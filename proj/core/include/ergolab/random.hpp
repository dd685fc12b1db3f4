#ifndef ERGOLAB_RANDOM_HPP
#define ERGOLAB_RANDOM_HPP

#include "ergolab/algebra.hpp"

#include <cstdint>
#include <random>

namespace ergolab {

/// Seeded generator with fully specified output mappings, so that a (seed,
/// draw sequence) pair reproduces bit-identical values on every run.
/// Identified in result manifests as "mt19937_64/boxmuller-v1".
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr const char* generator_name() { return "mt19937_64/boxmuller-v1"; }

    std::uint64_t next_u64() { return engine_(); }

    /// uniform in [0, 1), 53-bit mantissa
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

    double gaussian();

    Complex complex_gaussian() {
        double re = gaussian();
        double im = gaussian();
        return Complex(re, im);
    }

    /// Derives an independent substream; mixing is splitmix64-style.
    Rng fork(std::uint64_t stream) const;

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

AlgebraElement random_element(const AlgebraPtr& algebra, Rng& rng, double scale = 1.0);
AlgebraElement random_self_adjoint(const AlgebraPtr& algebra, Rng& rng, double scale = 1.0);
AlgebraElement random_positive(const AlgebraPtr& algebra, Rng& rng, double scale = 1.0);
/// Haar-ish unitary: QR of a Gaussian matrix with phase-fixed R diagonal.
AlgebraElement random_unitary(const AlgebraPtr& algebra, Rng& rng);
CenterElement random_central_phases(const AlgebraPtr& algebra, Rng& rng);
Projection random_projection(const AlgebraPtr& algebra, Rng& rng);

/// Random algebra with total dimension <= max_total_dim and mixed trace
/// weights drawn from [0.25, 2.5].
AlgebraPtr random_algebra(Rng& rng, int max_total_dim, int max_blocks = 3);

}  // namespace ergolab

#endif  // ERGOLAB_RANDOM_HPP
