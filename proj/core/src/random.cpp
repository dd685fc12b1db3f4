#include "ergolab/random.hpp"

#include <cmath>

namespace ergolab {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    // modulo bias is irrelevant at desk-scale ranges (span << 2^64)
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on explicitly constructed uniforms
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng Rng::fork(std::uint64_t stream) const {
    Rng copy = *this;
    return Rng(mix(copy.next_u64(), stream));
}

AlgebraElement random_element(const AlgebraPtr& algebra, Rng& rng, double scale) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra->block_count(); ++b) {
        const int d = algebra->block_dim(b);
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = scale * rng.complex_gaussian();
        blocks.push_back(std::move(m));
    }
    return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement random_self_adjoint(const AlgebraPtr& algebra, Rng& rng, double scale) {
    return real_part(random_element(algebra, rng, scale));
}

AlgebraElement random_positive(const AlgebraPtr& algebra, Rng& rng, double scale) {
    AlgebraElement g = random_element(algebra, rng, scale);
    AlgebraElement p = g.adjoint() * g;
    // normalize so the expected operator norm stays O(scale)
    return p.scaled(Complex(1.0 / std::sqrt(static_cast<double>(algebra->total_dim())), 0.0));
}

AlgebraElement random_unitary(const AlgebraPtr& algebra, Rng& rng) {
    std::vector<Matrix> blocks;
    for (int b = 0; b < algebra->block_count(); ++b) {
        const int d = algebra->block_dim(b);
        Matrix g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ() * Matrix::Identity(d, d);
        Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < d; ++i) {
            Complex rii = r(i, i);
            Complex phase = (std::abs(rii) > 0.0) ? rii / std::abs(rii) : Complex(1.0, 0.0);
            q.col(i) *= phase;
        }
        blocks.push_back(std::move(q));
    }
    return AlgebraElement(algebra, std::move(blocks));
}

CenterElement random_central_phases(const AlgebraPtr& algebra, Rng& rng) {
    std::vector<Complex> scalars;
    for (int b = 0; b < algebra->block_count(); ++b)
        scalars.push_back(std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI)));
    return CenterElement(algebra, std::move(scalars));
}

Projection random_projection(const AlgebraPtr& algebra, Rng& rng) {
    AlgebraElement u = random_unitary(algebra, rng);
    std::vector<Matrix> cols;
    for (int b = 0; b < algebra->block_count(); ++b) {
        const int d = algebra->block_dim(b);
        const int r = static_cast<int>(rng.uniform_int(0, d));
        cols.push_back(u.block(b).leftCols(r));
    }
    return Projection::from_orthonormal_columns(algebra, cols);
}

AlgebraPtr random_algebra(Rng& rng, int max_total_dim, int max_blocks) {
    const int blocks = static_cast<int>(rng.uniform_int(1, max_blocks));
    std::vector<int> dims;
    std::vector<double> weights;
    int remaining = max_total_dim;
    for (int b = 0; b < blocks; ++b) {
        const int max_d = std::max(1, remaining - (blocks - 1 - b));
        const int d = static_cast<int>(rng.uniform_int(1, std::min(max_d, 6)));
        dims.push_back(d);
        remaining -= d;
        weights.push_back(rng.uniform(0.25, 2.5));
    }
    return make_algebra(std::move(dims), std::move(weights));
}

}  // namespace ergolab
