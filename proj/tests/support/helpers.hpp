#ifndef ERGOLAB_TEST_HELPERS_HPP
#define ERGOLAB_TEST_HELPERS_HPP

#include "ergolab/algebra.hpp"
#include "ergolab/random.hpp"

#include <initializer_list>
#include <vector>

namespace ergolab::testing {

/// the running example: M_2 (+) M_1 with trace weights 1 and 2, tau(1) = 4
inline AlgebraPtr example_algebra() { return make_algebra({2, 1}, {1.0, 2.0}); }

/// diag(3, 1) (+) [5] in the example algebra
inline AlgebraElement example_element() {
    AlgebraPtr alg = example_algebra();
    Matrix b0(2, 2);
    b0 << Complex(3, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);
    Matrix b1(1, 1);
    b1 << Complex(5, 0);
    return AlgebraElement(alg, {b0, b1});
}

inline AlgebraElement diag_element(const AlgebraPtr& alg,
                                   std::initializer_list<double> entries) {
    std::vector<Matrix> blocks;
    auto it = entries.begin();
    for (int b = 0; b < alg->block_count(); ++b) {
        const int d = alg->block_dim(b);
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = Complex(*it++, 0.0);
        blocks.push_back(std::move(m));
    }
    return AlgebraElement(alg, std::move(blocks));
}

/// single off-diagonal matrix unit E_{rc} in block b
inline AlgebraElement matrix_unit(const AlgebraPtr& alg, int b, int r, int c) {
    AlgebraElement e = AlgebraElement::zero(alg);
    std::vector<Matrix> blocks = e.blocks();
    blocks[static_cast<size_t>(b)](r, c) = Complex(1.0, 0.0);
    return AlgebraElement(alg, std::move(blocks));
}

}  // namespace ergolab::testing

#endif  // ERGOLAB_TEST_HELPERS_HPP
