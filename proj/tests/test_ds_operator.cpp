#include "ergolab/ds_operator.hpp"
#include "ergolab/orlicz.hpp"
#include "ergolab/random.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace ergolab;
using namespace ergolab::testing;

namespace {

AlgebraPtr m2() { return make_algebra({2}, {1.0}); }

AlgebraElement sign_unitary(const AlgebraPtr& alg) {
    return ergolab::testing::diag_element(alg, {1.0, -1.0});
}

}  // namespace

TEST_CASE("from_unitary") {
    AlgebraPtr alg = m2();
    DsOperator id = DsOperator::from_unitary(AlgebraElement::identity(alg));
    Rng rng(3);
    AlgebraElement x = random_element(alg, rng);
    CHECK(operator_norm(id.apply(x) - x) == 0.0);

    DsOperator sign = DsOperator::from_unitary(sign_unitary(alg));
    AlgebraElement e12 = matrix_unit(alg, 0, 0, 1);
    CHECK(operator_norm(sign.apply(e12) + e12) < 1e-14);  // T(E12) = -E12

    DsOperator u = DsOperator::from_unitary(random_unitary(alg, rng));
    CHECK(operator_norm(u.apply(AlgebraElement::identity(alg)) -
                        AlgebraElement::identity(alg)) < 1e-12);

    CHECK_THROWS_AS(DsOperator::from_unitary(diag_element(alg, {2.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("from_kraus: diagonal swap channel") {
    AlgebraPtr alg = m2();
    AlgebraElement e12 = matrix_unit(alg, 0, 0, 1);
    AlgebraElement e21 = matrix_unit(alg, 0, 1, 0);
    DsOperator swap = DsOperator::from_kraus({e12, e21});

    Matrix xm(2, 2);
    xm << Complex(1, 0), Complex(7, 2), Complex(-1, 3), Complex(4, 0);
    AlgebraElement x(alg, {xm});
    AlgebraElement tx = swap.apply(x);
    CHECK(tx.block(0)(0, 0) == Complex(4, 0));
    CHECK(tx.block(0)(1, 1) == Complex(1, 0));
    CHECK(std::abs(tx.block(0)(0, 1)) == 0.0);
    CHECK(operator_norm(swap.apply(AlgebraElement::identity(alg)) -
                        AlgebraElement::identity(alg)) < 1e-12);

    DsOperator ident = DsOperator::from_kraus({AlgebraElement::identity(alg)});
    CHECK(operator_norm(ident.apply(x) - x) == 0.0);

    SUBCASE("mixture of identity and conjugation via Kraus") {
        Rng rng(9);
        AlgebraElement u = random_unitary(alg, rng);
        const double c = 1.0 / std::sqrt(2.0);
        DsOperator mix =
            DsOperator::from_kraus({c * AlgebraElement::identity(alg), c * u});
        AlgebraElement expected = 0.5 * x + 0.5 * (u * x * u.adjoint());
        CHECK(operator_norm(mix.apply(x) - expected) < 1e-12);
    }

    SUBCASE("unbalanced Kraus sets are rejected") {
        CHECK_THROWS_AS(DsOperator::from_kraus({e12}), std::invalid_argument);
    }
}

TEST_CASE("verify_ds certifies the constructors and rejects non-DS maps") {
    AlgebraPtr alg = m2();
    Rng rng(11);
    DsOperator u = DsOperator::from_unitary(random_unitary(alg, rng));
    DsCertificate cert = u.verify(16, 1e-12);
    CHECK(cert.max_defect() <= 1e-12);
    CHECK(u.certificate().has_value());

    SUBCASE("T(1) = diag(1, 1.5) fails with unitality defect 0.5") {
        AlgebraElement e11 = matrix_unit(alg, 0, 0, 0);
        AlgebraElement e22 = matrix_unit(alg, 0, 1, 1);
        DsOperator bad = DsOperator::from_kraus_unchecked({e11, std::sqrt(1.5) * e22});
        try {
            bad.verify(8, 1e-9);
            FAIL("expected certification_error");
        } catch (const certification_error& e) {
            CHECK(operator_norm(e.witness()) > 0.0);
        }
        // the defect itself is the unitality gap
        AlgebraElement t1 = bad.apply(AlgebraElement::identity(alg));
        CHECK(operator_norm(t1 - diag_element(alg, {1.0, 1.5})) < 1e-12);
    }

    SUBCASE("convex combinations of certified operators certify") {
        DsOperator a = DsOperator::from_unitary(random_unitary(alg, rng));
        DsOperator b = DsOperator::from_kraus(
            {matrix_unit(alg, 0, 0, 1), matrix_unit(alg, 0, 1, 0)});
        DsOperator mix = DsOperator::mixture({{0.3, a}, {0.7, b}});
        CHECK(mix.verify(16, 1e-10).max_defect() <= 1e-10);
        CHECK_THROWS_AS(DsOperator::mixture({{0.3, a}, {0.3, b}}), std::invalid_argument);
    }

    SUBCASE("verify needs at least one sample") {
        CHECK_THROWS_AS(u.verify(0, 1e-9), std::invalid_argument);
    }
}

TEST_CASE("block permutations") {
    AlgebraPtr alg = make_algebra({2, 2}, {1.0, 1.0});
    DsOperator perm = DsOperator::from_block_permutation(alg, {1, 0});
    Rng rng(13);
    AlgebraElement x = random_element(alg, rng);
    AlgebraElement tx = perm.apply(x);
    CHECK((tx.block(0) - x.block(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((tx.block(1) - x.block(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(perm.verify(8, 1e-12).max_defect() <= 1e-12);
    CHECK(operator_norm(perm.apply_power(2, x) - x) == 0.0);

    // swapping blocks with different weights is not trace preserving
    AlgebraPtr uneven = make_algebra({2, 2}, {1.0, 2.0});
    CHECK_THROWS_AS(DsOperator::from_block_permutation(uneven, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("apply_power") {
    AlgebraPtr alg = m2();
    AlgebraElement e12 = matrix_unit(alg, 0, 0, 1);
    DsOperator sign = DsOperator::from_unitary(sign_unitary(alg));
    Rng rng(17);
    AlgebraElement x = random_element(alg, rng);

    CHECK(operator_norm(sign.apply_power(0, x) - x) == 0.0);
    CHECK(operator_norm(sign.apply_power(3, e12) + e12) < 1e-13);  // (-1)^3

    DsOperator swap =
        DsOperator::from_kraus({matrix_unit(alg, 0, 0, 1), matrix_unit(alg, 0, 1, 0)});
    AlgebraElement d = diag_element(alg, {2.0, -3.0});
    CHECK(operator_norm(swap.apply_power(2, d) - d) < 1e-13);  // involution on diagonals

    SUBCASE("semigroup property and agreement with repeated application") {
        DsOperator mix = DsOperator::mixture(
            {{0.5, sign}, {0.5, DsOperator::from_unitary(random_unitary(alg, rng))}});
        for (std::int64_t j : {1, 2, 5, 17, 64}) {
            AlgebraElement direct = x;
            for (std::int64_t i = 0; i < j; ++i) direct = mix.apply(direct);
            CHECK(operator_norm(mix.apply_power(j, x) - direct) < 1e-10);
        }
        AlgebraElement lhs = mix.apply_power(12, x);
        AlgebraElement rhs = mix.apply_power(5, mix.apply_power(7, x));
        CHECK(operator_norm(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("power iterator tracks T^j and survives its drift checkpoints") {
    AlgebraPtr alg = make_algebra({2, 1}, {1.0, 2.0});
    Rng rng(19);
    DsOperator op = DsOperator::from_kraus({std::sqrt(0.4) * random_unitary(alg, rng),
                                            std::sqrt(0.6) * random_unitary(alg, rng)});
    AlgebraElement x = random_element(alg, rng);
    PowerIterator it = op.power_iterator();
    for (std::int64_t j = 0; j <= 600; ++j) {
        if (j % 97 == 0)
            CHECK(operator_norm(it.apply(x) - op.apply_power(j, x)) < 1e-9);
        it.advance();
    }
}

TEST_CASE("positivity and norm contraction on random positives") {
    Rng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        AlgebraPtr alg = random_algebra(rng, 8);
        DsOperator op = trial % 2 == 0
                            ? DsOperator::from_unitary(random_unitary(alg, rng))
                            : DsOperator::from_kraus({std::sqrt(0.5) * random_unitary(alg, rng),
                                                      std::sqrt(0.5) * random_unitary(alg, rng)});
        AlgebraElement pos = random_positive(alg, rng);
        CHECK(min_eigenvalue(op.apply(pos)) >= -1e-10);
        AlgebraElement x = random_element(alg, rng);
        for (double p : {1.0, 2.0, 3.0})
            CHECK(lp_norm(op.apply(x), p) <= lp_norm(x, p) + 1e-8);
    }
}
