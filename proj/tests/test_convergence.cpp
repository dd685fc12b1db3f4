#include "ergolab/convergence.hpp"
#include "ergolab/random.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace ergolab;
using namespace ergolab::testing;

TEST_CASE("in_measure_neighborhood") {
    AlgebraPtr alg = make_algebra({2}, {1.0});

    SUBCASE("small norm gives e = 1") {
        Rng rng(1);
        AlgebraElement x = random_element(alg, rng, 0.001);
        NeighborhoodWitness w = in_measure_neighborhood(x, 1.0, 0.1, false);
        CHECK(w.inside);
        CHECK(w.trace_defect == doctest::Approx(0.0));
    }

    SUBCASE("spectral witness excises the large direction") {
        AlgebraElement x = diag_element(alg, {10.0, 0.1});
        NeighborhoodWitness w = in_measure_neighborhood(x, 0.5, 1.5, true);
        CHECK(w.inside);
        CHECK(w.trace_defect == doctest::Approx(1.0));
        CHECK(w.compressed_norm <= 0.5 + 1e-12);
    }

    SUBCASE("a large multiple of 1 is in no small neighborhood") {
        AlgebraPtr a = example_algebra();
        AlgebraElement x = 10.0 * AlgebraElement::identity(a);
        NeighborhoodWitness w = in_measure_neighborhood(x, 1.0, 0.5, true);
        CHECK_FALSE(w.inside);
    }

    SUBCASE("one-sided membership implies bilateral membership") {
        Rng rng(2);
        for (int trial = 0; trial < 20; ++trial) {
            AlgebraPtr a = random_algebra(rng, 6);
            AlgebraElement x = random_element(a, rng);
            const double eps = rng.uniform(0.2, 1.5);
            const double delta = rng.uniform(0.2, 2.0);
            NeighborhoodWitness one_sided = in_measure_neighborhood(x, eps, delta, false);
            if (one_sided.inside) {
                NeighborhoodWitness two_sided = in_measure_neighborhood(x, eps, delta, true);
                CHECK(two_sided.inside);
            }
        }
    }
}

TEST_CASE("bau_distance") {
    AlgebraPtr alg = make_algebra({3}, {1.0});
    Rng rng(3);
    AlgebraElement xhat = random_self_adjoint(alg, rng);

    SUBCASE("tail equal to the limit gives gap 0 at e = 1") {
        std::vector<AlgebraElement> tail(4, xhat);
        BauDistance bd = bau_distance(tail, xhat, 0.5);
        CHECK(bd.sup_gap == doctest::Approx(0.0));
        CHECK(bd.e.trace_defect() == doctest::Approx(0.0));
    }

    SUBCASE("a bad corner is isolated by peeling") {
        AlgebraElement corner = matrix_unit(alg, 0, 0, 0);
        std::vector<AlgebraElement> tail;
        for (int n = 1; n <= 4; ++n)
            tail.push_back(xhat + 5.0 * corner + random_element(alg, rng, 1e-4));
        BauDistance bd = bau_distance(tail, xhat, 1.5);
        CHECK(bd.sup_gap < 5.0);   // strictly better than the uncompressed sup
        CHECK(bd.sup_gap < 0.1);   // the corner carries all the defect
        CHECK(bd.e.trace_defect() < 1.5);
    }
}

TEST_CASE("estimate_limit and the fixed-point oracle") {
    AlgebraPtr alg = make_algebra({2}, {1.0});
    AlgebraElement e12 = matrix_unit(alg, 0, 0, 1);

    SUBCASE("identity operator fixes everything") {
        Rng rng(5);
        AlgebraElement x = random_element(alg, rng);
        CHECK(operator_norm(fixed_point_limit(DsOperator::identity(alg), x) - x) < 1e-10);
    }

    SUBCASE("sign conjugation kills E12") {
        DsOperator sign = DsOperator::from_unitary(diag_element(alg, {1.0, -1.0}));
        CHECK(operator_norm(fixed_point_limit(sign, e12)) < 1e-10);
    }

    SUBCASE("swap channel projects diagonals onto their mean") {
        DsOperator swap =
            DsOperator::from_kraus({matrix_unit(alg, 0, 0, 1), matrix_unit(alg, 0, 1, 0)});
        AlgebraElement d = diag_element(alg, {3.0, 1.0});
        AlgebraElement limit = fixed_point_limit(swap, d);
        CHECK(operator_norm(limit - 2.0 * AlgebraElement::identity(alg)) < 1e-10);
    }

    SUBCASE("T(xhat) = xhat for plain averages") {
        Rng rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            AlgebraPtr a = random_algebra(rng, 6);
            DsOperator op = trial % 2 == 0
                                ? DsOperator::from_unitary(random_unitary(a, rng))
                                : DsOperator::mixture(
                                      {{0.5, DsOperator::from_unitary(random_unitary(a, rng))},
                                       {0.5, DsOperator::identity(a)}});
            AlgebraElement x = random_element(a, rng);
            AlgebraElement xhat = fixed_point_limit(op, x);
            CHECK(operator_norm(op.apply(xhat) - xhat) < 1e-8);
        }
    }

    SUBCASE("Cesaro tail estimate") {
        std::vector<AlgebraElement> avgs{diag_element(alg, {1.0, 1.0}),
                                         diag_element(alg, {2.0, 2.0}),
                                         diag_element(alg, {3.0, 3.0}),
                                         diag_element(alg, {5.0, 5.0})};
        AlgebraElement est = estimate_limit(avgs);
        CHECK(operator_norm(est - 4.0 * AlgebraElement::identity(alg)) < 1e-12);
    }
}

TEST_CASE("plain averages approach the fixed-point oracle") {
    Rng rng(11);
    AlgebraPtr alg = make_algebra({3, 2}, {1.0, 0.5});
    DsOperator op = DsOperator::mixture(
        {{0.5, DsOperator::from_unitary(random_unitary(alg, rng))},
         {0.5, DsOperator::from_kraus({std::sqrt(0.5) * random_unitary(alg, rng),
                                       std::sqrt(0.5) * random_unitary(alg, rng)})}});
    AlgebraElement x = random_element(alg, rng);
    AlgebraElement oracle = fixed_point_limit(op, x);
    const std::int64_t big_n = 2048;
    AverageRequest req(op, WeightSequence::constant_one(alg), std::nullopt, std::nullopt, x,
                       big_n);
    AlgebraElement a_n = average(req, big_n);
    CHECK(operator_norm(a_n - oracle) <= 10.0 * operator_norm(x) / static_cast<double>(big_n));
}

TEST_CASE("convergence probe") {
    Rng rng(13);
    AlgebraPtr alg = make_algebra({2, 1}, {1.0, 0.5});

    SUBCASE("identity operator with unit weights has zero gaps") {
        AlgebraElement x = random_element(alg, rng);
        AverageRequest req(DsOperator::identity(alg), WeightSequence::constant_one(alg),
                           std::nullopt, std::nullopt, x, 200);
        ConvergenceReport rep =
            convergence_probe(req, OrliczFunction::power(2.0), 0.05, {16, 64});
        CHECK(rep.gaps[0] == doctest::Approx(0.0));
        CHECK(rep.gaps[1] == doctest::Approx(0.0));
        CHECK(rep.gap_halved());
        CHECK(rep.limit_norm_bounded());
    }

    SUBCASE("random unitary conjugation with central weights converges b.a.u.-style") {
        DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
        WeightSequence b = make_central_besicovitch(alg, {Complex(1.0, 0.0)}, {{0.8, 2.3}},
                                                    PerturbationSchedule{}, 17);
        AlgebraElement x = random_element(alg, rng);
        AverageRequest req(op, b, std::nullopt, Subsequence::squares_complement(), x, 2100);
        ConvergenceReport rep =
            convergence_probe(req, OrliczFunction::power(2.0), 0.05, {64, 256, 1024});
        CHECK(rep.mode == ConvergenceMode::bilateral_almost_uniform);
        CHECK(rep.gaps.size() == 3);
        CHECK(rep.gap_halved());
        CHECK(rep.witness_trace_defect < 0.05);
        CHECK(rep.limit_norm_bounded());
        CHECK(rep.non_monotone_steps() <= 1);
    }

    SUBCASE("two-sided bounded weights produce an a.u. report") {
        DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
        TrigPolynomial psi({Complex(1.0, 0.0)}, {random_unitary(alg, rng)});
        WeightSequence left = WeightSequence::from_trig(psi, PerturbationSchedule{}, 2);
        WeightSequence right = WeightSequence::scalar(alg, {Complex(0.6, 0.0)}, {1.1},
                                                      PerturbationSchedule{}, 3);
        AlgebraElement x = random_element(alg, rng);
        AverageRequest req(op, left, right, std::nullopt, x, 600);
        ConvergenceReport rep =
            convergence_probe(req, OrliczFunction::power(2.0), 0.05, {32, 128});
        CHECK(rep.mode == ConvergenceMode::almost_uniform);
        CHECK(rep.gaps.size() == 2);
    }

    SUBCASE("one-sided probe rejects non-central weights") {
        DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
        TrigPolynomial psi({Complex(1.0, 0.0)}, {random_unitary(alg, rng)});
        WeightSequence noncentral = WeightSequence::from_trig(psi, PerturbationSchedule{}, 2);
        AlgebraElement x = random_element(alg, rng);
        AverageRequest req(op, noncentral, std::nullopt, std::nullopt, x, 600);
        CHECK_THROWS_AS(convergence_probe(req, OrliczFunction::power(2.0), 0.05, {32, 128}),
                        std::invalid_argument);
    }

    SUBCASE("gap curves are reproducible") {
        DsOperator op = DsOperator::from_unitary(random_unitary(alg, rng));
        AlgebraElement x = random_element(alg, rng);
        WeightSequence one = WeightSequence::constant_one(alg);
        AverageRequest req(op, one, std::nullopt, std::nullopt, x, 300);
        ConvergenceReport a = convergence_probe(req, OrliczFunction::power(2.0), 0.05, {16, 64});
        ConvergenceReport b = convergence_probe(req, OrliczFunction::power(2.0), 0.05, {16, 64});
        REQUIRE(a.gaps.size() == b.gaps.size());
        for (size_t i = 0; i < a.gaps.size(); ++i) CHECK(a.gaps[i] == b.gaps[i]);
    }
}
