#include "ergolab/orlicz.hpp"
#include "ergolab/ds_operator.hpp"
#include "ergolab/random.hpp"
#include "ergolab/singular_values.hpp"
#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace ergolab;
using namespace ergolab::testing;

TEST_CASE("Orlicz function construction and validation") {
    OrliczFunction p2 = OrliczFunction::power(2.0);
    CHECK(p2(2.0) == doctest::Approx(2.0));
    CHECK(p2.delta2_constant().value() == doctest::Approx(4.0));
    CHECK(OrliczFunction::expm1()(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
    CHECK_FALSE(OrliczFunction::expm1().delta2_constant().has_value());

    CHECK_THROWS_AS(OrliczFunction("bad", [](double t) { return t + 1.0; }),
                    std::invalid_argument);  // Phi(0) != 0
    CHECK_THROWS_AS(OrliczFunction("concave", [](double t) { return std::sqrt(t); }),
                    std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction("bad-delta2", [](double t) { return t * t; }, 3.0),
                    std::invalid_argument);  // needs d >= 4

    SUBCASE("parse") {
        CHECK(OrliczFunction::parse("p:3").name() == OrliczFunction::power(3.0).name());
        CHECK(OrliczFunction::parse("expm1").name() == "expm1");
        CHECK_THROWS_AS(OrliczFunction::parse("nope"), std::invalid_argument);
    }
}

TEST_CASE("Delta_2 constants for power functions are exact on the grid") {
    for (double p : {1.0, 2.0, 3.0}) {
        OrliczFunction phi = OrliczFunction::power(p);
        const double d = phi.delta2_constant().value();
        CHECK(d == doctest::Approx(std::pow(2.0, p)));
        for (double t : phi.validation_grid())
            CHECK(phi(2.0 * t) <= d * phi(t) * (1.0 + 1e-12));
    }
}

TEST_CASE("linearization constant u = delta / Phi(delta)") {
    CHECK(find_linearization_constant(OrliczFunction::power(2.0), 1.0) == doctest::Approx(2.0));
    CHECK(find_linearization_constant(OrliczFunction::power(1.0), 5.0) == doctest::Approx(1.0));
    CHECK(find_linearization_constant(OrliczFunction::power(3.0), 2.0) ==
          doctest::Approx(0.75));

    SUBCASE("guarantee u Phi(t) >= t for t >= delta") {
        OrliczFunction phi = OrliczFunction::expm1();
        const double delta = 0.37;
        const double u = find_linearization_constant(phi, delta);
        for (double t = delta; t < 30.0; t *= 1.17) CHECK(u * phi(t) >= t * (1.0 - 1e-12));
    }
}

TEST_CASE("modular values") {
    AlgebraPtr w1 = make_algebra({1}, {1.0});
    Matrix one(1, 1);
    one << Complex(1.0, 0.0);
    AlgebraElement x(w1, {one});
    OrliczFunction p2 = OrliczFunction::power(2.0);
    CHECK(modular(x, p2, 1.0) == doctest::Approx(0.5));
    CHECK(modular(AlgebraElement::zero(w1), p2, 0.3) == 0.0);

    AlgebraPtr m2 = make_algebra({2}, {1.0});
    AlgebraElement d13 = diag_element(m2, {1.0, 3.0});
    CHECK(modular(d13, p2, 2.0) == doctest::Approx(1.25));

    SUBCASE("nonincreasing in lambda") {
        double prev = modular(d13, p2, 0.25);
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            const double v = modular(d13, p2, lam);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("Luxemburg norm against the closed form for power functions") {
    AlgebraPtr w1 = make_algebra({1}, {1.0});
    Matrix one(1, 1);
    one << Complex(1.0, 0.0);
    CHECK(luxemburg_norm(AlgebraElement(w1, {one}), OrliczFunction::power(2.0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK(luxemburg_norm(AlgebraElement::zero(w1), OrliczFunction::power(2.0)) == 0.0);
    CHECK(luxemburg_norm(example_element(), OrliczFunction::power(1.0)) ==
          doctest::Approx(14.0).epsilon(1e-8));

    SUBCASE("||x||_Phi = ||x||_p p^(-1/p) over random elements") {
        Rng rng(55);
        for (int trial = 0; trial < 40; ++trial) {
            AlgebraPtr alg = random_algebra(rng, 9);
            AlgebraElement x = random_element(alg, rng, rng.uniform(0.1, 4.0));
            for (double p : {1.0, 2.0, 3.0}) {
                const double expected = lp_norm(x, p) * std::pow(p, -1.0 / p);
                const double got = luxemburg_norm(x, OrliczFunction::power(p));
                CHECK(got == doctest::Approx(expected).epsilon(1e-8));
            }
        }
    }

    SUBCASE("norm axioms hold approximately") {
        Rng rng(56);
        AlgebraPtr alg = random_algebra(rng, 8);
        OrliczFunction phi = OrliczFunction::expm1();
        AlgebraElement a = random_element(alg, rng);
        AlgebraElement b = random_element(alg, rng);
        CHECK(luxemburg_norm(2.5 * a, phi) ==
              doctest::Approx(2.5 * luxemburg_norm(a, phi)).epsilon(1e-7));
        CHECK(luxemburg_norm(a + b, phi) <=
              luxemburg_norm(a, phi) + luxemburg_norm(b, phi) + 1e-7);
    }
}

TEST_CASE("lp norms") {
    AlgebraPtr m2 = make_algebra({2}, {1.0});
    CHECK(lp_norm(diag_element(m2, {3.0, 4.0}), 2.0) == doctest::Approx(5.0));
    AlgebraPtr w3 = make_algebra({1}, {3.0});
    Matrix two(1, 1);
    two << Complex(2.0, 0.0);
    CHECK(lp_norm(AlgebraElement(w3, {two}), 1.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(lp_norm(diag_element(m2, {1.0, 1.0}), 0.5), std::invalid_argument);
    CHECK(lp_norm(example_element(), std::numeric_limits<double>::infinity()) ==
          doctest::Approx(5.0));

    SUBCASE("Hoelder spot check") {
        Rng rng(77);
        for (int trial = 0; trial < 25; ++trial) {
            AlgebraPtr alg = random_algebra(rng, 8);
            AlgebraElement x = random_element(alg, rng);
            AlgebraElement y = random_element(alg, rng);
            CHECK(lp_norm(x * y, 1.0) <= lp_norm(x, 2.0) * lp_norm(y, 2.0) + 1e-9);
        }
    }
}

TEST_CASE("bimodule bound ||axb||_Phi <= ||a|| ||b|| ||x||_Phi") {
    Rng rng(321);
    std::vector<OrliczFunction> phis{OrliczFunction::power(1.0), OrliczFunction::power(2.0),
                                     OrliczFunction::power(3.0), OrliczFunction::expm1()};
    for (int trial = 0; trial < 100; ++trial) {
        AlgebraPtr alg = random_algebra(rng, 8);
        AlgebraElement a = random_element(alg, rng);
        AlgebraElement x = random_element(alg, rng);
        AlgebraElement b = random_element(alg, rng);
        const OrliczFunction& phi = phis[static_cast<size_t>(trial % 4)];
        CHECK(luxemburg_norm(a * x * b, phi) <=
              operator_norm(a) * operator_norm(b) * luxemburg_norm(x, phi) + 1e-8);
    }
}

TEST_CASE("modular bound tau(Phi(|x|)) <= ||x||_Phi inside the unit ball") {
    Rng rng(654);
    for (int trial = 0; trial < 100; ++trial) {
        AlgebraPtr alg = random_algebra(rng, 8);
        OrliczFunction phi = trial % 2 == 0 ? OrliczFunction::power(2.0) : OrliczFunction::expm1();
        AlgebraElement raw = random_element(alg, rng);
        const double n = luxemburg_norm(raw, phi);
        if (n == 0.0) continue;
        AlgebraElement x = (rng.uniform(0.05, 1.0) / n) * raw;  // ||x||_Phi <= 1
        CHECK(modular(x, phi, 1.0) <= luxemburg_norm(x, phi) + 1e-8);
    }
}

TEST_CASE("DS operators contract the Luxemburg norm") {
    Rng rng(987);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraPtr alg = random_algebra(rng, 8);
        DsOperator t = trial % 2 == 0
                           ? DsOperator::from_unitary(random_unitary(alg, rng))
                           : DsOperator::from_kraus({std::sqrt(0.5) * random_unitary(alg, rng),
                                                     std::sqrt(0.5) * random_unitary(alg, rng)});
        t.verify(4, 1e-8);
        AlgebraElement x = random_element(alg, rng);
        for (const OrliczFunction& phi :
             {OrliczFunction::power(2.0), OrliczFunction::expm1()})
            CHECK(luxemburg_norm(t.apply(x), phi) <= luxemburg_norm(x, phi) + 1e-8);
    }
}

TEST_CASE("unit-ball monotonicity: pointwise mu domination bounds the norm") {
    Rng rng(135);
    for (int trial = 0; trial < 25; ++trial) {
        AlgebraPtr alg = random_algebra(rng, 8);
        AlgebraElement x = random_element(alg, rng);
        AlgebraElement a = random_element(alg, rng);
        AlgebraElement b = random_element(alg, rng);
        const double na = operator_norm(a), nb = operator_norm(b);
        if (na == 0.0 || nb == 0.0) continue;
        AlgebraElement y = (1.0 / (na * nb)) * (a * x * b);  // mu_t(y) <= mu_t(x)
        StepFunction mu_x = singular_number_function(x);
        StepFunction mu_y = singular_number_function(y);
        bool dominated = true;
        for (int g = 0; g < 64; ++g) {
            const double t = alg->total_trace() * (g + 0.5) / 64.0;
            dominated = dominated && mu_y.value_at(t) <= mu_x.value_at(t) + 1e-9;
        }
        CHECK(dominated);
        OrliczFunction phi = OrliczFunction::power(2.0);
        CHECK(luxemburg_norm(y, phi) <= luxemburg_norm(x, phi) + 1e-8);
    }
}
