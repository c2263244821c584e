#include <doctest.h>

#include "bt/estimators.hpp"
#include "bt/oracle.hpp"
#include "bt/rng.hpp"

#include <cmath>

using namespace bt;

TEST_CASE("single parameter update reproduces the hand-evaluated formula") {
    // x = e1, P = 1, price-below indicator set: V = diag(2, 1),
    // theta = 2 V^-1 (1 - 1/2) e1 = 0.5 e1.
    EstimatorTables t(2, 1.0, 0.1, 5);
    t.par_update_seller({1.0, 0.0}, true);
    CHECK(t.theta_s()[0] == doctest::Approx(0.5));
    CHECK(t.theta_s()[1] == doctest::Approx(0.0));
    CHECK(t.theta_b()[0] == 0.0);  // untouched side stays at the zero estimate
}

TEST_CASE("no updates leave the zero estimate") {
    EstimatorTables t(3, 1.0, 0.1, 4);
    CHECK(t.theta_s() == Vec{0.0, 0.0, 0.0});
    CHECK(t.theta_b() == Vec{0.0, 0.0, 0.0});
    CHECK(t.par_rounds() == 0);
}

TEST_CASE("norm under the inverse design matrix starts at the plain norm") {
    EstimatorTables t(2, 1.0, 0.1, 4);
    CHECK(t.norm_vinv({0.6, 0.8}) == doctest::Approx(1.0));
    t.par_update_both({1.0, 0.0}, true, false);
    CHECK(t.norm_vinv_s({1.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(t.norm_vinv_s({0.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("uniform-price responses are unbiased for the valuation") {
    // E[2P(1{p <= s} - 1/2)] = s for p uniform on [-P, P].
    Rng rng(15);
    const double s_true = 0.5, P = 1.0;
    double sum = 0.0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
        const double p = rng.uniform(-P, P);
        sum += 2.0 * P * ((p <= s_true ? 1.0 : 0.0) - 0.5);
    }
    CHECK(std::abs(sum / n - s_true) <= 4e-3);
}

TEST_CASE("ridge estimate converges on a fixed direction") {
    Rng rng(16);
    EstimatorTables t(2, 1.0, 0.1, 4);
    const double s_true = 0.5;
    for (int i = 0; i < 20000; ++i) {
        const double p = rng.uniform(-1.0, 1.0);
        t.par_update_both({1.0, 0.0}, p <= s_true, p <= -0.25);
    }
    CHECK(t.theta_s()[0] == doctest::Approx(0.5).epsilon(0.05));
    CHECK(t.theta_b()[0] == doctest::Approx(-0.25).epsilon(0.12));
    CHECK(t.par_rounds() == 20000);
}

TEST_CASE("integral estimates: empty and saturated cells") {
    EstimatorTables t(2, 1.0, 0.25, 4);
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(-1.0, 1.0);
        t.int_add_both({1.0, 0.0}, p, 1, 0);  // buyer always rejects
    }
    CHECK(t.int_rounds() == 200);
    CHECK_THROWS_AS(t.finalize_integrals(500), std::logic_error);
    t.finalize_integrals(200);
    for (int k = -4; k <= 4; ++k) CHECK(t.I_at(k) == 0.0);  // no accepted buyer rows
    // Seller accepted everything: J[k] counts p <= k*eps, so J[K] has full mass.
    CHECK(t.J_at(4) == doctest::Approx(2.0));
    CHECK(t.J_at(4) >= t.J_at(0));
}

TEST_CASE("top grid cell of I is empty by construction") {
    // k = K puts the threshold at K*eps >= 2P + 3*eps, beyond any price.
    EstimatorTables t(2, 1.0, 0.25, 11);  // K = ceil(2P/eps) + 3 = 11
    Rng rng(18);
    for (int i = 0; i < 500; ++i) {
        const double p = rng.uniform(-1.0, 1.0);
        t.int_add_both({1.0, 0.0}, p, 1, 1);
    }
    t.finalize_integrals(500);
    CHECK(t.I_at(11) == 0.0);
}

TEST_CASE("integral estimate converges to the closed form") {
    // Uniform{C=1} buyer noise, theta = 0, P = 1: I(0) = 0.25. CLT band
    // 4 * 2P * sqrt(p(1-p)/n) with p = 0.125 at n = 2e5 is ~0.006.
    const auto spec = NoiseSpec::uniform(1.0);
    Rng rng(19);
    EstimatorTables t(2, 1.0, 0.25, 11);
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
        const double p = rng.uniform(-1.0, 1.0);
        const double b = spec.sample(rng);
        const double s = spec.sample(rng);
        t.int_add_both({1.0, 0.0}, p, s <= p ? 1 : 0, p <= b ? 1 : 0);
    }
    t.finalize_integrals(n);
    CHECK(std::abs(t.I_at(0) - 0.25) <= 0.006);
    CHECK(std::abs(t.J_at(0) - 0.25) <= 0.006);
    CHECK(std::abs(t.I_at(2) - oracle::integral_I(spec, 0.5)) <= 0.006);
    CHECK(std::abs(t.J_at(-2) - oracle::integral_J(spec, -0.5)) <= 0.006);
}

TEST_CASE("split updates keep the two sides independent") {
    EstimatorTables t(2, 1.0, 0.25, 4);
    t.par_update_seller({1.0, 0.0}, true);
    t.par_update_buyer({0.0, 1.0}, true);
    CHECK(t.theta_s()[0] == doctest::Approx(0.5));
    CHECK(t.theta_s()[1] == 0.0);
    CHECK(t.theta_b()[0] == 0.0);
    CHECK(t.theta_b()[1] == doctest::Approx(0.5));
    CHECK(t.norm_vinv_s({0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(t.norm_vinv_b({1.0, 0.0}) == doctest::Approx(1.0));

    t.int_add_seller({1.0, 0.0}, 0.1, 1);
    CHECK(t.int_rounds() == 0);  // one-sided rows do not complete a round
    t.int_add_buyer({0.0, 1.0}, -0.1, 1);
    CHECK(t.int_rounds() == 1);
}
