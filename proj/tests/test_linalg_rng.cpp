#include <doctest.h>

#include "bt/linalg.hpp"
#include "bt/rng.hpp"

#include <cmath>

using namespace bt;

TEST_CASE("cholesky factors and solves a hand-built SPD system") {
    Mat m(2);
    m(0, 0) = 4.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 3.0;
    Mat L;
    REQUIRE(cholesky(m, L));
    // L = [[2, 0], [0.5, sqrt(2.75)]]
    CHECK(L(0, 0) == doctest::Approx(2.0));
    CHECK(L(1, 0) == doctest::Approx(0.5));
    CHECK(L(1, 1) == doctest::Approx(std::sqrt(2.75)));

    const Vec x = chol_solve(L, {5.0, 4.0});
    CHECK(m(0, 0) * x[0] + m(0, 1) * x[1] == doctest::Approx(5.0));
    CHECK(m(1, 0) * x[0] + m(1, 1) * x[1] == doctest::Approx(4.0));
    CHECK(chol_logdet(L) == doctest::Approx(std::log(4.0 * 3.0 - 1.0)));
}

TEST_CASE("cholesky rejects indefinite matrices") {
    Mat m(2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    m(1, 0) = 2.0;
    m(1, 1) = 1.0;
    Mat L;
    CHECK_FALSE(cholesky(m, L));
}

TEST_CASE("rank-1 cholesky update matches a from-scratch factorization") {
    Rng rng(123);
    const int d = 5;
    Mat v = Mat::identity(d);
    Mat L;
    REQUIRE(cholesky(v, L));
    for (int it = 0; it < 50; ++it) {
        Vec x(d);
        for (auto& e : x) e = rng.uniform(-1.0, 1.0);
        add_outer(v, x);
        chol_update(L, x);
    }
    Mat L2;
    REQUIRE(cholesky(v, L2));
    Vec rhs(d, 1.0);
    const Vec a = chol_solve(L, rhs);
    const Vec b = chol_solve(L2, rhs);
    for (int i = 0; i < d; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("rng streams are deterministic and name-separated") {
    Rng a = Rng::stream(42, "environment-noise", 3);
    Rng b = Rng::stream(42, "environment-noise", 3);
    Rng c = Rng::stream(42, "environment-prices-for-policies", 3);
    bool all_equal = true, any_equal_cross = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && va == vb;
        any_equal_cross = any_equal_cross || va == vc;
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_cross);
}

TEST_CASE("uniform01 mean and bounds") {
    Rng rng(7);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int covers its range uniformly") {
    Rng rng(9);
    long counts[7] = {0};
    for (int i = 0; i < 70000; ++i) counts[rng.uniform_int(7)]++;
    for (long c : counts) CHECK(std::abs(c - 10000) < 500);
}
