#include <doctest.h>

#include "bt/rng.hpp"
#include "bt/schedules.hpp"

#include <cmath>
#include <stdexcept>

using namespace bt;

TEST_CASE("explore-or-commit schedule at T = 1e4") {
    const long T = 10000;
    const int d = 2;
    const double P = 1.0, A = 1.0, B = 1.0;
    const auto s = eoc_params(T, d, P, A, B);

    CHECK(s.eps == doctest::Approx(0.1742137).epsilon(1e-5));  // (log T / T)^{1/4}
    CHECK(s.delta == doctest::Approx(1.0 / (1e4 * (74.0 + 32.0 / s.eps))));
    const double log1d = std::log(1.0 / s.delta);
    CHECK(s.mu == doctest::Approx(s.eps / (std::sqrt(2.0 * std::log((1.0 + 1e4) / s.delta)) + 1.0)));
    CHECK(s.t_int == static_cast<long>(std::ceil(8.0 * log1d / (s.eps * s.eps)) + 0.1));
    CHECK(s.t_fd == static_cast<long>(std::ceil(2.0 * log1d / (s.eps * s.eps)) + 0.1));
    CHECK(s.K == static_cast<int>(std::ceil(2.0 / s.eps)) + 3);
    CHECK(s.degenerate);  // theorem constants do not fit T = 1e4
}

TEST_CASE("scouting schedule at T = 1e4, d = 2") {
    const auto s = sbip_params(10000, 2, 1.0, 1.0, 1.0, 2.0);
    CHECK(s.eps == doctest::Approx(0.3237544).epsilon(1e-5));  // (d^2 log^2 T / T)^{1/3}
    CHECK(s.delta == doctest::Approx(1.0 / ((38.0 + 16.0 / s.eps) * 10001.0 * 10001.0)));
    CHECK(s.eps_tilde == doctest::Approx((12.0 * 2.0 + 7.0) * s.eps));
    CHECK(s.K == static_cast<int>(std::ceil(2.0 / s.eps)) + 3);
}

TEST_CASE("overriding eps recomputes everything downstream") {
    ScheduleOverrides ov;
    ov.eps = 0.25;
    const auto s = eoc_params(10000, 2, 1.0, 1.0, 1.0, ov);
    CHECK(s.eps == 0.25);
    CHECK(s.delta == doctest::Approx(1.0 / (1e4 * (74.0 + 32.0 / 0.25))));
    CHECK(s.K == static_cast<int>(std::ceil(2.0 / 0.25)) + 3);
    const double log1d = std::log(1.0 / s.delta);
    CHECK(s.t_int == static_cast<long>(std::ceil(8.0 * log1d / 0.0625) + 0.1));

    ScheduleOverrides scale;
    scale.t_fd_scale = 0.5;
    const auto base = eoc_params(10000, 2, 1.0, 1.0, 1.0);
    const auto scaled = eoc_params(10000, 2, 1.0, 1.0, 1.0, scale);
    CHECK(scaled.t_fd == static_cast<long>(std::ceil(0.5 * 2.0 * std::log(1.0 / base.delta) /
                                                     (base.eps * base.eps)) +
                                           0.1));
}

TEST_CASE("absolute overrides pin single constants") {
    ScheduleOverrides ov;
    ov.t_int = 123;
    ov.delta = 0.01;
    const auto s = sbip_params(50000, 2, 0.5, 0.5, 1.0, 2.0, ov);
    CHECK(s.t_int == 123);
    CHECK(s.delta == 0.01);
    CHECK(s.mu == doctest::Approx(s.eps / (0.5 * std::sqrt(2.0 * std::log((1.0 + 50000.0) / 0.01)) + 0.5)));
}

TEST_CASE("ellipsoid pricing threshold") {
    CHECK(epbt_eps(10000, 2, 1.0, 1.0) == doctest::Approx(4e-4));
    CHECK(epbt_eps(100000, 2, 1.0, 1.0) == doctest::Approx(4e-5));
}

TEST_CASE("budget formula") {
    const long T = 10000;
    const double logT = std::log(1e4);
    CHECK(compute_budget(1.0, 1.0, T, 0.0) == doctest::Approx(2048.0 * logT * logT * logT));
    CHECK(compute_budget(0.5, 1.0, T, 0.0) == doctest::Approx(4.0 * 2048.0 * logT * logT * logT));
    CHECK(compute_budget(1.0, 1.0, T, 1e9) == doctest::Approx(2e9));  // max branch
    CHECK_THROWS_AS(compute_budget(0.0, 1.0, T, 0.0), std::invalid_argument);
}

TEST_CASE("budget collection prices") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto [p, q] = budget_collection_price(1.0, 2, rng);
        CHECK(q - p == doctest::Approx(1.0));  // single exponent at T = 2
        CHECK(p >= -1.0);
        CHECK(p <= 1.0);
    }
    const long T = 10000;
    const int n_exp = static_cast<int>(std::ceil(std::log2(static_cast<double>(T))));
    const double min_gap = std::pow(2.0, -(n_exp - 1));
    bool in_range = true;
    for (int i = 0; i < 100000; ++i) {
        const auto [p, q] = budget_collection_price(1.0, T, rng);
        in_range = in_range && q - p >= min_gap - 1e-15 && q - p <= 1.0 + 1e-15;
    }
    CHECK(in_range);
}

TEST_CASE("expected collection profit clears the bound at the reference pair") {
    // s = 0.25, b = 0.75, P = 1, T = 1e4; bound (b-s)^2/(8 P log T) - 2/T.
    Rng rng(17);
    const long n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto [p, q] = budget_collection_price(1.0, 10000, rng);
        const double pr = (0.25 <= p && q <= 0.75) ? q - p : 0.0;
        sum += pr;
        sumsq += pr * pr;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq - sum * sum / n) / (n - 1.0) / n);
    const double bound = 0.25 / (8.0 * std::log(1e4)) - 2e-4;
    CHECK(mean - 4.0 * se >= bound);
}
