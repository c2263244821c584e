#include "bt/verify.hpp"

#include "bt/config.hpp"
#include "bt/ellipsoid.hpp"
#include "bt/oracle.hpp"
#include "bt/runner.hpp"
#include "bt/schedules.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bt {

namespace {

int checks_run = 0;
int checks_failed = 0;

void check(const std::string& label, double measured, const char* rel, double required) {
    bool ok = false;
    if (std::string(rel) == "<=") ok = measured <= required;
    else if (std::string(rel) == ">=") ok = measured >= required;
    else throw std::logic_error("verify: bad relation");
    ++checks_run;
    if (!ok) ++checks_failed;
    std::printf("%-58s measured % .6g  required %s % .6g  [%s]\n", label.c_str(), measured, rel, required,
                ok ? "ok" : "FAIL");
}

// Random market over the two centered noise families; used by oracle-mc.
LinearMarket random_market(Rng& rng, int d) {
    Vec ts(static_cast<std::size_t>(d)), tb(static_cast<std::size_t>(d));
    const double A = 0.5 + rng.uniform01();
    for (auto& v : ts) v = rng.uniform(-1.0, 1.0);
    for (auto& v : tb) v = rng.uniform(-1.0, 1.0);
    const double fs = A * rng.uniform01() / std::max(norm2(ts), 1e-9);
    const double fb = A * rng.uniform01() / std::max(norm2(tb), 1e-9);
    for (auto& v : ts) v *= fs;
    for (auto& v : tb) v *= fb;
    const double Cs = 0.2 + rng.uniform01();
    const double Cb = 0.2 + rng.uniform01();
    NoiseSpec ns = rng.uniform01() < 0.5 ? NoiseSpec::uniform(Cs) : NoiseSpec::triangular(Cs);
    NoiseSpec nb = rng.uniform01() < 0.5 ? NoiseSpec::uniform(Cb) : NoiseSpec::triangular(Cb);
    return LinearMarket(std::move(ts), std::move(tb), std::move(ns), std::move(nb), A, 1.0);
}

bool verify_oracle_mc(long triples, long n) {
    Rng rng(20240517);
    double worst = 0.0;
    for (long i = 0; i < triples; ++i) {
        const LinearMarket m = random_market(rng, 2);
        Vec x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double nx = norm2(x);
        if (nx > 1.0)
            for (auto& v : x) v /= nx;
        const double p = rng.uniform(-m.P(), m.P());
        const double exact = oracle::egft(m, x, p);
        const auto mc = oracle::egft_mc(m, x, p, p, n, rng);
        const double dev = std::abs(exact - mc.mean) / std::max(mc.std_error, 1e-12);
        worst = std::max(worst, dev);
    }
    check("oracle-mc: max |closed form - MC mean| / std_error", worst, "<=", 4.0);
    return checks_failed == 0;
}

bool verify_ellipsoid() {
    Rng rng(7);
    double worst_shrink = -1e9;
    long containment_failures = 0;
    for (int d : {2, 5, 10}) {
        for (int it = 0; it < 1000; ++it) {
            Ellipsoid e = ball(d, 1.0 + rng.uniform01());
            // A few warm-up cuts so the shapes tested are not all spheres.
            for (int w = 0; w < 3; ++w) {
                Vec a(static_cast<std::size_t>(d));
                for (auto& v : a) v = rng.normal();
                e = central_cut(e, a, HalfSpace::LowerHalf);
            }
            Vec a(static_cast<std::size_t>(d));
            for (auto& v : a) v = rng.normal();
            const auto keep = rng.uniform01() < 0.5 ? HalfSpace::LowerHalf : HalfSpace::UpperHalf;
            const Ellipsoid cut = central_cut(e, a, keep);
            worst_shrink =
                std::max(worst_shrink, log_volume(cut) - log_volume(e) + 1.0 / (2.0 * d));

            // A kept interior point must stay inside the rounded half-ellipsoid.
            for (int r = 0; r < 8; ++r) {
                Vec u(static_cast<std::size_t>(d));
                for (auto& v : u) v = rng.normal();
                const double n = norm2(u);
                const double scale = std::pow(rng.uniform01(), 1.0 / d) / n;
                Vec theta = e.center;
                const Mat L = cholesky_or_throw(e.shape, "verify");
                for (int i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j <= i; ++j) acc += L(i, j) * u[static_cast<std::size_t>(j)] * scale;
                    theta[static_cast<std::size_t>(i)] += acc;
                }
                double side = 0.0;
                for (int i = 0; i < d; ++i)
                    side += a[static_cast<std::size_t>(i)] *
                            (theta[static_cast<std::size_t>(i)] - e.center[static_cast<std::size_t>(i)]);
                const bool kept = keep == HalfSpace::LowerHalf ? side <= 0.0 : side >= 0.0;
                if (kept && !contains(cut, theta)) ++containment_failures;
            }
        }
    }
    check("ellipsoid: max log-volume shrink violation", worst_shrink, "<=", 1e-9);
    check("ellipsoid: containment failures over sampled kept points",
          static_cast<double>(containment_failures), "<=", 0.0);
    return checks_failed == 0;
}

bool verify_lemma_profit(long draws) {
    const double s = 0.25, b = 0.75, P = 1.0;
    const long T = 10000;
    Rng rng(99);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < draws; ++i) {
        const auto [p, q] = budget_collection_price(P, T, rng);
        const double pr = profit(s, b, p, q);
        sum += pr;
        sumsq += pr * pr;
    }
    const double mean = sum / static_cast<double>(draws);
    const double var = (sumsq - sum * sum / static_cast<double>(draws)) / static_cast<double>(draws - 1);
    const double se = std::sqrt(var / static_cast<double>(draws));
    const double bound = (b - s) * (b - s) / (8.0 * P * std::log(static_cast<double>(T))) -
                         2.0 / static_cast<double>(T);
    check("lemma-profit: empirical mean - 4 se", mean - 4.0 * se, ">=", bound);
    return checks_failed == 0;
}

bool verify_appendix_e() {
    const auto fs = NoiseSpec::piecewise_uniform(
        {{0.0, 0.001}, {2.0, 2.001}, {6.0, 6.001}}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, false);
    const auto fb = NoiseSpec::piecewise_uniform({{0.01, 0.011}, {3.0, 3.001}, {20.0, 20.001}},
                                                 {0.85, 0.11, 0.04}, false);
    // The optimum for each gap is a flat interval of increments; the reference
    // increments are representative points of it, so they are checked by value:
    // the expected gain they attain must equal the grid-search maximum.
    const double expected[3][2] = {{0.0, 10.0}, {1.0, 2.5}, {1.5, 0.01}};
    for (const auto& row : expected) {
        const auto best = oracle::optimal_increment(fs, fb, row[0], 1e-4, -1.0, 25.0);
        const double at_ref = oracle::integral_I_extended(fb, row[1] - row[0]) * fs.cdf(row[1]) +
                              oracle::integral_J_extended(fs, row[1]) * fb.demand(row[1] - row[0]);
        char label[96];
        std::snprintf(label, sizeof(label), "appendix-e: grid max - value(increment %g) at gap %.1f",
                      row[1], row[0]);
        check(label, best.value - at_ref, "<=", 1e-3);
    }
    return checks_failed == 0;
}

bool verify_budget_balance(long runs) {
    ExperimentConfig cfg = parse_config_text(
        "horizon = 40000\n"
        "dim = 2\n"
        "algorithm = onebit-eoc\n"
        "seed = 404\n"
        "market.A = 0.5\n"
        "market.B = 1.0\n"
        "market.theta_s = -0.28 -0.17\n"
        "market.theta_b = 0.31 0.18\n"
        "market.noise_s = uniform\n"
        "market.noise_s.C = 0.25\n"
        "market.noise_b = uniform\n"
        "market.noise_b.C = 0.25\n"
        "context.kind = sphere\n"
        "schedule.eps = 0.35\n"
        "schedule.delta = 0.01\n"
        "schedule.t_int = 300\n"
        "schedule.t_fd = 6\n"
        "schedule.t_e = 900\n"
        "trace = false\n");
    double min_profit = std::numeric_limits<double>::infinity();
    for (long rep = 0; rep < runs; ++rep) {
        const RepResult r = run_replication(cfg, rep, "");
        min_profit = std::min(min_profit, r.final_profit);
    }
    check("budget-balance: min final profit over runs", min_profit, ">=", 0.0);
    return checks_failed == 0;
}

}  // namespace

bool verify(const std::string& sub) {
    checks_run = 0;
    checks_failed = 0;
    bool ok;
    if (sub == "oracle-mc") ok = verify_oracle_mc(200, 1000000);
    else if (sub == "ellipsoid") ok = verify_ellipsoid();
    else if (sub == "lemma-profit") ok = verify_lemma_profit(1000000);
    else if (sub == "appendix-e") ok = verify_appendix_e();
    else if (sub == "budget-balance") ok = verify_budget_balance(100);
    else throw std::invalid_argument("verify: unknown subcommand '" + sub + "'");
    std::printf("%s: %d checks, %d failed\n", sub.c_str(), checks_run, checks_failed);
    return ok;
}

}  // namespace bt
