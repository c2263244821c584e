#include <doctest.h>

#include "bt/eoc.hpp"
#include "bt/epbt.hpp"
#include "bt/market.hpp"
#include "bt/onebit.hpp"
#include "bt/schedules.hpp"

#include <cmath>

using namespace bt;

namespace {

std::unique_ptr<EocPolicy> light_eoc(const LinearMarket& m, long T) {
    ScheduleOverrides ov;
    ov.eps = 0.5;
    ov.delta = 0.05;
    ov.t_int = 50;
    ov.t_fd = 2;
    ov.mu = 0.30;
    return std::make_unique<EocPolicy>(2, m.P(), eoc_params(T, 2, m.P(), m.A(), m.B(), ov));
}

LinearMarket active_market() {
    return LinearMarket({-0.55, -0.35}, {0.55, 0.45}, NoiseSpec::uniform(0.25), NoiseSpec::uniform(0.25),
                        1.0, 1.0);
}

// One environment round against ground truth; returns realized profit.
double env_round(OneBitWrapper& w, const LinearMarket& m, const Vec& x, Rng& noise, Rng& price) {
    const auto d = w.step(x, price);
    const auto [s, b] = m.sample_valuations(x, noise);
    const auto bits = feedback(s, b, d.p, d.q);
    w.update(d, x, Feedback::one_bit(bits.product));
    return profit(s, b, d.p, d.q);
}

}  // namespace

TEST_CASE("seller-bit rounds post (p, -P) and forward the product bit") {
    // EP-BT's first move is a seller exploration; the wrapper simulates it.
    auto inner = std::make_unique<EpbtPolicy>(2, 1.0, 1.0, 0.1);
    auto* inner_raw = inner.get();
    OneBitWrapper w(std::move(inner), 1.0, 1000, 100.0, /*prefunded=*/true);

    Rng price(1);
    const Vec x = {1.0, 0.0};
    const auto d = w.step(x, price);
    CHECK(d.phase == Phase::SimulatedExplore);
    CHECK(d.p == doctest::Approx(0.0));
    CHECK(d.q == doctest::Approx(-1.0));

    // Ground truth s = -0.4: the buyer at -P accepts, the product bit is the
    // seller's accept bit.
    const auto bits = feedback(-0.4, 0.9, d.p, d.q);
    CHECK(bits.product == 1);
    w.update(d, x, Feedback::one_bit(bits.product));
    CHECK(inner_raw->explore_rounds_seller() == 1);
    CHECK(w.ledger().spent == doctest::Approx(d.p - d.q));  // P + p on a trade
    CHECK(w.inner_bits_fed() == 1);
}

TEST_CASE("collection phase banks profit until the target") {
    const LinearMarket m = active_market();
    auto inner = std::make_unique<EpbtPolicy>(2, 1.0, 1.0, 0.01);
    OneBitWrapper w(std::move(inner), m.P(), 50000, 25.0);

    auto ctx = ContextStream::cyclic(2, 1.0, 1.0);
    Rng noise(2), price(3);
    long t = 0;
    while (w.ledger().state == BudgetLedger::State::Collecting && t < 50000) {
        const Vec x = ctx.next();
        const auto d = w.step(x, price);
        CHECK(d.phase == Phase::BudgetCollect);
        CHECK(d.q > d.p);  // weak budget balance while collecting
        const auto [s, b] = m.sample_valuations(x, noise);
        w.update(d, x, Feedback::one_bit(feedback(s, b, d.p, d.q).product));
        ++t;
    }
    CHECK(w.ledger().collected >= 25.0);
    CHECK(w.ledger().tau == t);
    CHECK(w.ledger().tau > 0);
}

TEST_CASE("both-bits rounds split into two legs fed together") {
    const LinearMarket m = active_market();
    auto inner = light_eoc(m, 4000);
    auto* raw = inner.get();
    OneBitWrapper w(std::move(inner), m.P(), 4000, 100.0, /*prefunded=*/true);

    Rng price(4);
    const Vec x1 = {1.0, 0.0}, x2 = {0.0, 1.0};

    const auto leg1 = w.step(x1, price);
    CHECK(leg1.phase == Phase::SimulatedExplore);
    CHECK(leg1.q == doctest::Approx(-m.P()));  // seller leg
    CHECK(raw->tables().par_rounds() == 0);    // nothing fed yet
    w.update(leg1, x1, Feedback::one_bit(1));

    const auto leg2 = w.step(x2, price);
    CHECK(leg2.phase == Phase::SimulatedExplore);
    CHECK(leg2.p == doctest::Approx(m.P()));  // buyer leg
    w.update(leg2, x2, Feedback::one_bit(0));
    CHECK(raw->tables().par_rounds() == 1);  // both legs delivered at once
    CHECK(w.inner_bits_fed() == 2);
    CHECK(w.simulated_rounds() == 2);
}

TEST_CASE("wrapper consumes at most one bit per environment round") {
    const LinearMarket m = active_market();
    auto inner = light_eoc(m, 6000);
    OneBitWrapper w(std::move(inner), m.P(), 6000, 40.0);
    auto ctx = ContextStream::mixed(2, 1.0, Rng(6));
    Rng noise(7), price(8);
    for (long t = 1; t <= 6000; ++t) {
        env_round(w, m, ctx.next(), noise, price);
        CHECK(w.inner_bits_fed() <= t);
    }
}

TEST_CASE("exhausted budget halts exploration and keeps the books nonnegative") {
    const LinearMarket m = active_market();
    auto inner = light_eoc(m, 3000);
    // Budget below the 2P reserve: the first simulated round is refused.
    OneBitWrapper w(std::move(inner), m.P(), 3000, 1.0);
    auto ctx = ContextStream::cyclic(2, 1.0, 1.0);
    Rng noise(9), price(10);

    double cum = 0.0;
    long t = 0;
    while (w.ledger().state == BudgetLedger::State::Collecting && t < 3000) {
        cum += env_round(w, m, ctx.next(), noise, price);
        ++t;
    }
    // Next learning attempt must halt instead of overspending.
    for (int i = 0; i < 50; ++i) cum += env_round(w, m, ctx.next(), noise, price);
    CHECK(w.ledger().state == BudgetLedger::State::FallbackHalted);
    CHECK(w.ledger().remaining() >= 0.0);
    CHECK(cum >= 0.0);

    // Halted rounds pass through strong-budget-balance prices.
    Rng price2(11);
    const auto d = w.step({1.0, 0.0}, price2);
    CHECK(d.phase == Phase::Fallback);
    CHECK(d.q == d.p);
}

TEST_CASE("global budget balance holds across full wrapped runs") {
    const LinearMarket m = active_market();
    for (int seed = 0; seed < 10; ++seed) {
        auto inner = light_eoc(m, 20000);
        OneBitWrapper w(std::move(inner), m.P(), 20000, 2.0 * m.P() * 320.0);
        auto ctx = ContextStream::mixed(2, 1.0, Rng(100 + seed));
        Rng noise(200 + seed), price(300 + seed);
        double cum = 0.0;
        for (long t = 0; t < 20000; ++t) cum += env_round(w, m, ctx.next(), noise, price);
        CHECK(cum >= 0.0);
    }
}
