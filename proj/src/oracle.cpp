#include "bt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace bt {
namespace oracle {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Partial means via the cdf integral: G(u) = int_lo^u v f(v) dv = u F(u) - J(u),
// H(u) = int_u^hi v f(v) dv = mean - G(u). Both stay exact past the support.
double partial_mean_below(const NoiseSpec& n, double u) {
    if (u <= n.support_lo()) return 0.0;
    if (u >= n.support_hi()) return n.mean();
    return u * n.cdf(u) - n.cdf_integral(u);
}

double partial_mean_above(const NoiseSpec& n, double u) { return n.mean() - partial_mean_below(n, u); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                        double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

void require_continuous(const LinearMarket& m, const char* what) {
    if (!m.noise_s().is_continuous() || !m.noise_b().is_continuous())
        throw std::logic_error(std::string(what) + ": market must have continuous noise on both sides");
}

}  // namespace

double cdf_F(const NoiseSpec& noise, double u) { return noise.cdf(u); }
double demand_D(const NoiseSpec& noise, double u) { return noise.demand(u); }

double integral_J_extended(const NoiseSpec& noise_s, double delta) { return noise_s.cdf_integral(delta); }

double integral_I_extended(const NoiseSpec& noise_b, double delta) {
    // int_delta^hi D = (hi - delta) - (J(hi) - J(delta)) = mean - delta + J(delta),
    // and the linear continuation below the support falls out of the same identity.
    if (delta >= noise_b.support_hi()) return 0.0;
    return noise_b.mean() - delta + noise_b.cdf_integral(delta);
}

double integral_J(const NoiseSpec& noise_s, double delta) {
    return integral_J_extended(noise_s, clamp(delta, noise_s.support_lo(), noise_s.support_hi()));
}

double integral_I(const NoiseSpec& noise_b, double delta) {
    return integral_I_extended(noise_b, clamp(delta, noise_b.support_lo(), noise_b.support_hi()));
}

double integral_J_quadrature(const NoiseSpec& noise_s, double delta, double tol) {
    const double lo = noise_s.support_lo();
    const double d = clamp(delta, lo, noise_s.support_hi());
    return integrate([&](double u) { return noise_s.cdf(u); }, lo, d, tol);
}

double integral_I_quadrature(const NoiseSpec& noise_b, double delta, double tol) {
    const double hi = noise_b.support_hi();
    const double d = clamp(delta, noise_b.support_lo(), hi);
    return integrate([&](double u) { return noise_b.demand(u); }, d, hi, tol);
}

EgftTerms egft_terms(const LinearMarket& market, const Vec& x, double p) {
    EgftTerms t;
    t.delta_s = p - market.mean_s(x);
    t.delta_b = p - market.mean_b(x);
    t.F = market.noise_s().cdf(t.delta_s);
    t.D = market.noise_b().demand(t.delta_b);
    t.I = integral_I(market.noise_b(), t.delta_b);
    t.J = integral_J(market.noise_s(), t.delta_s);
    return t;
}

double egft(const LinearMarket& market, const Vec& x, double p) {
    require_continuous(market, "egft");
    const double ds = p - market.mean_s(x);
    const double db = p - market.mean_b(x);
    return integral_I_extended(market.noise_b(), db) * market.noise_s().cdf(ds) +
           integral_J_extended(market.noise_s(), ds) * market.noise_b().demand(db);
}

double egft_two_price(const LinearMarket& market, const Vec& x, double p, double q) {
    require_continuous(market, "egft_two_price");
    const double ms = market.mean_s(x), mb = market.mean_b(x);
    const double F = market.noise_s().cdf(p - ms);
    const double D = market.noise_b().demand(q - mb);
    const double eb_above = mb * D + partial_mean_above(market.noise_b(), q - mb);
    const double es_below = ms * F + partial_mean_below(market.noise_s(), p - ms);
    return eb_above * F - es_below * D;
}

McEstimate egft_mc(const LinearMarket& market, const Vec& x, double p, double q, long n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("egft_mc: n must be >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto [s, b] = market.sample_valuations(x, rng);
        const double g = gain_from_trade(s, b, p, q);
        sum += g;
        sumsq += g * g;
    }
    McEstimate est;
    est.mean = sum / static_cast<double>(n);
    est.degenerate = n < 2;
    if (est.degenerate) {
        est.std_error = 0.0;
    } else {
        const double var = std::max(0.0, (sumsq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

PricePoint optimal_price(const LinearMarket& market, const Vec& x, double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("optimal_price: grid_step must be > 0");
    require_continuous(market, "optimal_price");
    const double P = market.P();
    PricePoint best{-P, -1.0};
    const long steps = static_cast<long>(std::floor(2.0 * P / grid_step));
    for (long i = 0; i <= steps; ++i) {
        const double p = -P + static_cast<double>(i) * grid_step;
        const double v = egft(market, x, p);
        if (v > best.value) best = {p, v};
    }
    const double v_end = egft(market, x, P);
    if (v_end > best.value) best = {P, v_end};
    return best;
}

double deterministic_best(const LinearMarket& market, const Vec& x) {
    if (!market.noiseless()) throw std::logic_error("deterministic_best: market must be noiseless");
    return std::max(0.0, market.mean_b(x) - market.mean_s(x));
}

PricePoint optimal_increment(const NoiseSpec& noise_s, const NoiseSpec& noise_b, double Delta,
                             double grid_step, double delta_lo, double delta_hi) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("optimal_increment: grid_step must be > 0");
    PricePoint best{delta_lo, -std::numeric_limits<double>::infinity()};
    const long steps = static_cast<long>(std::floor((delta_hi - delta_lo) / grid_step));
    for (long i = 0; i <= steps; ++i) {
        const double d = delta_lo + static_cast<double>(i) * grid_step;
        const double v = integral_I_extended(noise_b, d - Delta) * noise_s.cdf(d) +
                         integral_J_extended(noise_s, d) * noise_b.demand(d - Delta);
        if (v > best.value) best = {d, v};
    }
    return best;
}

RegretOracle::RegretOracle(const LinearMarket& market, double grid_step)
    : market_(market), step_(grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("RegretOracle: grid_step must be > 0");
}

double RegretOracle::best_value_for_gap(double gap) {
    // Quantizing the gap adds at most ~5e-6 on top of the grid tolerance:
    // the optimal value is 1-Lipschitz in the gap.
    const long long key = std::llround(gap * 1e5);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double g = static_cast<double>(key) * 1e-5;
    // Trading increments live in (lo_s, g + hi_b); outside, the expected gain
    // is exactly 0 (a non-trading price), which also floors the optimum.
    const double lo = market_.noise_s().support_lo() - step_;
    const double hi = g + market_.noise_b().support_hi() + step_;
    double v = 0.0;
    if (hi > lo)
        v = std::max(0.0, optimal_increment(market_.noise_s(), market_.noise_b(), g, step_, lo, hi).value);
    cache_.emplace(key, v);
    return v;
}

double RegretOracle::best_value(const Vec& x) {
    return best_value_for_gap(market_.mean_b(x) - market_.mean_s(x));
}

}  // namespace oracle
}  // namespace bt
