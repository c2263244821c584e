#pragma once

#include "bt/market.hpp"

#include <unordered_map>

namespace bt {
namespace oracle {

// F and D of a noise spec at u (exact piecewise closed forms).
double cdf_F(const NoiseSpec& noise, double u);
double demand_D(const NoiseSpec& noise, double u);

// I(delta) = int_delta^hi D(u) du and J(delta) = int_lo^delta F(u) du with
// delta clamped to the support. The unclamped extensions (D = 1 below the
// support, F = 1 above) are what the expected-gain formula needs; they are
// exposed separately because the clamped values are the natural diagnostics.
double integral_I(const NoiseSpec& noise_b, double delta);
double integral_J(const NoiseSpec& noise_s, double delta);
double integral_I_extended(const NoiseSpec& noise_b, double delta);
double integral_J_extended(const NoiseSpec& noise_s, double delta);

// Adaptive-Simpson evaluation of the same integrals straight from the cdf /
// demand, absolute tolerance `tol`. Fallback path for specs without closed
// forms; the closed forms above are checked against it.
double integral_I_quadrature(const NoiseSpec& noise_b, double delta, double tol = 1e-10);
double integral_J_quadrature(const NoiseSpec& noise_s, double delta, double tol = 1e-10);

struct EgftTerms {
    double delta_s;  // p - x.theta_s
    double delta_b;  // p - x.theta_b
    double F;        // F_s(delta_s)
    double D;        // D_b(delta_b)
    double I;        // clamped I(delta_b)
    double J;        // clamped J(delta_s)

    double gap() const { return delta_s - delta_b; }  // x.(theta_b - theta_s)
};

EgftTerms egft_terms(const LinearMarket& market, const Vec& x, double p);

// Expected gain from trade at equal posted prices (p, p):
//   egft = I(delta_b) F_s(delta_s) + J(delta_s) D_b(delta_b).
// Requires continuous noise on both sides.
double egft(const LinearMarket& market, const Vec& x, double p);

// Expected gain from trade at independent prices p (seller) and q (buyer).
double egft_two_price(const LinearMarket& market, const Vec& x, double p, double q);

struct McEstimate {
    double mean;
    double std_error;
    bool degenerate;  // n < 2, std_error reported as 0
};

McEstimate egft_mc(const LinearMarket& market, const Vec& x, double p, double q, long n, Rng& rng);

struct PricePoint {
    double price;
    double value;
};

// Exhaustive search over the price grid {-P, -P+step, ..., P}. The value is
// within 2*L*P*step of the true maximum.
PricePoint optimal_price(const LinearMarket& market, const Vec& x, double grid_step);

// Best achievable gain in the noiseless market: max(0, x.(theta_b - theta_s)).
double deterministic_best(const LinearMarket& market, const Vec& x);

// Grid search over seller increments delta for fixed mean gap `Delta`:
//   argmax_delta I_b(delta - Delta) F_s(delta) + J_s(delta) D_b(delta - Delta).
PricePoint optimal_increment(const NoiseSpec& noise_s, const NoiseSpec& noise_b, double Delta,
                             double grid_step, double delta_lo, double delta_hi);

// Per-round regret scoring. The optimum depends on the context only through
// the mean-valuation gap, so values are memoized per quantized gap.
class RegretOracle {
public:
    RegretOracle(const LinearMarket& market, double grid_step);

    double best_value(const Vec& x);
    double best_value_for_gap(double gap);

private:
    const LinearMarket& market_;
    double step_;
    std::unordered_map<long long, double> cache_;
};

}  // namespace oracle
}  // namespace bt
