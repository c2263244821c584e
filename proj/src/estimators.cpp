#include "bt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bt {

EstimatorTables::EstimatorTables(int d, double P, double eps, int K)
    : d_(d),
      P_(P),
      eps_(eps),
      K_(K),
      chol_s_(Mat::identity(d)),
      chol_b_(Mat::identity(d)),
      sum_s_(static_cast<std::size_t>(d), 0.0),
      sum_b_(static_cast<std::size_t>(d), 0.0),
      theta_s_(static_cast<std::size_t>(d), 0.0),
      theta_b_(static_cast<std::size_t>(d), 0.0),
      I_hat_(static_cast<std::size_t>(2 * K + 1), 0.0),
      J_hat_(static_cast<std::size_t>(2 * K + 1), 0.0) {
    if (d < 1) throw std::invalid_argument("EstimatorTables: dimension must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("EstimatorTables: eps must be > 0");
}

double EstimatorTables::norm_vinv_s(const Vec& x) const {
    const Vec z = forward_solve(chol_s_, x);
    return std::sqrt(dot(z, z));
}

double EstimatorTables::norm_vinv_b(const Vec& x) const {
    const Vec z = forward_solve(chol_b_, x);
    return std::sqrt(dot(z, z));
}

double EstimatorTables::norm_vinv(const Vec& x) const {
    return std::max(norm_vinv_s(x), norm_vinv_b(x));
}

void EstimatorTables::resolve_theta_s() {
    Vec rhs = sum_s_;
    for (auto& v : rhs) v *= 2.0 * P_;
    theta_s_ = chol_solve(chol_s_, rhs);
}

void EstimatorTables::resolve_theta_b() {
    Vec rhs = sum_b_;
    for (auto& v : rhs) v *= 2.0 * P_;
    theta_b_ = chol_solve(chol_b_, rhs);
}

void EstimatorTables::par_update_seller(const Vec& x, bool price_below_s) {
    chol_update(chol_s_, x);
    const double w = (price_below_s ? 1.0 : 0.0) - 0.5;
    for (std::size_t i = 0; i < x.size(); ++i) sum_s_[i] += w * x[i];
    resolve_theta_s();
    ++par_rounds_;
}

void EstimatorTables::par_update_buyer(const Vec& x, bool price_below_b) {
    chol_update(chol_b_, x);
    const double w = (price_below_b ? 1.0 : 0.0) - 0.5;
    for (std::size_t i = 0; i < x.size(); ++i) sum_b_[i] += w * x[i];
    resolve_theta_b();
}

void EstimatorTables::par_update_both(const Vec& x, bool price_below_s, bool price_below_b) {
    par_update_seller(x, price_below_s);
    par_update_buyer(x, price_below_b);
}

void EstimatorTables::int_add_seller(const Vec& x, double p, int seller_accept) {
    int_rows_s_.push_back({x, p, seller_accept});
}

void EstimatorTables::int_add_buyer(const Vec& x, double p, int buyer_accept) {
    int_rows_b_.push_back({x, p, buyer_accept});
}

void EstimatorTables::int_add_both(const Vec& x, double p, int seller_accept, int buyer_accept) {
    int_add_seller(x, p, seller_accept);
    int_add_buyer(x, p, buyer_accept);
}

long EstimatorTables::int_rounds() const {
    return static_cast<long>(std::min(int_rows_s_.size(), int_rows_b_.size()));
}

void EstimatorTables::finalize_integrals(long required) {
    if (int_rounds() < required)
        throw std::logic_error("finalize_integrals: called before the integral log is complete");

    const int n = 2 * K_ + 1;
    // J[k] counts rows with s_l <= p_l and p_l - x_l.theta_s <= k eps; each
    // accepted row contributes to every k at or above its threshold, so build
    // a histogram of thresholds and suffix-sum it (prefix for I).
    std::vector<long> hist(static_cast<std::size_t>(n + 1), 0);
    for (const auto& r : int_rows_s_) {
        if (!r.bit) continue;
        const double t = (r.p - dot(r.x, theta_s_)) / eps_;
        const long kmin = static_cast<long>(std::ceil(t));
        if (kmin > K_) continue;
        hist[static_cast<std::size_t>(std::max<long>(kmin, -K_) + K_)]++;
    }
    long acc = 0;
    const double scale_s = int_rows_s_.empty() ? 0.0 : 2.0 * P_ / static_cast<double>(int_rows_s_.size());
    for (int k = 0; k < n; ++k) {
        acc += hist[static_cast<std::size_t>(k)];
        J_hat_[static_cast<std::size_t>(k)] = scale_s * static_cast<double>(acc);
    }

    std::fill(hist.begin(), hist.end(), 0L);
    for (const auto& r : int_rows_b_) {
        if (!r.bit) continue;
        const double t = (r.p - dot(r.x, theta_b_)) / eps_;
        const long kmax = static_cast<long>(std::floor(t));
        if (kmax < -K_) continue;
        hist[static_cast<std::size_t>(std::min<long>(kmax, K_) + K_)]++;
    }
    acc = 0;
    const double scale_b = int_rows_b_.empty() ? 0.0 : 2.0 * P_ / static_cast<double>(int_rows_b_.size());
    for (int k = n - 1; k >= 0; --k) {
        acc += hist[static_cast<std::size_t>(k)];
        I_hat_[static_cast<std::size_t>(k)] = scale_b * static_cast<double>(acc);
    }

    int_rows_s_.clear();
    int_rows_s_.shrink_to_fit();
    int_rows_b_.clear();
    int_rows_b_.shrink_to_fit();
    integrals_done_ = true;
}

}  // namespace bt
