#pragma once

#include "bt/linalg.hpp"

#include <vector>

namespace bt {

// Shared estimation state for the explore-or-commit style learners: ridge
// estimates of theta_s / theta_b from uniform-price rounds, and the one-pass
// integral estimates over the increment grid {k eps : k in [-K, K]}.
//
// The parameter estimator consumes the indicators 1{p <= s} (seller side) and
// 1{p <= b} (buyer side): with p uniform on [-P, P], 2P(1{p <= v} - 1/2) is an
// unbiased estimate of the valuation v. Note the seller indicator is the
// complement of the seller's accept bit.
//
// The two sides keep separate design matrices. Under two-bit feedback they are
// updated in lockstep and stay equal; the one-bit reduction feeds the sides
// from different rounds and they diverge.
class EstimatorTables {
public:
    EstimatorTables(int d, double P, double eps, int K);

    int d() const { return d_; }
    int K() const { return K_; }
    double eps() const { return eps_; }

    // ||x||_{V^-1} per side, and the max over sides (the explore trigger).
    double norm_vinv_s(const Vec& x) const;
    double norm_vinv_b(const Vec& x) const;
    double norm_vinv(const Vec& x) const;

    void par_update_seller(const Vec& x, bool price_below_s);
    void par_update_buyer(const Vec& x, bool price_below_b);
    void par_update_both(const Vec& x, bool price_below_s, bool price_below_b);
    long par_rounds() const { return par_rounds_; }

    const Vec& theta_s() const { return theta_s_; }
    const Vec& theta_b() const { return theta_b_; }
    double mean_s(const Vec& x) const { return dot(x, theta_s_); }
    double mean_b(const Vec& x) const { return dot(x, theta_b_); }

    // Integral-phase log. Bits are the accept indicators 1{s <= p} / 1{p <= b}.
    void int_add_seller(const Vec& x, double p, int seller_accept);
    void int_add_buyer(const Vec& x, double p, int buyer_accept);
    void int_add_both(const Vec& x, double p, int seller_accept, int buyer_accept);
    long int_rounds() const;  // complete rounds: min over sides

    // One pass over the log with the current theta estimates:
    //   J[k] = (2P/n_s) sum 1{s_l <= p_l <= k eps + x_l.theta_s}
    //   I[k] = (2P/n_b) sum 1{k eps + x_l.theta_b <= p_l <= b_l}
    // Throws if called before `required` rounds were collected.
    void finalize_integrals(long required);
    bool integrals_done() const { return integrals_done_; }

    double I_at(int k) const { return I_hat_[idx(k)]; }
    double J_at(int k) const { return J_hat_[idx(k)]; }

private:
    std::size_t idx(int k) const { return static_cast<std::size_t>(k + K_); }
    void resolve_theta_s();
    void resolve_theta_b();

    struct IntRow {
        Vec x;
        double p;
        int bit;
    };

    int d_;
    double P_;
    double eps_;
    int K_;

    Mat chol_s_, chol_b_;  // Cholesky factors of V = sum x x^T + I
    Vec sum_s_, sum_b_;
    Vec theta_s_, theta_b_;
    long par_rounds_ = 0;

    std::vector<IntRow> int_rows_s_, int_rows_b_;
    std::vector<double> I_hat_, J_hat_;
    bool integrals_done_ = false;
};

}  // namespace bt
