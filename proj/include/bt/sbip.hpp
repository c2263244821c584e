#pragma once

#include "bt/estimators.hpp"
#include "bt/policy.hpp"
#include "bt/schedules.hpp"

namespace bt {

// Scouting bandit with information pooling. Parameter and integral phases are
// identical to explore-or-commit; afterwards a successive-elimination scheme
// runs over the candidate increment pairs, pooling the per-increment feedback
// counts across all contexts.
class SbipPolicy : public Policy {
public:
    SbipPolicy(int d, double P, SbipSchedule schedule);

    PolicyDecision step(const Vec& x, Rng& price_rng) override;
    void update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) override;
    double fallback_price(const Vec& x) const override;
    std::string name() const override { return "sbip"; }

    const SbipSchedule& schedule() const { return sched_; }
    const EstimatorTables& tables() const { return tables_; }
    long count_s(int k) const { return n_s_[idx(k)]; }
    long count_b(int k) const { return n_b_[idx(k)]; }
    double f_hat(int k) const { return f_hat_[idx(k)]; }
    double d_hat(int k) const { return d_hat_[idx(k)]; }
    long clamp_count() const { return clamp_count_; }
    long se_rounds_seller(int k) const { return t_se_s_[idx(k)]; }
    long se_rounds_buyer(int k) const { return t_se_b_[idx(k)]; }

    // Confidence radius sqrt(2 log(1/delta) / n), +inf at n = 0.
    double beta(long n) const;
    double ucb(int k, int k_prime) const;
    double lcb(int k, int k_prime) const;

    // Candidate pairs (k, k + m) surviving elimination for this context.
    // Exposed for the active-set soundness checks.
    std::vector<std::pair<int, int>> active_set(const Vec& x) const;

private:
    std::size_t idx(int k) const { return static_cast<std::size_t>(k + sched_.K); }
    double mid(int k, int k_prime) const;
    double clamp_price(double p, bool& clamped) const;

    double P_;
    SbipSchedule sched_;
    double log1d_;
    EstimatorTables tables_;
    std::vector<double> f_hat_, d_hat_;
    std::vector<long> n_s_, n_b_;
    std::vector<long> t_se_s_, t_se_b_;  // selection diagnostics per side
    long clamp_count_ = 0;
};

}  // namespace bt
