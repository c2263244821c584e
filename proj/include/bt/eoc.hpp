#pragma once

#include "bt/estimators.hpp"
#include "bt/policy.hpp"
#include "bt/schedules.hpp"

namespace bt {

// Explore-or-commit learner for noisy two-bit bilateral trade. Rounds go to
// parameter estimation whenever ||x||_{V^-1} > mu, then to the integral log,
// then to per-increment cdf/demand sampling, and otherwise commit greedily to
// the best estimated increment pair.
class EocPolicy : public Policy {
public:
    EocPolicy(int d, double P, EocSchedule schedule);

    PolicyDecision step(const Vec& x, Rng& price_rng) override;
    void update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) override;
    void update_split(const PolicyDecision& decision, const SplitHalf& seller, const SplitHalf& buyer) override;
    double fallback_price(const Vec& x) const override;
    std::string name() const override { return "eoc"; }

    const EocSchedule& schedule() const { return sched_; }
    const EstimatorTables& tables() const { return tables_; }
    double f_hat(int k) const { return f_hat_[idx(k)]; }
    double d_hat(int k) const { return d_hat_[idx(k)]; }
    long clamp_count() const { return clamp_count_; }

private:
    std::size_t idx(int k) const { return static_cast<std::size_t>(k + sched_.K); }
    double clamp_price(double p, bool& clamped) const;
    PolicyDecision commit_decision(const Vec& x) const;

    double P_;
    EocSchedule sched_;
    EstimatorTables tables_;
    std::vector<double> f_hat_, d_hat_;
    std::vector<long> n_f_, n_d_;
    long clamp_count_ = 0;
};

}  // namespace bt
