#pragma once

#include "bt/ellipsoid.hpp"
#include "bt/policy.hpp"

namespace bt {

// Ellipsoid pricing for the deterministic two-bit setting. Keeps one
// uncertainty ellipsoid per side, explores with binary-search prices through
// the ellipsoid center, and commits to the midpoint once the seller's highest
// possible valuation drops below the buyer's lowest.
class EpbtPolicy : public Policy {
public:
    EpbtPolicy(int d, double A, double B, double eps);

    PolicyDecision step(const Vec& x, Rng& price_rng) override;
    void update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) override;
    double fallback_price(const Vec& x) const override;
    std::string name() const override { return "epbt"; }

    const Ellipsoid& seller_set() const { return e_s_; }
    const Ellipsoid& buyer_set() const { return e_b_; }
    long explore_rounds_seller() const { return explore_s_; }
    long explore_rounds_buyer() const { return explore_b_; }
    double eps() const { return eps_; }

private:
    Ellipsoid e_s_, e_b_;
    double eps_;
    long explore_s_ = 0;
    long explore_b_ = 0;
};

}  // namespace bt
