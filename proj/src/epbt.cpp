#include "bt/epbt.hpp"

#include <stdexcept>

namespace bt {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::ParamExplore: return "ParamExplore";
        case Phase::IntExplore: return "IntExplore";
        case Phase::FExplore: return "FExplore";
        case Phase::DExplore: return "DExplore";
        case Phase::Commit: return "Commit";
        case Phase::BudgetCollect: return "BudgetCollect";
        case Phase::SimulatedExplore: return "SimulatedExplore";
        case Phase::Fallback: return "Fallback";
    }
    return "?";
}

EpbtPolicy::EpbtPolicy(int d, double A, double B, double eps)
    : e_s_(ball(d, A)), e_b_(ball(d, A)), eps_(eps) {
    (void)B;
    if (!(eps > 0.0)) throw std::invalid_argument("EpbtPolicy: eps must be > 0");
}

PolicyDecision EpbtPolicy::step(const Vec& x, Rng&) {
    const auto [s_lo, s_hi] = support_interval(e_s_, x);
    const auto [b_lo, b_hi] = support_interval(e_b_, x);

    PolicyDecision d;
    if (s_hi < b_lo) {
        d.p = 0.5 * (s_hi + b_lo);  // any price in between trades for sure
        d.need = Need::NoLearning;
        d.phase = Phase::Commit;
    } else if (s_hi - s_lo >= eps_) {
        d.p = 0.5 * (s_hi + s_lo);  // equals x.center(E_s): a central cut
        d.need = Need::SellerBit;
        d.phase = Phase::ParamExplore;
        d.k = 0;
    } else if (b_hi - b_lo >= eps_) {
        d.p = 0.5 * (b_hi + b_lo);
        d.need = Need::BuyerBit;
        d.phase = Phase::ParamExplore;
        d.k = 1;
    } else {
        d.p = 0.5 * (s_hi + b_lo);  // both sets are eps-thin: gap is negligible
        d.need = Need::NoLearning;
        d.phase = Phase::Fallback;
    }
    d.q = d.p;
    return d;
}

void EpbtPolicy::update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) {
    if (decision.need == Need::SellerBit) {
        // Acceptance means x.theta_s <= p = x.center, so keep the lower half.
        const auto keep = fb.seller_bit() ? HalfSpace::LowerHalf : HalfSpace::UpperHalf;
        e_s_ = central_cut(e_s_, x, keep);
        ++explore_s_;
    } else if (decision.need == Need::BuyerBit) {
        const auto keep = fb.buyer_bit() ? HalfSpace::UpperHalf : HalfSpace::LowerHalf;
        e_b_ = central_cut(e_b_, x, keep);
        ++explore_b_;
    }
}

double EpbtPolicy::fallback_price(const Vec& x) const {
    const auto [s_lo, s_hi] = support_interval(e_s_, x);
    const auto [b_lo, b_hi] = support_interval(e_b_, x);
    (void)s_lo;
    (void)b_hi;
    return 0.5 * (s_hi + b_lo);
}

}  // namespace bt
