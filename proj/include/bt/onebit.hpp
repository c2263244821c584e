#pragma once

#include "bt/policy.hpp"

#include <memory>

namespace bt {

struct BudgetLedger {
    enum class State { Collecting, Exploring, Committed, FallbackHalted };

    double target = 0.0;
    double collected = 0.0;  // profit banked during collection
    double spent = 0.0;      // losses of simulated rounds
    State state = State::Collecting;
    long tau = -1;  // last round of the collection phase

    double remaining() const { return collected - spent; }
};

// Reduction from a two-bit strong-budget-balance learner to one-bit feedback
// with global budget balance. Profit is first banked by posting (p, p + 2^-i)
// pairs; afterwards the inner policy's feedback is simulated one bit per
// round: a seller bit via (p, -P), a buyer bit via (P, p). BothBits rounds
// split into two consecutive simulated rounds and the inner policy is fed once
// both legs exist. If the bank cannot cover another simulated round the
// wrapper halts exploration and posts the inner policy's greedy strong-budget-
// balance price for the rest of the horizon.
class OneBitWrapper : public Policy {
public:
    // `prefunded` starts the ledger at the target with no collection phase
    // (useful when an external budget is granted, and for tests).
    OneBitWrapper(std::unique_ptr<Policy> inner, double P, long T, double budget_target,
                  bool prefunded = false);

    PolicyDecision step(const Vec& x, Rng& price_rng) override;
    void update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) override;
    double fallback_price(const Vec& x) const override { return inner_->fallback_price(x); }
    std::string name() const override { return "onebit-" + inner_->name(); }

    const BudgetLedger& ledger() const { return ledger_; }
    Policy& inner() { return *inner_; }
    long simulated_rounds() const { return simulated_rounds_; }
    long inner_bits_fed() const { return inner_bits_fed_; }

private:
    enum class RoundKind { Collect, PassThrough, SimSeller, SimBuyer, SplitSellerLeg, SplitBuyerLeg, Halted };

    std::unique_ptr<Policy> inner_;
    double P_;
    long T_;
    BudgetLedger ledger_;
    long t_ = 0;

    RoundKind round_kind_ = RoundKind::Collect;
    PolicyDecision inner_decision_;  // pending inner round being simulated
    Vec inner_x_;
    SplitHalf pending_seller_leg_;
    bool split_pending_ = false;

    long simulated_rounds_ = 0;
    long inner_bits_fed_ = 0;
};

}  // namespace bt
