#include "bt/onebit.hpp"

#include "bt/schedules.hpp"

#include <stdexcept>

namespace bt {

OneBitWrapper::OneBitWrapper(std::unique_ptr<Policy> inner, double P, long T, double budget_target,
                             bool prefunded)
    : inner_(std::move(inner)), P_(P), T_(T) {
    if (!inner_) throw std::invalid_argument("OneBitWrapper: inner policy required");
    if (!(budget_target >= 0.0)) throw std::invalid_argument("OneBitWrapper: budget must be >= 0");
    ledger_.target = budget_target;
    if (prefunded) {
        ledger_.collected = budget_target;
        ledger_.state = BudgetLedger::State::Exploring;
        ledger_.tau = 0;
    }
}

PolicyDecision OneBitWrapper::step(const Vec& x, Rng& price_rng) {
    ++t_;
    PolicyDecision d;

    if (ledger_.state == BudgetLedger::State::Collecting) {
        round_kind_ = RoundKind::Collect;
        const auto [p, q] = budget_collection_price(P_, T_, price_rng);
        d.p = p;
        d.q = q;
        d.phase = Phase::BudgetCollect;
        d.need = Need::NoLearning;
        return d;
    }

    if (ledger_.state == BudgetLedger::State::FallbackHalted) {
        round_kind_ = RoundKind::Halted;
        d.p = inner_->fallback_price(x);
        d.q = d.p;
        d.phase = Phase::Fallback;
        d.need = Need::NoLearning;
        return d;
    }

    if (split_pending_) {
        // Second leg of a BothBits round: fresh uniform price, buyer side.
        if (ledger_.remaining() < 2.0 * P_) {
            ledger_.state = BudgetLedger::State::FallbackHalted;
            split_pending_ = false;  // the buffered leg is dropped unfed
            round_kind_ = RoundKind::Halted;
            d.p = inner_->fallback_price(x);
            d.q = d.p;
            d.phase = Phase::Fallback;
            d.need = Need::NoLearning;
            return d;
        }
        round_kind_ = RoundKind::SplitBuyerLeg;
        d.p = P_;
        d.q = price_rng.uniform(-P_, P_);
        d.phase = Phase::SimulatedExplore;
        d.need = Need::NoLearning;
        return d;
    }

    inner_x_ = x;
    inner_decision_ = inner_->step(x, price_rng);

    if (inner_decision_.need == Need::NoLearning) {
        round_kind_ = RoundKind::PassThrough;
        ledger_.state = BudgetLedger::State::Committed;
        d = inner_decision_;
        d.q = d.p;  // strong budget balance on pass-through rounds
        return d;
    }

    if (ledger_.remaining() < 2.0 * P_) {
        ledger_.state = BudgetLedger::State::FallbackHalted;
        round_kind_ = RoundKind::Halted;
        d.p = inner_->fallback_price(x);
        d.q = d.p;
        d.phase = Phase::Fallback;
        d.need = Need::NoLearning;
        return d;
    }

    ledger_.state = BudgetLedger::State::Exploring;
    switch (inner_decision_.need) {
        case Need::SellerBit:
            round_kind_ = RoundKind::SimSeller;
            d.p = inner_decision_.p;
            d.q = -P_;  // buyer accepts for sure: the product bit is 1{s <= p}
            break;
        case Need::BuyerBit:
            round_kind_ = RoundKind::SimBuyer;
            d.p = P_;  // seller accepts for sure: the product bit is 1{q <= b}
            d.q = inner_decision_.p;
            break;
        case Need::BothBits:
            round_kind_ = RoundKind::SplitSellerLeg;
            d.p = inner_decision_.p;
            d.q = -P_;
            break;
        default:
            throw std::logic_error("OneBitWrapper: unexpected inner need");
    }
    d.phase = Phase::SimulatedExplore;
    d.need = Need::NoLearning;
    d.k = inner_decision_.k;
    d.k_prime = inner_decision_.k_prime;
    return d;
}

void OneBitWrapper::update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) {
    switch (round_kind_) {
        case RoundKind::Collect: {
            const int traded = fb.product_bit();
            ledger_.collected += traded ? (decision.q - decision.p) : 0.0;
            if (ledger_.collected >= ledger_.target) {
                ledger_.state = BudgetLedger::State::Exploring;
                ledger_.tau = t_;
            }
            break;
        }
        case RoundKind::PassThrough:
            inner_->update(inner_decision_, x, Feedback::none());
            break;
        case RoundKind::SimSeller: {
            const int bit_s = fb.product_bit();
            ledger_.spent += bit_s ? (decision.p - decision.q) : 0.0;  // q = -P
            ++simulated_rounds_;
            ++inner_bits_fed_;
            inner_->update(inner_decision_, inner_x_, Feedback::seller_only(bit_s));
            break;
        }
        case RoundKind::SimBuyer: {
            const int bit_b = fb.product_bit();
            ledger_.spent += bit_b ? (decision.p - decision.q) : 0.0;  // p = P
            ++simulated_rounds_;
            ++inner_bits_fed_;
            inner_->update(inner_decision_, inner_x_, Feedback::buyer_only(bit_b));
            break;
        }
        case RoundKind::SplitSellerLeg: {
            const int bit_s = fb.product_bit();
            ledger_.spent += bit_s ? (decision.p - decision.q) : 0.0;
            ++simulated_rounds_;
            pending_seller_leg_ = {inner_x_, decision.p, bit_s};
            split_pending_ = true;
            break;
        }
        case RoundKind::SplitBuyerLeg: {
            const int bit_b = fb.product_bit();
            ledger_.spent += bit_b ? (decision.p - decision.q) : 0.0;
            ++simulated_rounds_;
            split_pending_ = false;
            inner_bits_fed_ += 2;
            inner_->update_split(inner_decision_, pending_seller_leg_, SplitHalf{x, decision.q, bit_b});
            break;
        }
        case RoundKind::Halted:
            break;
    }
}

}  // namespace bt
