#pragma once

#include "bt/linalg.hpp"
#include "bt/rng.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace bt {

// Which feedback bits the policy will consume this round. The one-bit wrapper
// relies on this declaration to decide how to simulate the round.
enum class Need { SellerBit, BuyerBit, BothBits, NoLearning };

enum class Phase {
    ParamExplore,
    IntExplore,
    FExplore,
    DExplore,
    Commit,
    BudgetCollect,
    SimulatedExplore,
    Fallback,
};

const char* phase_name(Phase p);

struct PolicyDecision {
    double p = 0.0;
    double q = 0.0;
    Need need = Need::NoLearning;
    Phase phase = Phase::Commit;
    int k = 0;
    int k_prime = 0;
    bool clamped = false;  // posted price hit the [-P, P] clamp
};

// Access-checked feedback bits. Reading a bit that was not supplied is a hard
// error: it means a policy consumed information it did not declare via `need`.
class Feedback {
public:
    static Feedback none() { return Feedback(); }
    static Feedback seller_only(int s) {
        Feedback f;
        f.seller_ = s;
        return f;
    }
    static Feedback buyer_only(int b) {
        Feedback f;
        f.buyer_ = b;
        return f;
    }
    static Feedback both(int s, int b) {
        Feedback f;
        f.seller_ = s;
        f.buyer_ = b;
        return f;
    }
    static Feedback one_bit(int prod) {
        Feedback f;
        f.product_ = prod;
        return f;
    }

    bool has_seller() const { return seller_.has_value(); }
    bool has_buyer() const { return buyer_.has_value(); }
    bool has_product() const { return product_.has_value(); }

    int seller_bit() const {
        if (!seller_) throw std::logic_error("Feedback: seller bit consumed but not requested");
        return *seller_;
    }
    int buyer_bit() const {
        if (!buyer_) throw std::logic_error("Feedback: buyer bit consumed but not requested");
        return *buyer_;
    }
    int product_bit() const {
        if (!product_) throw std::logic_error("Feedback: product bit consumed but not requested");
        return *product_;
    }

private:
    std::optional<int> seller_;
    std::optional<int> buyer_;
    std::optional<int> product_;
};

// One leg of a simulated two-bit round: the context/price pair the bit was
// observed under. Used by the one-bit wrapper to feed BothBits rounds.
struct SplitHalf {
    Vec x;
    double p;
    int bit;  // observed accept bit for this side
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual PolicyDecision step(const Vec& x, Rng& price_rng) = 0;
    virtual void update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) = 0;

    // Both-bits round delivered as two one-bit legs (possibly with different
    // contexts and prices). Only policies that issue Need::BothBits implement
    // this; the default rejects.
    virtual void update_split(const PolicyDecision&, const SplitHalf&, const SplitHalf&) {
        throw std::logic_error("policy does not support split feedback");
    }

    // Strong-budget-balance greedy price from current estimates.
    virtual double fallback_price(const Vec& x) const = 0;

    virtual std::string name() const = 0;
};

}  // namespace bt
