#include "bt/eoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bt {

EocPolicy::EocPolicy(int d, double P, EocSchedule schedule)
    : P_(P),
      sched_(schedule),
      tables_(d, P, schedule.eps, schedule.K),
      f_hat_(static_cast<std::size_t>(2 * schedule.K + 1), 0.0),
      d_hat_(static_cast<std::size_t>(2 * schedule.K + 1), 0.0),
      n_f_(static_cast<std::size_t>(2 * schedule.K + 1), 0),
      n_d_(static_cast<std::size_t>(2 * schedule.K + 1), 0) {}

double EocPolicy::clamp_price(double p, bool& clamped) const {
    if (p > P_) {
        clamped = true;
        return P_;
    }
    if (p < -P_) {
        clamped = true;
        return -P_;
    }
    return p;
}

PolicyDecision EocPolicy::commit_decision(const Vec& x) const {
    PolicyDecision d;
    d.need = Need::NoLearning;
    const double gap_hat = tables_.mean_s(x) - tables_.mean_b(x);  // x.(theta_s - theta_b)
    const int m = static_cast<int>(std::floor(gap_hat / sched_.eps));
    const int K = sched_.K;
    const int k_lo = std::max(-K, -K - m);
    const int k_hi = std::min(K, K - m);
    if (k_lo > k_hi) {
        d.phase = Phase::Fallback;
        d.p = clamp_price(tables_.mean_s(x), d.clamped);
        d.q = d.p;
        return d;
    }
    int best_k = k_lo;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int k = k_lo; k <= k_hi; ++k) {
        const int kp = k + m;
        const double v = f_hat_[idx(k)] * tables_.I_at(kp) + d_hat_[idx(kp)] * tables_.J_at(k);
        if (v > best_v) {
            best_v = v;
            best_k = k;
        }
    }
    d.phase = Phase::Commit;
    d.k = best_k;
    d.k_prime = best_k + m;
    d.p = clamp_price(tables_.mean_s(x) + best_k * sched_.eps, d.clamped);
    d.q = d.p;
    return d;
}

PolicyDecision EocPolicy::step(const Vec& x, Rng& price_rng) {
    PolicyDecision d;
    if (tables_.norm_vinv(x) > sched_.mu) {
        d.phase = Phase::ParamExplore;
        d.need = Need::BothBits;
        d.p = price_rng.uniform(-P_, P_);
        d.q = d.p;
        return d;
    }
    if (!tables_.integrals_done()) {
        d.phase = Phase::IntExplore;
        d.need = Need::BothBits;
        d.p = price_rng.uniform(-P_, P_);
        d.q = d.p;
        return d;
    }
    for (int k = -sched_.K; k <= sched_.K; ++k) {
        if (n_f_[idx(k)] < sched_.t_fd) {
            d.phase = Phase::FExplore;
            d.need = Need::SellerBit;
            d.k = k;
            d.p = clamp_price(tables_.mean_s(x) + k * sched_.eps, d.clamped);
            d.q = d.p;
            return d;
        }
    }
    for (int k = -sched_.K; k <= sched_.K; ++k) {
        if (n_d_[idx(k)] < sched_.t_fd) {
            d.phase = Phase::DExplore;
            d.need = Need::BuyerBit;
            d.k = k;
            d.p = clamp_price(tables_.mean_b(x) + k * sched_.eps, d.clamped);
            d.q = d.p;
            return d;
        }
    }
    PolicyDecision c = commit_decision(x);
    if (c.clamped) ++clamp_count_;
    return c;
}

void EocPolicy::update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) {
    switch (decision.phase) {
        case Phase::ParamExplore:
            // 1{p <= s} is the complement of the seller's accept bit; the
            // buyer's accept bit (q = p) is 1{p <= b} already.
            tables_.par_update_both(x, fb.seller_bit() == 0, fb.buyer_bit() == 1);
            break;
        case Phase::IntExplore: {
            tables_.int_add_both(x, decision.p, fb.seller_bit(), fb.buyer_bit());
            if (tables_.int_rounds() >= sched_.t_int && !tables_.integrals_done())
                tables_.finalize_integrals(sched_.t_int);
            break;
        }
        case Phase::FExplore: {
            auto& n = n_f_[idx(decision.k)];
            auto& f = f_hat_[idx(decision.k)];
            f = (static_cast<double>(n) * f + fb.seller_bit()) / static_cast<double>(n + 1);
            ++n;
            break;
        }
        case Phase::DExplore: {
            auto& n = n_d_[idx(decision.k)];
            auto& dd = d_hat_[idx(decision.k)];
            dd = (static_cast<double>(n) * dd + fb.buyer_bit()) / static_cast<double>(n + 1);
            ++n;
            break;
        }
        default:
            break;  // commit rounds learn nothing
    }
}

void EocPolicy::update_split(const PolicyDecision& decision, const SplitHalf& seller, const SplitHalf& buyer) {
    if (decision.phase == Phase::ParamExplore) {
        tables_.par_update_seller(seller.x, seller.bit == 0);
        tables_.par_update_buyer(buyer.x, buyer.bit == 1);
        return;
    }
    if (decision.phase == Phase::IntExplore) {
        tables_.int_add_seller(seller.x, seller.p, seller.bit);
        tables_.int_add_buyer(buyer.x, buyer.p, buyer.bit);
        if (tables_.int_rounds() >= sched_.t_int && !tables_.integrals_done())
            tables_.finalize_integrals(sched_.t_int);
        return;
    }
    throw std::logic_error("EocPolicy::update_split: not a both-bits phase");
}

double EocPolicy::fallback_price(const Vec& x) const {
    if (tables_.integrals_done()) {
        PolicyDecision c = commit_decision(x);
        return c.p;
    }
    bool clamped = false;
    return clamp_price(tables_.mean_s(x), clamped);
}

}  // namespace bt
