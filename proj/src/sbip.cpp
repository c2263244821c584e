#include "bt/sbip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bt {

namespace {
double clamp_to(double p, double P, bool& clamped) {
    if (p > P) {
        clamped = true;
        return P;
    }
    if (p < -P) {
        clamped = true;
        return -P;
    }
    return p;
}
}  // namespace

SbipPolicy::SbipPolicy(int d, double P, SbipSchedule schedule)
    : P_(P),
      sched_(schedule),
      log1d_(std::log(1.0 / schedule.delta)),
      tables_(d, P, schedule.eps, schedule.K),
      f_hat_(static_cast<std::size_t>(2 * schedule.K + 1), 0.0),
      d_hat_(static_cast<std::size_t>(2 * schedule.K + 1), 0.0),
      n_s_(static_cast<std::size_t>(2 * schedule.K + 1), 0),
      n_b_(static_cast<std::size_t>(2 * schedule.K + 1), 0),
      t_se_s_(static_cast<std::size_t>(2 * schedule.K + 1), 0),
      t_se_b_(static_cast<std::size_t>(2 * schedule.K + 1), 0) {}

double SbipPolicy::beta(long n) const {
    if (n <= 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * log1d_ / static_cast<double>(n));
}

double SbipPolicy::mid(int k, int k_prime) const {
    return tables_.I_at(k_prime) * f_hat_[idx(k)] + tables_.J_at(k) * d_hat_[idx(k_prime)];
}

double SbipPolicy::ucb(int k, int k_prime) const {
    return mid(k, k_prime) + sched_.eps_tilde + 2.0 * P_ * (beta(n_s_[idx(k)]) + beta(n_b_[idx(k_prime)]));
}

double SbipPolicy::lcb(int k, int k_prime) const {
    return mid(k, k_prime) - sched_.eps_tilde - 2.0 * P_ * (beta(n_s_[idx(k)]) + beta(n_b_[idx(k_prime)]));
}

double SbipPolicy::clamp_price(double p, bool& clamped) const { return clamp_to(p, P_, clamped); }

std::vector<std::pair<int, int>> SbipPolicy::active_set(const Vec& x) const {
    const double gap_hat = tables_.mean_s(x) - tables_.mean_b(x);
    const int m = static_cast<int>(std::floor(gap_hat / sched_.eps));
    const int K = sched_.K;
    const int k_lo = std::max(-K, -K - m);
    const int k_hi = std::min(K, K - m);
    std::vector<std::pair<int, int>> out;
    if (k_lo > k_hi) return out;

    double max_lcb = -std::numeric_limits<double>::infinity();
    for (int k = k_lo; k <= k_hi; ++k) max_lcb = std::max(max_lcb, lcb(k, k + m));
    for (int k = k_lo; k <= k_hi; ++k)
        if (ucb(k, k + m) >= max_lcb) out.emplace_back(k, k + m);
    return out;
}

PolicyDecision SbipPolicy::step(const Vec& x, Rng& price_rng) {
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

    const auto survivors = active_set(x);
    if (survivors.empty()) {
        d.phase = Phase::Fallback;
        d.need = Need::NoLearning;
        d.p = clamp_price(tables_.mean_s(x), d.clamped);
        d.q = d.p;
        return d;
    }

    // Pick the survivor whose pooled count is smallest: compare the least
    // seller-side count against the least buyer-side count, seller wins ties.
    long min_ns = std::numeric_limits<long>::max(), min_nb = std::numeric_limits<long>::max();
    std::pair<int, int> pick_s = survivors.front(), pick_b = survivors.front();
    for (const auto& kk : survivors) {
        if (n_s_[idx(kk.first)] < min_ns) {
            min_ns = n_s_[idx(kk.first)];
            pick_s = kk;
        }
        if (n_b_[idx(kk.second)] < min_nb) {
            min_nb = n_b_[idx(kk.second)];
            pick_b = kk;
        }
    }
    const bool seller_side = min_ns <= min_nb;
    const auto chosen = seller_side ? pick_s : pick_b;

    d.phase = Phase::Commit;
    d.need = Need::BothBits;  // each elimination round refines both tables
    d.k = chosen.first;
    d.k_prime = chosen.second;
    d.p = clamp_price(tables_.mean_s(x) + chosen.first * sched_.eps, d.clamped);
    d.q = d.p;
    if (d.clamped) ++clamp_count_;
    if (seller_side)
        ++t_se_s_[idx(chosen.first)];
    else
        ++t_se_b_[idx(chosen.second)];
    return d;
}

void SbipPolicy::update(const PolicyDecision& decision, const Vec& x, const Feedback& fb) {
    switch (decision.phase) {
        case Phase::ParamExplore:
            tables_.par_update_both(x, fb.seller_bit() == 0, fb.buyer_bit() == 1);
            break;
        case Phase::IntExplore:
            tables_.int_add_both(x, decision.p, fb.seller_bit(), fb.buyer_bit());
            if (tables_.int_rounds() >= sched_.t_int && !tables_.integrals_done())
                tables_.finalize_integrals(sched_.t_int);
            break;
        case Phase::Commit: {
            auto& ns = n_s_[idx(decision.k)];
            auto& f = f_hat_[idx(decision.k)];
            f = (static_cast<double>(ns) * f + fb.seller_bit()) / static_cast<double>(ns + 1);
            ++ns;
            auto& nb = n_b_[idx(decision.k_prime)];
            auto& dd = d_hat_[idx(decision.k_prime)];
            dd = (static_cast<double>(nb) * dd + fb.buyer_bit()) / static_cast<double>(nb + 1);
            ++nb;
            break;
        }
        default:
            break;
    }
    (void)x;
}

double SbipPolicy::fallback_price(const Vec& x) const {
    bool clamped = false;
    const double base = tables_.mean_s(x);
    if (!tables_.integrals_done()) return clamp_to(base, P_, clamped);
    const auto survivors = active_set(x);
    if (survivors.empty()) return clamp_to(base, P_, clamped);
    int best_k = survivors.front().first;
    double best_v = -std::numeric_limits<double>::infinity();
    for (const auto& kk : survivors) {
        const double v = mid(kk.first, kk.second);
        if (v > best_v) {
            best_v = v;
            best_k = kk.first;
        }
    }
    return clamp_to(base + best_k * sched_.eps, P_, clamped);
}

}  // namespace bt
