#include "bt/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace bt {

namespace {

long ceil_to_long(double v) { return static_cast<long>(std::ceil(v - 1e-12)); }

double mu_formula(double eps, double delta, int d, double P, double A, double B, long T) {
    const double w = std::sqrt(static_cast<double>(d) * std::log((1.0 + B * B * static_cast<double>(T)) / delta));
    return eps / (P * w + A);
}

}  // namespace

EocSchedule eoc_params(long T, int d, double P, double A, double B, const ScheduleOverrides& ov) {
    if (T < 2) throw std::invalid_argument("eoc_params: T must be >= 2");
    EocSchedule s{};
    const double Td = static_cast<double>(T);
    s.eps = ov.eps.value_or(std::pow(std::log(Td) / Td, 0.25)) * (ov.eps ? 1.0 : ov.eps_scale);
    s.delta = ov.delta.value_or(1.0 / (Td * (74.0 + 32.0 * P / s.eps))) * (ov.delta ? 1.0 : ov.delta_scale);
    s.mu = ov.mu.value_or(mu_formula(s.eps, s.delta, d, P, A, B, T)) * (ov.mu ? 1.0 : ov.mu_scale);
    const double log1d = std::log(1.0 / s.delta);
    s.t_int = ov.t_int.value_or(ceil_to_long(ov.t_int_scale * 8.0 * P * P * log1d / (s.eps * s.eps)));
    s.t_fd = ov.t_fd.value_or(ceil_to_long(ov.t_fd_scale * 2.0 * log1d / (s.eps * s.eps)));
    s.K = static_cast<int>(std::ceil(2.0 * P / s.eps)) + 3;
    s.degenerate = s.explore_rounds() >= T;
    return s;
}

SbipSchedule sbip_params(long T, int d, double P, double A, double B, double L,
                         const ScheduleOverrides& ov) {
    if (T < 2) throw std::invalid_argument("sbip_params: T must be >= 2");
    if (!(L > 0.0)) throw std::invalid_argument("sbip_params: density bound L must be > 0");
    SbipSchedule s{};
    const double Td = static_cast<double>(T);
    const double dd = static_cast<double>(d);
    const double logT = std::log(Td);
    s.eps = ov.eps.value_or(std::cbrt(dd * dd * logT * logT / Td)) * (ov.eps ? 1.0 : ov.eps_scale);
    s.delta = ov.delta.value_or(1.0 / ((38.0 + 16.0 * P / s.eps) * (Td + 1.0) * (Td + 1.0))) *
              (ov.delta ? 1.0 : ov.delta_scale);
    s.mu = ov.mu.value_or(mu_formula(s.eps, s.delta, d, P, A, B, T)) * (ov.mu ? 1.0 : ov.mu_scale);
    const double log1d = std::log(1.0 / s.delta);
    s.t_int = ov.t_int.value_or(ceil_to_long(ov.t_int_scale * 8.0 * P * P * log1d / (s.eps * s.eps)));
    s.eps_tilde =
        ov.eps_tilde.value_or((12.0 * P * L + 7.0) * s.eps) * (ov.eps_tilde ? 1.0 : ov.eps_tilde_scale);
    s.K = static_cast<int>(std::ceil(2.0 * P / s.eps)) + 3;
    s.degenerate = s.t_int >= T;
    return s;
}

double epbt_eps(long T, int d, double A, double B) {
    if (T < 1) throw std::invalid_argument("epbt_eps: T must be >= 1");
    return A * B * static_cast<double>(d) * static_cast<double>(d) / static_cast<double>(T);
}

double compute_budget(double alpha, double P, long T, double t_e) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("compute_budget: alpha must be in (0, 1]");
    if (t_e < 0.0) throw std::invalid_argument("compute_budget: T_e must be >= 0");
    const double logT = std::log(static_cast<double>(T));
    const double collect = 2048.0 * std::pow(P, 4) * logT * logT * logT / (alpha * alpha);
    return std::max(collect, 2.0 * P * t_e);
}

std::pair<double, double> budget_collection_price(double P, long T, Rng& rng) {
    if (T < 2) throw std::invalid_argument("budget_collection_price: T must be >= 2");
    const double p = rng.uniform(-P, P);
    const auto n = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(T))));
    const auto i = rng.uniform_int(n == 0 ? 1 : n);
    return {p, p + std::pow(2.0, -static_cast<double>(i))};
}

}  // namespace bt
