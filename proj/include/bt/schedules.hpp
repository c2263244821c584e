#pragma once

#include "bt/rng.hpp"

#include <optional>
#include <utility>

namespace bt {

// Per-constant overrides for the schedule formulas. Absolute values win over
// scale factors; scale factors multiply the formula value and keep the shape
// in T across a horizon sweep. Dependency order eps -> delta -> (mu, T^int,
// T^FD, eps_tilde): overriding an upstream constant recomputes everything
// downstream from it.
struct ScheduleOverrides {
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<double> mu;
    std::optional<long> t_int;
    std::optional<long> t_fd;
    std::optional<double> eps_tilde;
    double eps_scale = 1.0;
    double delta_scale = 1.0;
    double mu_scale = 1.0;
    double t_int_scale = 1.0;
    double t_fd_scale = 1.0;
    double eps_tilde_scale = 1.0;
};

struct EocSchedule {
    double eps;
    double delta;
    double mu;
    long t_int;
    long t_fd;
    int K;                  // grid is {-K, ..., K}, K = ceil(2P/eps) + 3
    bool degenerate;        // scheduled exploration does not fit the horizon
    long explore_rounds() const { return t_int + 2L * (2L * K + 1L) * t_fd; }
};

struct SbipSchedule {
    double eps;
    double delta;
    double mu;
    long t_int;
    double eps_tilde;       // (12 P L + 7) eps
    int K;
    bool degenerate;
};

// eps = (log T / T)^{1/4}, delta = 1/(T (74 + 32 P / eps)),
// mu = eps / (P sqrt(d log((1 + B^2 T)/delta)) + A),
// T^int = ceil(8 P^2 log(1/delta) / eps^2), T^FD = ceil(2 log(1/delta) / eps^2).
EocSchedule eoc_params(long T, int d, double P, double A, double B, const ScheduleOverrides& ov = {});

// eps = (d^2 (log T)^2 / T)^{1/3}, delta = 1/((38 + 16 P / eps)(T+1)^2),
// mu and T^int as above, eps_tilde = (12 P L + 7) eps.
SbipSchedule sbip_params(long T, int d, double P, double A, double B, double L,
                         const ScheduleOverrides& ov = {});

// EP-BT threshold eps = A B d^2 / T.
double epbt_eps(long T, int d, double A, double B);

// Per-run budget for the one-bit reduction:
//   max(2048 P^4 alpha^-2 log^3 T, 2 P T_e), natural logarithm.
double compute_budget(double alpha, double P, long T, double t_e);

// Budget-collection prices: p uniform on [-P, P], i uniform on
// {0, ..., ceil(log2 T) - 1}, q = p + 2^-i.
std::pair<double, double> budget_collection_price(double P, long T, Rng& rng);

}  // namespace bt
