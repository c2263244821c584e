#pragma once

#include "bt/config.hpp"
#include "bt/market.hpp"
#include "bt/oracle.hpp"
#include "bt/policy.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bt {

struct RepResult {
    long rep = 0;
    long horizon = 0;
    double final_regret = 0.0;
    double final_profit = 0.0;
    long trades = 0;
    long clamp_count = 0;
    long fallback_rounds = 0;
    std::map<std::string, long> phase_rounds;
    std::map<std::string, double> phase_regret;
    long tau = -1;
    bool halted = false;
    long simulated_rounds = 0;
    double realized_alpha = 0.0;  // min over t' >= ceil(log T) of welfare(t')/t'
    std::uint64_t trace_digest = 0;
    std::string trace_path;
    bool schedule_degenerate = false;

    double commit_regret_per_round() const;
    long rounds(const std::string& phase) const;
};

struct RunSummary {
    std::vector<RepResult> reps;
    double mean_final_regret = 0.0;
    double sd_final_regret = 0.0;
    double mean_final_profit = 0.0;
};

struct SweepSummary {
    std::vector<long> horizons;
    std::vector<double> mean_regret;
    std::vector<double> sd_regret;
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    bool complete = false;
};

// Construction helpers shared by the CLI, the verification suites and tests.
LinearMarket make_market(const ExperimentConfig& cfg, long rep);
ContextStream make_context(const ExperimentConfig& cfg, long rep);
std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg, const LinearMarket& market,
                                    bool* degenerate_schedule = nullptr);

// Single replication. When `trace_path` is empty no trace file is written; the
// digest is computed either way.
RepResult run_replication(const ExperimentConfig& cfg, long rep, const std::string& trace_path);

// All replications (concurrently, worker count from BT_WORKERS), traces and a
// summary document under cfg.out_dir.
RunSummary run(const ExperimentConfig& cfg);

// Horizon sweep with least-squares slope of log(mean regret) against log T.
// Partial results are written before any error is rethrown.
SweepSummary sweep(const ExperimentConfig& cfg, const std::vector<long>& horizons, long reps);

// Least-squares fit helpers (exposed for tests).
void fit_loglog(const std::vector<long>& horizons, const std::vector<double>& means, double& slope,
                double& intercept, double& rms_residual);

int worker_count();

std::string run_summary_json(const ExperimentConfig& cfg, const RunSummary& s);
std::string sweep_summary_json(const ExperimentConfig& cfg, const SweepSummary& s);

}  // namespace bt
