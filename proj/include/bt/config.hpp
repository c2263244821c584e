#pragma once

#include "bt/linalg.hpp"
#include "bt/noise.hpp"
#include "bt/schedules.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` document with dotted keys; '#' starts a comment. Unknown
// keys are errors.
struct ExperimentConfig {
    long horizon = 10000;
    int dim = 2;
    std::string algorithm = "eoc";  // epbt | eoc | sbip | onebit-eoc | onebit-epbt
    std::uint64_t seed = 1;
    long replications = 1;
    std::string out_dir = "out";
    bool emit_trace = true;

    double A = 1.0;
    double B = 1.0;
    std::string theta_s_spec = "random";
    std::string theta_b_spec = "random";

    struct NoiseCfg {
        std::string kind = "none";  // none | uniform | triangular | pwuniform
        double C = 0.0;
        std::vector<std::pair<double, double>> intervals;
        std::vector<double> weights;
        bool centered = true;
    };
    NoiseCfg noise_s;
    NoiseCfg noise_b;

    std::string context_kind = "sphere";  // cyclic | sphere | drift | mixed | replay
    double context_scale = 0.0;           // 0 = use B
    double context_radius = 0.0;          // 0 = use B
    Vec context_start;
    double context_rate = 0.7;
    std::string context_file;

    double alpha = 0.0;  // one-bit budgeting; 0 = unset
    std::optional<double> t_e;

    ScheduleOverrides sched;

    double oracle_grid_step = 0.0;         // 0 = default 1e-4 * P
    double oracle_regret_grid_step = 0.0;  // 0 = default 1e-3 * P

    // Raw key/value pairs in file order, echoed into every output header.
    std::vector<std::pair<std::string, std::string>> echo;

    bool one_bit() const { return algorithm.rfind("onebit-", 0) == 0; }
    NoiseSpec make_noise(const NoiseCfg& cfg) const;
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace bt
