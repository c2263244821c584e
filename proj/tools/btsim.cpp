#include "bt/config.hpp"
#include "bt/runner.hpp"
#include "bt/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

std::vector<long> parse_horizons(const std::string& csv) {
    std::vector<long> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stol(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-based online bilateral trade simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, horizons_csv, verify_sub;
    long seed = -1, reps = -1;

    auto* run_cmd = app.add_subcommand("run", "Run one experiment config");
    run_cmd->add_option("--config", config_path, "Config file")->required();
    run_cmd->add_option("--seed", seed, "Master seed override");
    run_cmd->add_option("--out", out_dir, "Output directory override");

    auto* sweep_cmd = app.add_subcommand("sweep", "Horizon sweep with slope fit");
    sweep_cmd->add_option("--config", config_path, "Config file")->required();
    sweep_cmd->add_option("--horizons", horizons_csv, "Comma-separated horizons (>= 3)")->required();
    sweep_cmd->add_option("--reps", reps, "Replications per horizon")->required();
    sweep_cmd->add_option("--seed", seed, "Master seed override");
    sweep_cmd->add_option("--out", out_dir, "Output directory override");

    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd
        ->add_option("subcommand", verify_sub,
                     "oracle-mc | ellipsoid | lemma-profit | appendix-e | budget-balance")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            bt::ExperimentConfig cfg = bt::parse_config_file(config_path);
            if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const bt::RunSummary s = bt::run(cfg);
            if (!s.reps.empty() && s.reps.front().schedule_degenerate)
                std::fprintf(stderr,
                             "warning: scheduled exploration does not fit the horizon; the run "
                             "degenerates to pure exploration\n");
            std::printf("%s: %ld reps, mean final regret %.6g (sd %.6g), mean profit %.6g\n",
                        cfg.algorithm.c_str(), cfg.replications, s.mean_final_regret, s.sd_final_regret,
                        s.mean_final_profit);
            std::printf("summary: %s/summary.json\n", cfg.out_dir.c_str());
            return 0;
        }
        if (sweep_cmd->parsed()) {
            bt::ExperimentConfig cfg = bt::parse_config_file(config_path);
            if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const auto horizons = parse_horizons(horizons_csv);
            const bt::SweepSummary s = bt::sweep(cfg, horizons, reps);
            for (std::size_t i = 0; i < s.horizons.size(); ++i)
                std::printf("T=%ld  mean regret %.6g  (sd %.6g)\n", s.horizons[i], s.mean_regret[i],
                            s.sd_regret[i]);
            std::printf("log-log slope %.4f (rms residual %.4f)\n", s.slope, s.rms_residual);
            return 0;
        }
        if (verify_cmd->parsed()) {
            return bt::verify(verify_sub) ? 0 : 1;
        }
    } catch (const bt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
