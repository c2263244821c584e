#include <doctest.h>

#include "bt/config.hpp"
#include "bt/oracle.hpp"
#include "bt/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bt;

namespace {

const char* kNoisyConfig =
    "horizon = 3000\n"
    "dim = 2\n"
    "algorithm = eoc\n"
    "seed = 7\n"
    "replications = 2\n"
    "market.A = 0.1\n"
    "market.B = 1.0\n"
    "market.theta_s = -0.06 -0.05\n"
    "market.theta_b = 0.07 0.045\n"
    "market.noise_s = uniform\n"
    "market.noise_s.C = 0.25\n"
    "market.noise_b = uniform\n"
    "market.noise_b.C = 0.25\n"
    "context.kind = sphere\n"
    "schedule.eps = 0.3\n"
    "schedule.delta = 0.02\n"
    "schedule.t_int = 150\n"
    "schedule.t_fd = 3\n";

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) fields.push_back(item);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("config parsing catches malformed input") {
    CHECK_THROWS_AS(parse_config_text("nonsense_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("horizon = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("horizon = 100\nhorizon = 200\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("algorithm = magic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("algorithm = onebit-eoc\nmarket.noise_s = uniform\n"
                                      "market.noise_s.C = 1\nmarket.noise_b = uniform\n"
                                      "market.noise_b.C = 1\n"),
                    ConfigError);  // one-bit without alpha or t_e
    const auto cfg = parse_config_text(kNoisyConfig);
    CHECK(cfg.horizon == 3000);
    CHECK(cfg.sched.eps == doctest::Approx(0.3));
    CHECK(cfg.echo.size() == 18);
}

TEST_CASE("noiseless algorithms reject noisy markets and vice versa") {
    CHECK_THROWS_AS(parse_config_text("algorithm = epbt\nmarket.noise_s = uniform\nmarket.noise_s.C = 1\n"
                                      "market.noise_b = uniform\nmarket.noise_b.C = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("algorithm = eoc\n"), ConfigError);  // noiseless default
}

TEST_CASE("identical config and seed give byte-identical traces") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    const auto a = run_replication(cfg, 0, "");
    const auto b = run_replication(cfg, 0, "");
    CHECK(a.trace_digest == b.trace_digest);
    CHECK(a.final_regret == b.final_regret);

    const auto c = run_replication(cfg, 1, "");
    CHECK(c.trace_digest != a.trace_digest);
}

TEST_CASE("trace file is self-consistent and exactly reproducible") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    cfg.out_dir = "harness_test_out";
    const auto r = run_replication(cfg, 0, "harness_trace.csv");
    const auto rows = read_csv_rows("harness_trace.csv");
    REQUIRE(rows.size() == 3001);  // header + every round at T <= 1e4
    const std::vector<std::string> header = {
        "t",   "phase",       "k",        "k_prime",    "p",          "q",      "s",
        "b",   "bit_s",       "bit_b",    "traded",     "gft",        "egft_posted",
        "egft_opt", "regret_inc", "cum_regret", "profit", "cum_profit", "budget_remaining"};
    CHECK(rows[0] == header);

    double cum_regret = 0.0, cum_profit = 0.0;
    bool regret_consistent = true, profit_consistent = true, opt_dominates = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        REQUIRE(f.size() == header.size());
        cum_regret += std::stod(f[14]);
        cum_profit += std::stod(f[16]);
        regret_consistent = regret_consistent && cum_regret == std::stod(f[15]);
        profit_consistent = profit_consistent && cum_profit == std::stod(f[17]);
        opt_dominates = opt_dominates && std::stod(f[13]) >= std::stod(f[12]) - 1e-4;
    }
    CHECK(regret_consistent);
    CHECK(profit_consistent);
    CHECK(opt_dominates);
    CHECK(cum_regret == doctest::Approx(r.final_regret));
    std::remove("harness_trace.csv");
    std::filesystem::remove_all("harness_test_out");
}

TEST_CASE("long traces downsample but keep exact totals") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    cfg.horizon = 25000;  // stride ceil(T/1e4) = 3
    const auto r = run_replication(cfg, 0, "downsample_trace.csv");
    const auto rows = read_csv_rows("downsample_trace.csv");
    CHECK(rows.size() < 25000);
    CHECK(rows.size() > 8000);
    CHECK(rows.back()[0] == "25000");  // final round always emitted
    CHECK(std::stod(rows.back()[15]) == doctest::Approx(r.final_regret));
    std::remove("downsample_trace.csv");
}

TEST_CASE("strong budget balance for the two-bit learners") {
    for (const char* algo : {"eoc", "sbip"}) {
        ExperimentConfig cfg = parse_config_text(kNoisyConfig);
        cfg.algorithm = algo;
        const auto r = run_replication(cfg, 0, "");
        CHECK(r.final_profit == 0.0);
    }
}

TEST_CASE("two-bit and one-bit runs share the environment") {
    ExperimentConfig two = parse_config_text(kNoisyConfig);
    two.out_dir = "xmode_two";
    ExperimentConfig one = two;
    one.algorithm = "onebit-eoc";
    one.t_e = 200.0;
    one.out_dir = "xmode_one";

    run_replication(two, 0, "xmode_two.csv");
    run_replication(one, 0, "xmode_one.csv");
    const auto rt = read_csv_rows("xmode_two.csv");
    const auto ro = read_csv_rows("xmode_one.csv");
    REQUIRE(rt.size() == ro.size());
    bool same_valuations = true;
    for (std::size_t i = 1; i < rt.size(); ++i)
        same_valuations = same_valuations && rt[i][6] == ro[i][6] && rt[i][7] == ro[i][7];
    CHECK(same_valuations);
    std::remove("xmode_two.csv");
    std::remove("xmode_one.csv");
}

TEST_CASE("run aggregates replications") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    cfg.out_dir = "agg_test_out";
    cfg.emit_trace = false;
    const auto s = run(cfg);
    REQUIRE(s.reps.size() == 2);
    CHECK(s.mean_final_regret ==
          doctest::Approx(0.5 * (s.reps[0].final_regret + s.reps[1].final_regret)));
    CHECK(std::filesystem::exists("agg_test_out/summary.json"));
    std::filesystem::remove_all("agg_test_out");
}

TEST_CASE("one-bit budgeting accepts alpha or an explicit exploration length") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    cfg.algorithm = "onebit-eoc";
    cfg.alpha = 0.4;
    cfg.validate();
    const LinearMarket m = make_market(cfg, 0);
    CHECK_NOTHROW(make_policy(cfg, m));  // budget from the activity formula

    cfg.alpha = 0.0;
    cfg.t_e = 150.0;
    cfg.validate();
    CHECK_NOTHROW(make_policy(cfg, m));  // budget 2 P t_e
}

TEST_CASE("log-log fit recovers exact power laws") {
    double slope, intercept, rms;
    fit_loglog({10000, 40000, 160000}, {10.0, 20.0, 40.0}, slope, intercept, rms);
    CHECK(slope == doctest::Approx(0.5));
    CHECK(rms == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(fit_loglog({100, 200}, {1.0, 2.0}, slope, intercept, rms), std::invalid_argument);
}

TEST_CASE("dummy policy controls bracket the slope fit") {
    const LinearMarket m = make_market(parse_config_text(kNoisyConfig), 0);
    const std::vector<long> horizons = {2000, 8000, 32000};

    // Fixed-price control: constant per-round regret, slope close to 1.
    std::vector<double> fixed_means;
    for (long T : horizons) {
        oracle::RegretOracle ro(m, 1e-3 * m.P());
        auto ctx = ContextStream::sphere(2, 1.0, 1.0, Rng(50));
        double reg = 0.0;
        for (long t = 0; t < T; ++t) {
            const Vec x = ctx.next();
            reg += ro.best_value(x) - oracle::egft(m, x, 0.3 * m.P());
        }
        fixed_means.push_back(reg);
    }
    double slope, intercept, rms;
    fit_loglog(horizons, fixed_means, slope, intercept, rms);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.05));

    // Oracle-following control: regret stays at the oracle tolerance floor.
    const double step = 1e-3 * m.P();
    const double tol = 2.0 * m.density_bound() * m.P() * step;
    for (long T : horizons) {
        oracle::RegretOracle ro(m, step);
        auto ctx = ContextStream::sphere(2, 1.0, 1.0, Rng(51));
        double reg = 0.0;
        for (long t = 0; t < T; ++t) {
            const Vec x = ctx.next();
            const auto best = oracle::optimal_price(m, x, 0.5 * step);
            reg += ro.best_value(x) - oracle::egft(m, x, best.price);
        }
        CHECK(std::abs(reg) <= (tol + 1e-6) * static_cast<double>(T));
    }
}

TEST_CASE("sweep writes partial results and a fitted slope") {
    ExperimentConfig cfg = parse_config_text(kNoisyConfig);
    cfg.out_dir = "sweep_test_out";
    const auto s = sweep(cfg, {1500, 3000, 6000}, 2);
    CHECK(s.complete);
    CHECK(s.horizons.size() == 3);
    CHECK(std::filesystem::exists("sweep_test_out/sweep.json"));
    std::filesystem::remove_all("sweep_test_out");
}
