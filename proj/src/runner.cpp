#include "bt/runner.hpp"

#include "bt/eoc.hpp"
#include "bt/epbt.hpp"
#include "bt/onebit.hpp"
#include "bt/sbip.hpp"
#include "bt/schedules.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bt {

namespace {

using nlohmann::json;

Vec parse_theta(const std::string& spec, int d, double A, Rng& rng) {
    if (spec == "random") {
        // Uniform in the radius-A ball.
        Vec x(static_cast<std::size_t>(d));
        double n2;
        do {
            for (auto& v : x) v = rng.normal();
            n2 = dot(x, x);
        } while (n2 == 0.0);
        const double r = A * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
        const double f = r / std::sqrt(n2);
        for (auto& v : x) v *= f;
        return x;
    }
    std::istringstream is(spec);
    Vec x;
    double v;
    while (is >> v) x.push_back(v);
    if (static_cast<int>(x.size()) != d)
        throw ConfigError("config: theta vector has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(d));
    return x;
}

std::uint64_t fnv1a_append(std::uint64_t h, const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

// CSV trace writer with a deterministic content digest. Decimals use 17
// significant digits so the rows round-trip bit-exactly.
class TraceWriter {
public:
    TraceWriter(const std::string& path, const ExperimentConfig& cfg, const LinearMarket& market, long rep) {
        if (!path.empty()) {
            tmp_path_ = path + ".tmp";
            final_path_ = path;
            out_.open(tmp_path_, std::ios::trunc);
            if (!out_) throw std::runtime_error("trace: cannot open " + tmp_path_);
        }
        emit_line("# P = " + fmt(market.P()));
        emit_line("# replication = " + std::to_string(rep));
        for (const auto& [k, v] : cfg.echo) emit_line("# " + k + " = " + v);
        emit_line(
            "t,phase,k,k_prime,p,q,s,b,bit_s,bit_b,traded,gft,egft_posted,egft_opt,regret_inc,cum_regret,"
            "profit,cum_profit,budget_remaining");
    }

    ~TraceWriter() {
        if (out_.is_open()) {
            out_.close();
            std::error_code ec;
            std::filesystem::rename(tmp_path_, final_path_, ec);
        }
    }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    void emit_line(const std::string& line) {
        digest_ = fnv1a_append(digest_, line.data(), line.size());
        digest_ = fnv1a_append(digest_, "\n", 1);
        if (out_.is_open()) out_ << line << '\n';
    }

    std::uint64_t digest() const { return digest_; }

private:
    std::ofstream out_;
    std::string tmp_path_, final_path_;
    std::uint64_t digest_ = 0xcbf29ce484222325ull;
};

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double epbt_eps_for(const ExperimentConfig& cfg) {
    if (cfg.sched.eps) return *cfg.sched.eps;
    return epbt_eps(cfg.horizon, cfg.dim, cfg.A, cfg.B) * cfg.sched.eps_scale;
}

// Exploration rounds the one-bit wrapper has to fund when no explicit T_e is
// configured: both-bits phases double, per-increment phases map one to one.
double default_t_e(const ExperimentConfig& cfg, const LinearMarket& market) {
    if (cfg.algorithm == "onebit-epbt") {
        const double eps = epbt_eps_for(cfg);
        const double d = cfg.dim;
        return 4.0 * d * d * std::log(20.0 * cfg.A * (d + 1.0) * cfg.B / eps);
    }
    const auto s = eoc_params(cfg.horizon, cfg.dim, market.P(), cfg.A, cfg.B, cfg.sched);
    const double mu2 = s.mu * s.mu;
    const double d = cfg.dim;
    const double t_par_bound = d * std::log((static_cast<double>(cfg.horizon) + d) / d) / mu2;
    return 2.0 * (t_par_bound + static_cast<double>(s.t_int)) +
           2.0 * (2.0 * s.K + 1.0) * static_cast<double>(s.t_fd);
}

}  // namespace

double RepResult::commit_regret_per_round() const {
    const auto it = phase_rounds.find("Commit");
    if (it == phase_rounds.end() || it->second == 0) return 0.0;
    return phase_regret.at("Commit") / static_cast<double>(it->second);
}

long RepResult::rounds(const std::string& phase) const {
    const auto it = phase_rounds.find(phase);
    return it == phase_rounds.end() ? 0 : it->second;
}

LinearMarket make_market(const ExperimentConfig& cfg, long rep) {
    Rng gen = Rng::stream(cfg.seed, "market-generation", static_cast<std::uint64_t>(rep));
    Vec ts = parse_theta(cfg.theta_s_spec, cfg.dim, cfg.A, gen);
    Vec tb = parse_theta(cfg.theta_b_spec, cfg.dim, cfg.A, gen);
    return LinearMarket(std::move(ts), std::move(tb), cfg.make_noise(cfg.noise_s),
                        cfg.make_noise(cfg.noise_b), cfg.A, cfg.B);
}

ContextStream make_context(const ExperimentConfig& cfg, long rep) {
    Rng rng = Rng::stream(cfg.seed, "environment-context", static_cast<std::uint64_t>(rep));
    if (cfg.context_kind == "cyclic")
        return ContextStream::cyclic(cfg.dim, cfg.context_scale > 0.0 ? cfg.context_scale : cfg.B, cfg.B);
    if (cfg.context_kind == "sphere")
        return ContextStream::sphere(cfg.dim, cfg.context_radius > 0.0 ? cfg.context_radius : cfg.B, cfg.B,
                                     rng);
    if (cfg.context_kind == "drift") {
        Vec start = cfg.context_start;
        if (start.empty()) {
            start.assign(static_cast<std::size_t>(cfg.dim), 0.0);
            start[0] = cfg.B;
        }
        return ContextStream::drift(start, cfg.context_rate, cfg.B);
    }
    if (cfg.context_kind == "mixed") return ContextStream::mixed(cfg.dim, cfg.B, rng);
    if (cfg.context_kind == "replay") return ContextStream::replay(cfg.context_file, cfg.dim, cfg.B);
    throw ConfigError("config: unknown context.kind '" + cfg.context_kind + "'");
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg, const LinearMarket& market,
                                    bool* degenerate_schedule) {
    const double P = market.P();
    if (degenerate_schedule) *degenerate_schedule = false;

    auto inner_name = cfg.one_bit() ? cfg.algorithm.substr(7) : cfg.algorithm;
    std::unique_ptr<Policy> inner;
    if (inner_name == "epbt") {
        inner = std::make_unique<EpbtPolicy>(cfg.dim, cfg.A, cfg.B, epbt_eps_for(cfg));
    } else if (inner_name == "eoc") {
        const auto s = eoc_params(cfg.horizon, cfg.dim, P, cfg.A, cfg.B, cfg.sched);
        if (degenerate_schedule) *degenerate_schedule = s.degenerate;
        inner = std::make_unique<EocPolicy>(cfg.dim, P, s);
    } else if (inner_name == "sbip") {
        const auto s = sbip_params(cfg.horizon, cfg.dim, P, cfg.A, cfg.B, market.density_bound(), cfg.sched);
        if (degenerate_schedule) *degenerate_schedule = s.degenerate;
        inner = std::make_unique<SbipPolicy>(cfg.dim, P, s);
    } else {
        throw ConfigError("config: unknown algorithm '" + cfg.algorithm + "'");
    }
    if (!cfg.one_bit()) return inner;

    double budget;
    if (cfg.t_e) {
        budget = 2.0 * P * *cfg.t_e;
    } else {
        budget = compute_budget(cfg.alpha, P, cfg.horizon, default_t_e(cfg, market));
    }
    return std::make_unique<OneBitWrapper>(std::move(inner), P, cfg.horizon, budget);
}

RepResult run_replication(const ExperimentConfig& cfg, long rep, const std::string& trace_path) {
    const LinearMarket market = make_market(cfg, rep);
    ContextStream ctx = make_context(cfg, rep);
    bool degenerate = false;
    auto policy = make_policy(cfg, market, &degenerate);

    Rng noise_rng = Rng::stream(cfg.seed, "environment-noise", static_cast<std::uint64_t>(rep));
    Rng price_rng = Rng::stream(cfg.seed, "environment-prices-for-policies", static_cast<std::uint64_t>(rep));

    const double P = market.P();
    const bool noisy = !market.noiseless();
    const double regret_step =
        cfg.oracle_regret_grid_step > 0.0 ? cfg.oracle_regret_grid_step : 1e-3 * P;
    oracle::RegretOracle best(market, regret_step);
    const double oracle_tol = 2.0 * market.density_bound() * P * regret_step + 1e-5;

    TraceWriter trace(trace_path, cfg, market, rep);

    RepResult r;
    r.rep = rep;
    r.horizon = cfg.horizon;
    r.schedule_degenerate = degenerate;

    const long T = cfg.horizon;
    const long stride = T <= 10000 ? 1 : (T + 9999) / 10000;
    const long alpha_from = static_cast<long>(std::ceil(std::log(static_cast<double>(T))));

    double cum_regret = 0.0, cum_profit = 0.0, cum_welfare = 0.0;
    double realized_alpha = std::numeric_limits<double>::infinity();
    std::string prev_phase;

    OneBitWrapper* wrapper = dynamic_cast<OneBitWrapper*>(policy.get());

    for (long t = 1; t <= T; ++t) {
        const Vec x = ctx.next();
        const PolicyDecision dec = policy->step(x, price_rng);
        const auto [s, b] = market.sample_valuations(x, noise_rng);
        const RoundOutcome out = evaluate_round(s, b, dec.p, dec.q);
        const FeedbackBits bits = feedback(s, b, dec.p, dec.q);

        Feedback fb = Feedback::none();
        if (cfg.one_bit()) {
            fb = Feedback::one_bit(bits.product);
        } else {
            switch (dec.need) {
                case Need::SellerBit: fb = Feedback::seller_only(bits.seller); break;
                case Need::BuyerBit: fb = Feedback::buyer_only(bits.buyer); break;
                case Need::BothBits: fb = Feedback::both(bits.seller, bits.buyer); break;
                case Need::NoLearning: fb = Feedback::none(); break;
            }
        }
        policy->update(dec, x, fb);

        double egft_posted, egft_opt;
        if (noisy) {
            egft_posted = dec.q == dec.p ? oracle::egft(market, x, dec.p)
                                         : oracle::egft_two_price(market, x, dec.p, dec.q);
            egft_opt = best.best_value(x);
        } else {
            egft_posted = out.gft;
            egft_opt = oracle::deterministic_best(market, x);
        }
        if (dec.q >= dec.p && egft_opt < egft_posted - oracle_tol)
            throw std::runtime_error("runner: oracle optimum below posted value beyond tolerance");

        const double regret_inc = egft_opt - egft_posted;
        cum_regret += regret_inc;
        cum_profit += out.profit;
        cum_welfare += b - s;
        if (t >= alpha_from)
            realized_alpha = std::min(realized_alpha, cum_welfare / static_cast<double>(t));

        const char* phase = phase_name(dec.phase);
        r.phase_rounds[phase]++;
        r.phase_regret[phase] += regret_inc;
        if (out.traded) ++r.trades;
        if (dec.phase == Phase::Fallback) ++r.fallback_rounds;

        const bool emit = stride == 1 || t % stride == 0 || t == T || prev_phase != phase;
        prev_phase = phase;
        if (emit) {
            std::string line;
            line.reserve(256);
            line += std::to_string(t);
            line += ',';
            line += phase;
            line += ',';
            line += std::to_string(dec.k);
            line += ',';
            line += std::to_string(dec.k_prime);
            for (double v : {dec.p, dec.q, s, b}) {
                line += ',';
                line += TraceWriter::fmt(v);
            }
            line += ',';
            line += std::to_string(bits.seller);
            line += ',';
            line += std::to_string(bits.buyer);
            line += ',';
            line += out.traded ? '1' : '0';
            for (double v : {out.gft, egft_posted, egft_opt, regret_inc, cum_regret, out.profit, cum_profit,
                             wrapper ? wrapper->ledger().remaining() : 0.0}) {
                line += ',';
                line += TraceWriter::fmt(v);
            }
            trace.emit_line(line);
        }
    }

    r.final_regret = cum_regret;
    r.final_profit = cum_profit;
    r.realized_alpha = realized_alpha;
    r.trace_digest = trace.digest();
    r.trace_path = trace_path;

    if (auto* eoc = dynamic_cast<EocPolicy*>(policy.get())) r.clamp_count = eoc->clamp_count();
    if (auto* sbip = dynamic_cast<SbipPolicy*>(policy.get())) r.clamp_count = sbip->clamp_count();
    if (wrapper) {
        r.tau = wrapper->ledger().tau;
        r.halted = wrapper->ledger().state == BudgetLedger::State::FallbackHalted;
        r.simulated_rounds = wrapper->simulated_rounds();
        if (auto* eoc = dynamic_cast<EocPolicy*>(&wrapper->inner())) r.clamp_count = eoc->clamp_count();
    }
    return r;
}

int worker_count() {
    if (const char* env = std::getenv("BT_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(hw);
}

namespace {

void parallel_for(long n, const std::function<void(long)>& fn) {
    const int workers = std::min<long>(worker_count(), n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

json rep_json(const RepResult& r) {
    json j;
    j["rep"] = r.rep;
    j["horizon"] = r.horizon;
    j["final_regret"] = r.final_regret;
    j["final_profit"] = r.final_profit;
    j["trades"] = r.trades;
    j["clamp_count"] = r.clamp_count;
    j["fallback_rounds"] = r.fallback_rounds;
    j["phase_rounds"] = r.phase_rounds;
    j["phase_regret"] = r.phase_regret;
    j["tau"] = r.tau;
    j["halted"] = r.halted;
    j["simulated_rounds"] = r.simulated_rounds;
    j["realized_alpha"] = r.realized_alpha;
    j["trace_digest"] = r.trace_digest;
    j["trace_path"] = r.trace_path;
    j["schedule_degenerate"] = r.schedule_degenerate;
    return j;
}

json config_json(const ExperimentConfig& cfg) {
    json e = json::object();
    for (const auto& [k, v] : cfg.echo) e[k] = v;
    return e;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

RunSummary run(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    RunSummary s;
    s.reps.resize(static_cast<std::size_t>(cfg.replications));
    parallel_for(cfg.replications, [&](long rep) {
        const std::string path =
            cfg.emit_trace ? cfg.out_dir + "/trace_rep" + std::to_string(rep) + ".csv" : "";
        s.reps[static_cast<std::size_t>(rep)] = run_replication(cfg, rep, path);
    });
    std::vector<double> finals, profits;
    for (const auto& r : s.reps) {
        finals.push_back(r.final_regret);
        profits.push_back(r.final_profit);
    }
    s.mean_final_regret = mean_of(finals);
    s.sd_final_regret = sd_of(finals);
    s.mean_final_profit = mean_of(profits);
    write_text_atomic(cfg.out_dir + "/summary.json", run_summary_json(cfg, s));
    return s;
}

std::string run_summary_json(const ExperimentConfig& cfg, const RunSummary& s) {
    const LinearMarket probe = make_market(cfg, 0);
    json j;
    j["config"] = config_json(cfg);
    j["P"] = probe.P();
    j["algorithm"] = cfg.algorithm;
    j["mean_final_regret"] = s.mean_final_regret;
    j["sd_final_regret"] = s.sd_final_regret;
    j["mean_final_profit"] = s.mean_final_profit;
    j["replications"] = json::array();
    for (const auto& r : s.reps) j["replications"].push_back(rep_json(r));
    return j.dump(2) + "\n";
}

void fit_loglog(const std::vector<long>& horizons, const std::vector<double>& means, double& slope,
                double& intercept, double& rms_residual) {
    if (horizons.size() < 3) throw std::invalid_argument("fit_loglog: need at least 3 horizons");
    const std::size_t n = horizons.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(static_cast<double>(horizons[i]));
        ys[i] = std::log(std::max(means[i], 1e-12));
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double nd = static_cast<double>(n);
    slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    intercept = (sy - slope * sx) / nd;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (slope * xs[i] + intercept);
        acc += e * e;
    }
    rms_residual = std::sqrt(acc / nd);
}

SweepSummary sweep(const ExperimentConfig& cfg, const std::vector<long>& horizons, long reps) {
    if (horizons.size() < 3) throw ConfigError("sweep: need at least 3 horizons");
    std::filesystem::create_directories(cfg.out_dir);
    SweepSummary s;
    try {
        for (long h : horizons) {
            ExperimentConfig sub = cfg;
            sub.horizon = h;
            sub.replications = reps;
            sub.out_dir = cfg.out_dir + "/T" + std::to_string(h);
            sub.emit_trace = false;
            const RunSummary rs = run(sub);
            s.horizons.push_back(h);
            s.mean_regret.push_back(rs.mean_final_regret);
            s.sd_regret.push_back(rs.sd_final_regret);
        }
        fit_loglog(s.horizons, s.mean_regret, s.slope, s.intercept, s.rms_residual);
        s.complete = true;
        write_text_atomic(cfg.out_dir + "/sweep.json", sweep_summary_json(cfg, s));
    } catch (...) {
        write_text_atomic(cfg.out_dir + "/sweep.json", sweep_summary_json(cfg, s));
        throw;
    }
    return s;
}

std::string sweep_summary_json(const ExperimentConfig& cfg, const SweepSummary& s) {
    json j;
    j["config"] = config_json(cfg);
    j["algorithm"] = cfg.algorithm;
    j["horizons"] = s.horizons;
    j["mean_regret"] = s.mean_regret;
    j["sd_regret"] = s.sd_regret;
    j["complete"] = s.complete;
    if (s.complete) {
        j["slope"] = s.slope;
        j["intercept"] = s.intercept;
        j["rms_residual"] = s.rms_residual;
    }
    return j.dump(2) + "\n";
}

}  // namespace bt
