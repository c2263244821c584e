#include "bt/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace bt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long l = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return l;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

Vec to_vec(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    Vec out;
    double d;
    while (is >> d) out.push_back(d);
    if (!is.eof()) throw ConfigError("config: key '" + key + "' expects space-separated numbers");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

NoiseSpec ExperimentConfig::make_noise(const NoiseCfg& cfg) const {
    if (cfg.kind == "none") return NoiseSpec::none();
    if (cfg.kind == "uniform") return NoiseSpec::uniform(cfg.C);
    if (cfg.kind == "triangular") return NoiseSpec::triangular(cfg.C);
    if (cfg.kind == "pwuniform") return NoiseSpec::piecewise_uniform(cfg.intervals, cfg.weights, cfg.centered);
    throw ConfigError("config: unknown noise kind '" + cfg.kind + "'");
}

void ExperimentConfig::validate() const {
    if (horizon < 2) throw ConfigError("config: horizon must be >= 2");
    if (dim < 1) throw ConfigError("config: dim must be >= 1");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    static const char* algos[] = {"epbt", "eoc", "sbip", "onebit-eoc", "onebit-epbt"};
    if (std::find_if(std::begin(algos), std::end(algos),
                     [&](const char* a) { return algorithm == a; }) == std::end(algos))
        throw ConfigError("config: unknown algorithm '" + algorithm + "'");
    if (A < 0.0 || B < 0.0) throw ConfigError("config: market.A and market.B must be >= 0");
    for (const auto* n : {&noise_s, &noise_b}) {
        if (n->kind != "none" && n->kind != "pwuniform" && !(n->C > 0.0))
            throw ConfigError("config: market noise C must be > 0");
    }
    const bool noiseless = noise_s.kind == "none" && noise_b.kind == "none";
    if ((algorithm == "eoc" || algorithm == "sbip" || one_bit()) && noiseless && algorithm != "onebit-epbt")
        throw ConfigError("config: algorithm '" + algorithm + "' needs continuous noise on both sides");
    if (algorithm == "epbt" && !noiseless)
        throw ConfigError("config: epbt runs on the noiseless market");
    if (context_kind != "cyclic" && context_kind != "sphere" && context_kind != "drift" &&
        context_kind != "mixed" && context_kind != "replay")
        throw ConfigError("config: unknown context.kind '" + context_kind + "'");
    if (context_kind == "replay" && context_file.empty())
        throw ConfigError("config: context.kind = replay needs context.file");
    if (one_bit() && !(alpha > 0.0) && !t_e)
        throw ConfigError("config: one-bit runs need alpha or schedule.t_e for budgeting");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("config: alpha must be in (0, 1]");
    // Non-centered noise never reaches a learning run.
    for (const auto* n : {&noise_s, &noise_b})
        if (n->kind == "pwuniform" && !n->centered)
            throw ConfigError("config: non-centered pwuniform noise is oracle-only");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, bool> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
        if (seen[key]) throw ConfigError("config: duplicate key '" + key + "'");
        seen[key] = true;
        cfg.echo.emplace_back(key, val);

        if (key == "horizon") cfg.horizon = to_long(key, val);
        else if (key == "dim") cfg.dim = static_cast<int>(to_long(key, val));
        else if (key == "algorithm") cfg.algorithm = val;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
        else if (key == "replications") cfg.replications = to_long(key, val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "trace") cfg.emit_trace = to_bool(key, val);
        else if (key == "market.A") cfg.A = to_double(key, val);
        else if (key == "market.B") cfg.B = to_double(key, val);
        else if (key == "market.theta_s") cfg.theta_s_spec = val;
        else if (key == "market.theta_b") cfg.theta_b_spec = val;
        else if (key == "market.noise_s") cfg.noise_s.kind = val;
        else if (key == "market.noise_b") cfg.noise_b.kind = val;
        else if (key == "market.noise_s.C") cfg.noise_s.C = to_double(key, val);
        else if (key == "market.noise_b.C") cfg.noise_b.C = to_double(key, val);
        else if (key == "market.noise_s.centered") cfg.noise_s.centered = to_bool(key, val);
        else if (key == "market.noise_b.centered") cfg.noise_b.centered = to_bool(key, val);
        else if (key == "market.noise_s.intervals" || key == "market.noise_b.intervals") {
            auto& tgt = key == "market.noise_s.intervals" ? cfg.noise_s : cfg.noise_b;
            for (const auto& part : split(val, ',')) {
                const auto colon = part.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("config: key '" + key + "' expects lo:hi pairs");
                tgt.intervals.emplace_back(to_double(key, trim(part.substr(0, colon))),
                                           to_double(key, trim(part.substr(colon + 1))));
            }
        } else if (key == "market.noise_s.weights" || key == "market.noise_b.weights") {
            auto& tgt = key == "market.noise_s.weights" ? cfg.noise_s : cfg.noise_b;
            for (const auto& part : split(val, ',')) tgt.weights.push_back(to_double(key, part));
        } else if (key == "context.kind") cfg.context_kind = val;
        else if (key == "context.scale") cfg.context_scale = to_double(key, val);
        else if (key == "context.radius") cfg.context_radius = to_double(key, val);
        else if (key == "context.start") cfg.context_start = to_vec(key, val);
        else if (key == "context.rate") cfg.context_rate = to_double(key, val);
        else if (key == "context.file") cfg.context_file = val;
        else if (key == "alpha") cfg.alpha = to_double(key, val);
        else if (key == "schedule.eps") cfg.sched.eps = to_double(key, val);
        else if (key == "schedule.delta") cfg.sched.delta = to_double(key, val);
        else if (key == "schedule.mu") cfg.sched.mu = to_double(key, val);
        else if (key == "schedule.t_int") cfg.sched.t_int = to_long(key, val);
        else if (key == "schedule.t_fd") cfg.sched.t_fd = to_long(key, val);
        else if (key == "schedule.eps_tilde") cfg.sched.eps_tilde = to_double(key, val);
        else if (key == "schedule.eps_scale") cfg.sched.eps_scale = to_double(key, val);
        else if (key == "schedule.delta_scale") cfg.sched.delta_scale = to_double(key, val);
        else if (key == "schedule.mu_scale") cfg.sched.mu_scale = to_double(key, val);
        else if (key == "schedule.t_int_scale") cfg.sched.t_int_scale = to_double(key, val);
        else if (key == "schedule.t_fd_scale") cfg.sched.t_fd_scale = to_double(key, val);
        else if (key == "schedule.eps_tilde_scale") cfg.sched.eps_tilde_scale = to_double(key, val);
        else if (key == "schedule.t_e") cfg.t_e = to_double(key, val);
        else if (key == "oracle.grid_step") cfg.oracle_grid_step = to_double(key, val);
        else if (key == "oracle.regret_grid_step") cfg.oracle_regret_grid_step = to_double(key, val);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace bt
