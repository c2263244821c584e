#include "bt/market.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bt {

LinearMarket::LinearMarket(Vec theta_s, Vec theta_b, NoiseSpec noise_s, NoiseSpec noise_b, double A,
                           double B, bool oracle_only)
    : theta_s_(std::move(theta_s)),
      theta_b_(std::move(theta_b)),
      noise_s_(std::move(noise_s)),
      noise_b_(std::move(noise_b)),
      a_(A),
      b_(B),
      oracle_only_(oracle_only) {
    if (theta_s_.empty() || theta_s_.size() != theta_b_.size())
        throw std::invalid_argument("LinearMarket: parameter vectors must share a positive dimension");
    if (!(a_ >= 0.0) || !(b_ >= 0.0)) throw std::invalid_argument("LinearMarket: A and B must be >= 0");
    const double tol = 1e-9;
    if (norm2(theta_s_) > a_ + tol || norm2(theta_b_) > a_ + tol)
        throw std::invalid_argument("LinearMarket: parameter norm exceeds bound A");
    if (!oracle_only_) {
        for (const NoiseSpec* n : {&noise_s_, &noise_b_})
            if (n->is_continuous() && !n->centered())
                throw std::invalid_argument("LinearMarket: non-centered noise is oracle-only");
    }
    c_ = std::max(noise_s_.support_bound(), noise_b_.support_bound());
    p_ = c_ + a_ * b_;
}

double LinearMarket::density_bound() const {
    double l = 0.0;
    if (noise_s_.is_continuous()) l = std::max(l, noise_s_.density_bound());
    if (noise_b_.is_continuous()) l = std::max(l, noise_b_.density_bound());
    return l;
}

std::pair<double, double> LinearMarket::sample_valuations(const Vec& x, Rng& rng) const {
    if (norm2(x) > b_ + 1e-9) throw std::invalid_argument("sample_valuations: context norm exceeds bound B");
    const double s = mean_s(x) + noise_s_.sample(rng);
    const double b = mean_b(x) + noise_b_.sample(rng);
    return {s, b};
}

double gain_from_trade(double s, double b, double p, double q) {
    return (s <= p && q <= b) ? (b - s) : 0.0;
}

double profit(double s, double b, double p, double q) {
    return (s <= p && q <= b) ? (q - p) : 0.0;
}

FeedbackBits feedback(double s, double b, double p, double q) {
    const int seller = s <= p ? 1 : 0;
    const int buyer = q <= b ? 1 : 0;
    return {seller, buyer, seller * buyer};
}

RoundOutcome evaluate_round(double s, double b, double p, double q) {
    RoundOutcome o;
    o.s = s;
    o.b = b;
    o.p = p;
    o.q = q;
    o.traded = (s <= p && q <= b);
    o.gft = o.traded ? b - s : 0.0;
    o.profit = o.traded ? q - p : 0.0;
    return o;
}

ContextStream ContextStream::cyclic(int d, double scale, double B) {
    if (d < 1) throw std::invalid_argument("ContextStream: dimension must be >= 1");
    if (std::abs(scale) > B + 1e-12) throw std::invalid_argument("ContextStream: cyclic scale exceeds B");
    ContextStream s;
    s.kind_ = Kind::Cyclic;
    s.d_ = d;
    s.b_ = B;
    s.scale_ = scale;
    return s;
}

ContextStream ContextStream::sphere(int d, double radius, double B, Rng rng) {
    if (d < 1) throw std::invalid_argument("ContextStream: dimension must be >= 1");
    if (radius > B + 1e-12) throw std::invalid_argument("ContextStream: sphere radius exceeds B");
    ContextStream s;
    s.kind_ = Kind::Sphere;
    s.d_ = d;
    s.b_ = B;
    s.radius_ = radius;
    s.rng_ = rng;
    return s;
}

ContextStream ContextStream::drift(Vec start, double rate, double B) {
    if (start.size() < 2) throw std::invalid_argument("ContextStream: drift needs dimension >= 2");
    if (norm2(start) > B + 1e-12) throw std::invalid_argument("ContextStream: drift start exceeds B");
    ContextStream s;
    s.kind_ = Kind::Drift;
    s.d_ = static_cast<int>(start.size());
    s.b_ = B;
    s.drift_x_ = std::move(start);
    s.rate_ = rate;
    return s;
}

ContextStream ContextStream::mixed(int d, double B, Rng rng) {
    if (d < 2) throw std::invalid_argument("ContextStream: mixed needs dimension >= 2");
    ContextStream s;
    s.kind_ = Kind::Mixed;
    s.d_ = d;
    s.b_ = B;
    s.scale_ = B;
    s.radius_ = B;
    s.rate_ = 0.7;
    s.drift_x_.assign(static_cast<std::size_t>(d), 0.0);
    s.drift_x_[0] = B;
    s.rng_ = rng;
    return s;
}

ContextStream ContextStream::replay(const std::string& path, int d, double B) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ContextStream: cannot open replay file " + path);
    ContextStream s;
    s.kind_ = Kind::Replay;
    s.d_ = d;
    s.b_ = B;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        Vec row;
        const char* p = line.c_str();
        char* end = nullptr;
        for (;;) {
            const double v = std::strtod(p, &end);
            if (end == p) break;
            row.push_back(v);
            p = end;
        }
        while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
        if (*p != '\0')
            throw std::runtime_error("ContextStream: replay row " + std::to_string(lineno) +
                                     " has a malformed field");
        if (row.empty()) continue;
        if (static_cast<int>(row.size()) != d)
            throw std::runtime_error("ContextStream: replay row " + std::to_string(lineno) +
                                     " has wrong dimension");
        if (norm2(row) > B + 1e-12)
            throw std::runtime_error("ContextStream: replay row " + std::to_string(lineno) +
                                     " exceeds context bound B");
        s.rows_.push_back(std::move(row));
    }
    return s;
}

Vec ContextStream::sphere_draw() {
    Vec x(static_cast<std::size_t>(d_));
    double n2;
    do {
        for (auto& v : x) v = rng_.normal();
        n2 = dot(x, x);
    } while (n2 == 0.0);
    const double f = radius_ / std::sqrt(n2);
    for (auto& v : x) v *= f;
    return x;
}

Vec ContextStream::next() {
    switch (kind_) {
        case Kind::Cyclic: {
            Vec x(static_cast<std::size_t>(d_), 0.0);
            x[static_cast<std::size_t>(t_ % static_cast<std::uint64_t>(d_))] = scale_;
            ++t_;
            return x;
        }
        case Kind::Sphere:
            ++t_;
            return sphere_draw();
        case Kind::Drift: {
            Vec x = drift_x_;
            const double c = std::cos(rate_), s = std::sin(rate_);
            const double x0 = drift_x_[0], x1 = drift_x_[1];
            drift_x_[0] = c * x0 - s * x1;
            drift_x_[1] = s * x0 + c * x1;
            ++t_;
            return x;
        }
        case Kind::Mixed: {
            const std::uint64_t phase = t_ % 3;
            ++t_;
            if (phase == 0) {
                Vec x(static_cast<std::size_t>(d_), 0.0);
                x[static_cast<std::size_t>((t_ / 3) % static_cast<std::uint64_t>(d_))] = scale_;
                return x;
            }
            if (phase == 1) return sphere_draw();
            Vec x = drift_x_;
            const double c = std::cos(rate_), s = std::sin(rate_);
            const double x0 = drift_x_[0], x1 = drift_x_[1];
            drift_x_[0] = c * x0 - s * x1;
            drift_x_[1] = s * x0 + c * x1;
            return x;
        }
        case Kind::Replay: {
            if (row_idx_ >= rows_.size()) throw std::runtime_error("ContextStream: replay exhausted");
            return rows_[row_idx_++];
        }
    }
    throw std::logic_error("ContextStream: bad kind");
}

}  // namespace bt
