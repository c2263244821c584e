#include "bt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bt {

NoiseSpec NoiseSpec::none() {
    NoiseSpec s;
    s.kind_ = NoiseKind::NoNoise;
    return s;
}

NoiseSpec NoiseSpec::uniform(double C) {
    if (!(C > 0.0)) throw std::invalid_argument("NoiseSpec::uniform: C must be > 0");
    NoiseSpec s;
    s.kind_ = NoiseKind::Uniform;
    s.c_ = C;
    s.lo_ = -C;
    s.hi_ = C;
    s.density_bound_ = 1.0 / (2.0 * C);
    return s;
}

NoiseSpec NoiseSpec::triangular(double C) {
    if (!(C > 0.0)) throw std::invalid_argument("NoiseSpec::triangular: C must be > 0");
    NoiseSpec s;
    s.kind_ = NoiseKind::Triangular;
    s.c_ = C;
    s.lo_ = -C;
    s.hi_ = C;
    s.density_bound_ = 1.0 / C;
    return s;
}

NoiseSpec NoiseSpec::piecewise_uniform(std::vector<std::pair<double, double>> intervals,
                                       std::vector<double> weights, bool centered) {
    if (intervals.empty() || intervals.size() != weights.size())
        throw std::invalid_argument("NoiseSpec: intervals/weights size mismatch");

    std::vector<std::size_t> order(intervals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return intervals[a].first < intervals[b].first; });

    NoiseSpec s;
    s.kind_ = NoiseKind::PiecewiseUniform;
    double wsum = 0.0, mean = 0.0, dens = 0.0, cum_w = 0.0, cum_int = 0.0, prev_hi = 0.0;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const auto [lo, hi] = intervals[order[idx]];
        const double w = weights[order[idx]];
        if (!(hi > lo)) throw std::invalid_argument("NoiseSpec: empty interval");
        if (!(w > 0.0)) throw std::invalid_argument("NoiseSpec: weights must be positive");
        if (idx > 0 && lo < prev_hi) throw std::invalid_argument("NoiseSpec: overlapping intervals");
        if (idx > 0) cum_int += cum_w * (lo - prev_hi);  // flat cdf across the gap
        s.pieces_.push_back({lo, hi, w, cum_w, cum_int});
        cum_int += cum_w * (hi - lo) + 0.5 * w * (hi - lo);
        wsum += w;
        mean += w * 0.5 * (lo + hi);
        dens = std::max(dens, w / (hi - lo));
        cum_w += w;
        prev_hi = hi;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("NoiseSpec: weights must sum to 1");

    s.lo_ = s.pieces_.front().lo;
    s.hi_ = s.pieces_.back().hi;
    s.density_bound_ = dens;
    s.mean_ = mean;
    s.centered_ = centered;
    if (centered && std::abs(mean) > 1e-12)
        throw std::invalid_argument("NoiseSpec: centered piecewise spec has nonzero mean");
    return s;
}

double NoiseSpec::support_bound() const { return std::max(std::abs(lo_), std::abs(hi_)); }

double NoiseSpec::cdf(double u) const {
    switch (kind_) {
        case NoiseKind::NoNoise:
            return u >= 0.0 ? 1.0 : 0.0;
        case NoiseKind::Uniform:
            if (u <= -c_) return 0.0;
            if (u >= c_) return 1.0;
            return (u + c_) / (2.0 * c_);
        case NoiseKind::Triangular: {
            if (u <= -c_) return 0.0;
            if (u >= c_) return 1.0;
            if (u <= 0.0) {
                const double t = u + c_;
                return t * t / (2.0 * c_ * c_);
            }
            const double t = c_ - u;
            return 1.0 - t * t / (2.0 * c_ * c_);
        }
        case NoiseKind::PiecewiseUniform: {
            if (u <= lo_) return 0.0;
            if (u >= hi_) return 1.0;
            for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
                if (u >= it->hi) return it->cum_w + it->w;
                if (u >= it->lo) return it->cum_w + it->w * (u - it->lo) / (it->hi - it->lo);
            }
            return 0.0;
        }
    }
    return 0.0;
}

double NoiseSpec::demand(double u) const {
    if (kind_ == NoiseKind::NoNoise) return u <= 0.0 ? 1.0 : 0.0;
    return 1.0 - cdf(u);
}

double NoiseSpec::cdf_integral(double u) const {
    if (kind_ == NoiseKind::NoNoise) return u > 0.0 ? u : 0.0;
    if (u <= lo_) return 0.0;
    // Over the whole support the integral is hi - mean; past it the cdf is 1.
    if (u >= hi_) return (hi_ - mean_) + (u - hi_);
    switch (kind_) {
        case NoiseKind::Uniform: {
            const double t = u + c_;
            return t * t / (4.0 * c_);
        }
        case NoiseKind::Triangular: {
            if (u <= 0.0) {
                const double t = u + c_;
                return t * t * t / (6.0 * c_ * c_);
            }
            const double t = c_ - u;
            return c_ / 6.0 + u - (c_ * c_ * c_ - t * t * t) / (6.0 * c_ * c_);
        }
        case NoiseKind::PiecewiseUniform: {
            for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
                if (u >= it->hi) {
                    const double len = it->hi - it->lo;
                    return it->cum_int + it->cum_w * len + 0.5 * it->w * len + (it->cum_w + it->w) * (u - it->hi);
                }
                if (u >= it->lo) {
                    const double t = u - it->lo;
                    return it->cum_int + it->cum_w * t + 0.5 * it->w * t * t / (it->hi - it->lo);
                }
            }
            return 0.0;
        }
        case NoiseKind::NoNoise:
            break;
    }
    return 0.0;
}

double NoiseSpec::sample(Rng& rng) const {
    switch (kind_) {
        case NoiseKind::NoNoise:
            return 0.0;
        case NoiseKind::Uniform:
            return rng.uniform(-c_, c_);
        case NoiseKind::Triangular: {
            const double v = rng.uniform01();
            if (v < 0.5) return -c_ + c_ * std::sqrt(2.0 * v);
            return c_ - c_ * std::sqrt(2.0 * (1.0 - v));
        }
        case NoiseKind::PiecewiseUniform: {
            const double v = rng.uniform01();
            double acc = 0.0;
            for (const auto& p : pieces_) {
                acc += p.w;
                if (v < acc || &p == &pieces_.back()) return rng.uniform(p.lo, p.hi);
            }
            return pieces_.back().hi;
        }
    }
    return 0.0;
}

std::string NoiseSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case NoiseKind::NoNoise:
            os << "none";
            break;
        case NoiseKind::Uniform:
            os << "uniform(C=" << c_ << ")";
            break;
        case NoiseKind::Triangular:
            os << "triangular(C=" << c_ << ")";
            break;
        case NoiseKind::PiecewiseUniform:
            os << "pwuniform(" << pieces_.size() << " pieces" << (centered_ ? "" : ", non-centered") << ")";
            break;
    }
    return os.str();
}

}  // namespace bt
