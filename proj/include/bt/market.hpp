#pragma once

#include "bt/linalg.hpp"
#include "bt/noise.hpp"
#include "bt/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace bt {

// Ground-truth linear market: s = x.theta_s + xi_s, b = x.theta_b + xi_b with
// ||theta|| <= A, ||x|| <= B. Valuations land in [-P, P] with P = C + A*B.
class LinearMarket {
public:
    LinearMarket(Vec theta_s, Vec theta_b, NoiseSpec noise_s, NoiseSpec noise_b, double A, double B,
                 bool oracle_only = false);

    int dim() const { return static_cast<int>(theta_s_.size()); }
    const Vec& theta_s() const { return theta_s_; }
    const Vec& theta_b() const { return theta_b_; }
    const NoiseSpec& noise_s() const { return noise_s_; }
    const NoiseSpec& noise_b() const { return noise_b_; }
    double A() const { return a_; }
    double B() const { return b_; }
    double C() const { return c_; }
    double P() const { return p_; }
    double density_bound() const;  // L = max over the two sides
    bool noiseless() const { return !noise_s_.is_continuous() && !noise_b_.is_continuous(); }
    bool oracle_only() const { return oracle_only_; }

    double mean_s(const Vec& x) const { return dot(x, theta_s_); }
    double mean_b(const Vec& x) const { return dot(x, theta_b_); }

    // Draws (s, b) with fresh independent noise. Throws when ||x|| > B.
    std::pair<double, double> sample_valuations(const Vec& x, Rng& rng) const;

private:
    Vec theta_s_, theta_b_;
    NoiseSpec noise_s_, noise_b_;
    double a_, b_, c_, p_;
    bool oracle_only_;
};

double gain_from_trade(double s, double b, double p, double q);
double profit(double s, double b, double p, double q);

enum class FeedbackMode { TwoBit, OneBit };

struct FeedbackBits {
    int seller;   // 1{s <= p}
    int buyer;    // 1{q <= b}
    int product;  // seller * buyer
};

FeedbackBits feedback(double s, double b, double p, double q);

struct RoundOutcome {
    double s, b, p, q;
    bool traded;
    double gft;
    double profit;
};

RoundOutcome evaluate_round(double s, double b, double p, double q);

// Oblivious context sequences with ||x_t|| <= B.
//   cyclic : B e_1, B e_2, ..., B e_d, B e_1, ...   (scaled basis sweep)
//   sphere : i.i.d. uniform on the radius-R sphere
//   drift  : start vector rotated in the (e1, e2) plane by `rate` per round
//   mixed  : round-robin over the three synthetic kinds above
//   replay : rows of a whitespace-separated text file, '#' comments ignored;
//            rows with ||x|| > B are rejected at load, exhaustion is an error
class ContextStream {
public:
    static ContextStream cyclic(int d, double scale, double B);
    static ContextStream sphere(int d, double radius, double B, Rng rng);
    static ContextStream drift(Vec start, double rate, double B);
    static ContextStream mixed(int d, double B, Rng rng);
    static ContextStream replay(const std::string& path, int d, double B);

    Vec next();
    double bound() const { return b_; }

private:
    enum class Kind { Cyclic, Sphere, Drift, Mixed, Replay };
    ContextStream() = default;

    Vec sphere_draw();

    Kind kind_ = Kind::Cyclic;
    int d_ = 0;
    double b_ = 0.0;
    double scale_ = 0.0;
    double radius_ = 0.0;
    Vec drift_x_;
    double rate_ = 0.0;
    Rng rng_;
    std::uint64_t t_ = 0;
    std::vector<Vec> rows_;
    std::size_t row_idx_ = 0;
};

}  // namespace bt
