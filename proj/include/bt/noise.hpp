#pragma once

#include "bt/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace bt {

enum class NoiseKind { NoNoise, Uniform, Triangular, PiecewiseUniform };

// Bounded-support, bounded-density valuation noise with closed-form cdf F and
// demand D(u) = P(xi >= u). Uniform{C} and Triangular{C} are mean-zero by
// construction. PiecewiseUniform carries a `centered` flag: when set, mean
// zero is asserted at construction; when clear the spec is usable by the
// oracle only, never by a learning run.
class NoiseSpec {
public:
    static NoiseSpec none();
    static NoiseSpec uniform(double C);
    static NoiseSpec triangular(double C);
    static NoiseSpec piecewise_uniform(std::vector<std::pair<double, double>> intervals,
                                       std::vector<double> weights, bool centered);

    NoiseKind kind() const { return kind_; }
    bool is_continuous() const { return kind_ != NoiseKind::NoNoise; }
    bool centered() const { return centered_; }

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    // Support bound C = max(|lo|, |hi|).
    double support_bound() const;
    // Density bound L. Uniform{C}: 1/(2C). Triangular{C}: 1/C.
    double density_bound() const { return density_bound_; }
    double mean() const { return mean_; }

    double cdf(double u) const;     // F(u) = P(xi <= u); NoNoise: step at 0
    double demand(double u) const;  // D(u) = P(xi >= u)

    // Running integral of the cdf, extended past the support:
    //   cdf_integral(u) = int_{lo}^{u} F(v) dv,  u > hi continues with slope 1.
    // Everything else (I, J, partial means) derives from this in closed form.
    double cdf_integral(double u) const;

    double sample(Rng& rng) const;

    std::string describe() const;

private:
    NoiseSpec() = default;

    NoiseKind kind_ = NoiseKind::NoNoise;
    double c_ = 0.0;  // scale parameter of the centered families
    double lo_ = 0.0, hi_ = 0.0;
    double density_bound_ = 0.0;
    double mean_ = 0.0;
    bool centered_ = true;

    // Piecewise data: disjoint sorted intervals with simplex weights.
    struct Piece {
        double lo, hi, w;
        double cum_w;    // total weight strictly below this piece
        double cum_int;  // cdf_integral at this piece's lo
    };
    std::vector<Piece> pieces_;
};

}  // namespace bt
