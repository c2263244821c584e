#include "bt/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bt {

Ellipsoid ball(int d, double radius) {
    if (d < 1) throw std::invalid_argument("ball: dimension must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
    Ellipsoid e;
    e.center.assign(static_cast<std::size_t>(d), 0.0);
    e.shape = Mat(d);
    for (int i = 0; i < d; ++i) e.shape(i, i) = radius * radius;
    return e;
}

std::pair<double, double> support_interval(const Ellipsoid& e, const Vec& x) {
    const double mid = dot(x, e.center);
    const Vec mx = matvec(e.shape, x);
    const double q = dot(x, mx);
    const double half = std::sqrt(std::max(0.0, q));
    return {mid - half, mid + half};
}

Ellipsoid central_cut(const Ellipsoid& e, Vec a, HalfSpace keep) {
    const int d = e.dim();
    if (keep == HalfSpace::UpperHalf)
        for (double& v : a) v = -v;

    const Vec ma = matvec(e.shape, a);
    const double ama = dot(a, ma);
    const double tol = 1e-14 * trace(e.shape) * dot(a, a);
    if (!(ama > tol)) throw std::invalid_argument("central_cut: degenerate cut direction");

    if (d == 1) {
        // Interval [c - r, c + r] halved exactly; the d^2/(d^2-1) factor is
        // singular at d = 1.
        const double r = std::sqrt(e.shape(0, 0));
        const double sign = a[0] > 0.0 ? 1.0 : -1.0;
        Ellipsoid out;
        out.center = {e.center[0] - sign * r / 2.0};
        out.shape = Mat(1);
        out.shape(0, 0) = (r / 2.0) * (r / 2.0);
        return out;
    }

    const double dd = static_cast<double>(d);
    const double inv_sqrt = 1.0 / std::sqrt(ama);

    Ellipsoid out;
    out.center.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        out.center[static_cast<std::size_t>(i)] =
            e.center[static_cast<std::size_t>(i)] - ma[static_cast<std::size_t>(i)] * inv_sqrt / (dd + 1.0);

    const double scale = dd * dd / (dd * dd - 1.0);
    const double rank1 = 2.0 / ((dd + 1.0) * ama);
    out.shape = Mat(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out.shape(i, j) =
                scale * (e.shape(i, j) - rank1 * ma[static_cast<std::size_t>(i)] * ma[static_cast<std::size_t>(j)]);

    // Floating-point asymmetry compounds over long cut chains.
    symmetrize(out.shape);
    cholesky_or_throw(out.shape, "central_cut: updated shape is not positive definite");
    return out;
}

double log_volume(const Ellipsoid& e) {
    const Mat L = cholesky_or_throw(e.shape, "log_volume: shape is not positive definite");
    return 0.5 * chol_logdet(L);
}

bool contains(const Ellipsoid& e, const Vec& theta) {
    const Mat L = cholesky_or_throw(e.shape, "contains: shape is not positive definite");
    Vec diff(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) diff[i] = theta[i] - e.center[i];
    const Vec z = forward_solve(L, diff);
    return dot(z, z) <= 1.0;
}

double condition_estimate(const Ellipsoid& e) {
    // Gershgorin-style bounds are enough for logging.
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < e.dim(); ++i) {
        double row = 0.0;
        for (int j = 0; j < e.dim(); ++j)
            if (j != i) row += std::abs(e.shape(i, j));
        hi = std::max(hi, e.shape(i, i) + row);
        lo = std::min(lo, e.shape(i, i) - row);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace bt
