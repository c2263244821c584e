#pragma once

#include "bt/linalg.hpp"

#include <utility>

namespace bt {

// E(M, c) = { theta : (theta - c)^T M^{-1} (theta - c) <= 1 } with M symmetric
// positive definite. All operations are value semantics and side-effect free.
struct Ellipsoid {
    Vec center;
    Mat shape;

    int dim() const { return shape.n; }
};

enum class HalfSpace { LowerHalf, UpperHalf };

// Ball of given radius centered at the origin: shape = radius^2 * I.
Ellipsoid ball(int d, double radius);

// Range of x^T theta over E: (x^T c - sqrt(x^T M x), x^T c + sqrt(x^T M x)).
std::pair<double, double> support_interval(const Ellipsoid& e, const Vec& x);

// Minimum-volume ellipsoid containing E intersected with the halfspace through
// the center, { theta : a^T (theta - c) <= 0 } for LowerHalf (UpperHalf flips
// the sign of a). Only the central cut is supported; the cut direction must be
// non-degenerate w.r.t. the shape. d = 1 is handled by exact interval halving.
Ellipsoid central_cut(const Ellipsoid& e, Vec a, HalfSpace keep);

// (1/2) log det(shape). Constant-free convention: only differences are used.
double log_volume(const Ellipsoid& e);

bool contains(const Ellipsoid& e, const Vec& theta);

// Largest / smallest eigenvalue ratio estimate of the shape, for diagnostics.
double condition_estimate(const Ellipsoid& e);

}  // namespace bt
