#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bt {

using Vec = std::vector<double>;

// Small dense square matrix, row major. Dimensions here are the feature
// dimension d (single digits), so everything is plain O(d^2)/O(d^3) code.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

    static Mat identity(int n);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
Vec matvec(const Mat& m, const Vec& x);
void add_outer(Mat& m, const Vec& x, double w = 1.0);  // m += w * x x^T
void symmetrize(Mat& m);
double trace(const Mat& m);
double max_abs_asym(const Mat& m);  // max |m_ij - m_ji|

// m = L L^T with L lower triangular. Returns false when m is not numerically
// positive definite.
bool cholesky(const Mat& m, Mat& L);
Mat cholesky_or_throw(const Mat& m, const char* what);

Vec forward_solve(const Mat& L, const Vec& rhs);  // L z = rhs
Vec chol_solve(const Mat& L, const Vec& rhs);     // L L^T x = rhs
double chol_logdet(const Mat& L);                 // log det(L L^T)

// In-place rank-1 update of a Cholesky factor: L L^T + x x^T. O(n^2).
void chol_update(Mat& L, Vec x);

}  // namespace bt
