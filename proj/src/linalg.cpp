#include "bt/linalg.hpp"

#include <cmath>
#include <cstdlib>

namespace bt {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec matvec(const Mat& m, const Vec& x) {
    Vec y(static_cast<std::size_t>(m.n), 0.0);
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

void add_outer(Mat& m, const Vec& x, double w) {
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            m(i, j) += w * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
}

void symmetrize(Mat& m) {
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

double trace(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i) s += m(i, i);
    return s;
}

double max_abs_asym(const Mat& m) {
    double w = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) w = std::max(w, std::abs(m(i, j) - m(j, i)));
    return w;
}

bool cholesky(const Mat& m, Mat& L) {
    const int n = m.n;
    L = Mat(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return true;
}

Mat cholesky_or_throw(const Mat& m, const char* what) {
    Mat L;
    if (!cholesky(m, L)) throw std::runtime_error(what);
    return L;
}

Vec forward_solve(const Mat& L, const Vec& rhs) {
    const int n = L.n;
    Vec z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= L(i, k) * z[static_cast<std::size_t>(k)];
        z[static_cast<std::size_t>(i)] = s / L(i, i);
    }
    return z;
}

Vec chol_solve(const Mat& L, const Vec& rhs) {
    const int n = L.n;
    Vec z = forward_solve(L, rhs);
    Vec x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = z[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= L(k, i) * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / L(i, i);
    }
    return x;
}

double chol_logdet(const Mat& L) {
    double s = 0.0;
    for (int i = 0; i < L.n; ++i) s += std::log(L(i, i));
    return 2.0 * s;
}

void chol_update(Mat& L, Vec x) {
    const int n = L.n;
    for (int k = 0; k < n; ++k) {
        const double lkk = L(k, k);
        const double xk = x[static_cast<std::size_t>(k)];
        const double r = std::hypot(lkk, xk);
        const double c = r / lkk;
        const double s = xk / lkk;
        L(k, k) = r;
        for (int i = k + 1; i < n; ++i) {
            double& lik = L(i, k);
            double& xi = x[static_cast<std::size_t>(i)];
            lik = (lik + s * xi) / c;
            xi = c * xi - s * lik;
        }
    }
}

}  // namespace bt
