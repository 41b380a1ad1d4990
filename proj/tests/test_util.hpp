#pragma once

// Shared oracle-style helpers for the test suites. Everything here is
// deliberately independent of the library's solver paths: determinants go
// through LU, posteriors through dense joint-Gaussian conditioning, HMM
// quantities through explicit path enumeration.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "filterlab/matrix.hpp"
#include "filterlab/rng.hpp"

namespace test_util {

using filterlab::Matrix;
using filterlab::Vec;

/// Determinant via LU with partial pivoting.
inline double det_lu(Matrix a) {
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        if (a(k, k) == 0.0) return 0.0;
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

/// Gaussian-elimination solve, independent of the library's Cholesky path.
inline Vec solve_lu(Matrix a, Vec b) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

/// Random symmetric PSD matrix with eigenvalues in (0.1, 1.1).
inline Matrix random_psd(std::size_t n, filterlab::Rng& rng) {
    Matrix g(n, n);
    for (double& x : g.entries()) x = rng.normal();
    Matrix s = g * filterlab::transpose(g);
    s *= 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) s(i, i) += 0.1;
    return s;
}

/// Random lower-triangular factor with positive diagonal.
inline Matrix random_lower_pos_diag(std::size_t n, filterlab::Rng& rng) {
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = 0.5 * rng.normal();
        l(i, i) = 0.2 + std::abs(rng.normal());
    }
    return l;
}

/// Ordinary least squares of y on x. Returns (slope, intercept, r_squared).
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline OlsFit ols(const Vec& x, const Vec& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    OlsFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace test_util
