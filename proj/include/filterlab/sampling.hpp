#pragma once

#include <cmath>
#include <stdexcept>

#include "filterlab/matrix.hpp"
#include "filterlab/rng.hpp"

namespace filterlab {

inline Vec sample_standard_normal_vec(std::size_t n, Rng& rng) {
    Vec v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

/// Draw from N(mean, cov). cov is symmetrized before factorization to
/// absorb floating-point drift from covariance recursions.
inline Vec sample_gaussian_vec(const Vec& mean, const Matrix& cov, Rng& rng) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("sample_gaussian_vec: dimension mismatch");
    }
    const Matrix l = cholesky(symmetrize(cov));
    Vec draw = mean;
    const Vec eps = sample_standard_normal_vec(mean.size(), rng);
    for (std::size_t i = 0; i < mean.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * eps[j];
        draw[i] += s;
    }
    return draw;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// R-diagonal-positive sign convention. Modified Gram-Schmidt, run twice
/// for orthogonality near machine precision.
inline Matrix sample_orthogonal(std::size_t dim, Rng& rng) {
    if (dim == 0) throw std::invalid_argument("sample_orthogonal: dim must be >= 1");
    Matrix q(dim, dim);
    for (double& x : q.entries()) x = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += q(i, k) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i) q(i, j) -= proj * q(i, k);
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < dim; ++i) nrm += q(i, j) * q(i, j);
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) throw std::runtime_error("sample_orthogonal: degenerate column");
            for (std::size_t i = 0; i < dim; ++i) q(i, j) /= nrm;
        }
    }
    return q;
}

/// Symmetric Dirichlet(alpha) over dim categories via normalized Gamma draws.
inline Vec sample_dirichlet(double alpha, std::size_t dim, Rng& rng) {
    if (alpha <= 0.0) throw std::invalid_argument("sample_dirichlet: alpha must be positive");
    if (dim == 0) throw std::invalid_argument("sample_dirichlet: dim must be >= 1");
    Vec v(dim);
    double sum = 0.0;
    for (double& x : v) {
        x = rng.gamma(alpha);
        sum += x;
    }
    if (sum <= 0.0) throw std::runtime_error("sample_dirichlet: all gamma draws underflowed");
    for (double& x : v) x /= sum;
    return v;
}

}  // namespace filterlab
