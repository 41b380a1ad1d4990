#pragma once

// Brute-force reference for the Kalman filter: build the dense joint
// Gaussian covariance of (z_T, x_1..x_T) directly from the model
// recursions, then condition by Gaussian-elimination solves. No code is
// shared with the filter's predict/update path beyond elementary matrix
// arithmetic.

#include <vector>

#include "filterlab/lgssm.hpp"
#include "filterlab/matrix.hpp"
#include "test_util.hpp"

namespace test_util {

using filterlab::LgssmParams;
using filterlab::Matrix;
using filterlab::Vec;

struct JointMoments {
    Matrix cov_xx;    // mT x mT covariance of the stacked observations
    Matrix cov_zTx;   // d x mT cross covariance of z_T with the stack
    Matrix var_zT;    // d x d marginal covariance of z_T
};

inline JointMoments joint_moments(const LgssmParams& p, const Matrix& z0_cov, std::size_t T) {
    const std::size_t d = p.state_dim();
    const std::size_t m = p.obs_dim();
    // Marginal covariances P_t = Cov(z_t), t = 0..T.
    std::vector<Matrix> pt(T + 1);
    pt[0] = z0_cov;
    const Matrix at = filterlab::transpose(p.A);
    for (std::size_t t = 1; t <= T; ++t) pt[t] = filterlab::symmetrize(p.A * pt[t - 1] * at + p.Q);

    // Powers of A up to T.
    std::vector<Matrix> apow(T + 1);
    apow[0] = Matrix::identity(d);
    for (std::size_t k = 1; k <= T; ++k) apow[k] = p.A * apow[k - 1];

    const Matrix ct = filterlab::transpose(p.C);
    JointMoments jm;
    jm.cov_xx = Matrix(m * T, m * T);
    jm.cov_zTx = Matrix(d, m * T);
    jm.var_zT = pt[T];

    for (std::size_t s = 1; s <= T; ++s) {
        for (std::size_t t = s; t <= T; ++t) {
            // Cov(z_s, z_t) = P_s (A^(t-s))^T for s <= t.
            const Matrix cov_zz = pt[s] * filterlab::transpose(apow[t - s]);
            Matrix block = p.C * cov_zz * ct;
            if (s == t) block += p.R;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    jm.cov_xx((s - 1) * m + i, (t - 1) * m + j) = block(i, j);
                    jm.cov_xx((t - 1) * m + j, (s - 1) * m + i) = block(i, j);
                }
            }
        }
        // Cov(z_T, z_s) = A^(T-s) P_s.
        const Matrix cross = (apow[T - s] * pt[s]) * ct;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < m; ++j) jm.cov_zTx(i, (s - 1) * m + j) = cross(i, j);
        }
    }
    return jm;
}

inline Vec flatten(const std::vector<Vec>& xs) {
    Vec flat;
    for (const Vec& x : xs) flat.insert(flat.end(), x.begin(), x.end());
    return flat;
}

struct ConditionedPosterior {
    Vec mean;
    Matrix cov;
};

/// Posterior of z_T given x_1..x_T by direct conditioning.
inline ConditionedPosterior condition_on_observations(const LgssmParams& p, const Matrix& z0_cov,
                                                      const std::vector<Vec>& x_seq) {
    const std::size_t T = x_seq.size();
    const std::size_t d = p.state_dim();
    const JointMoments jm = joint_moments(p, z0_cov, T);
    const Vec x_flat = flatten(x_seq);

    // mean = Cov(z,x) Cov(x,x)^-1 x, one solve per row of Cov(z,x).
    ConditionedPosterior post;
    post.mean.resize(d);
    Matrix wt(static_cast<std::size_t>(x_flat.size()), d);  // Cov(xx)^-1 Cov(zx)^T
    for (std::size_t i = 0; i < d; ++i) {
        Vec row(x_flat.size());
        for (std::size_t j = 0; j < x_flat.size(); ++j) row[j] = jm.cov_zTx(i, j);
        const Vec w = solve_lu(jm.cov_xx, row);
        for (std::size_t j = 0; j < x_flat.size(); ++j) wt(j, i) = w[j];
        post.mean[i] = filterlab::dot(w, x_flat);
    }
    post.cov = jm.var_zT - jm.cov_zTx * wt;
    return post;
}

/// E[x_(T+1) | x_1..x_T] by conditioning in the (T+1)-step joint.
inline Vec conditional_next_obs_mean(const LgssmParams& p, const Matrix& z0_cov,
                                     const std::vector<Vec>& x_seq) {
    const std::size_t T = x_seq.size();
    const std::size_t m = p.obs_dim();
    const JointMoments jm = joint_moments(p, z0_cov, T + 1);
    const Vec x_flat = flatten(x_seq);

    Vec mean(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Row of Cov(x_{T+1}, x_{1:T}) inside the big stack.
        Vec row(m * T);
        Matrix cov_sub(m * T, m * T);
        for (std::size_t a = 0; a < m * T; ++a) {
            row[a] = jm.cov_xx(m * T + i, a);
            for (std::size_t b = 0; b < m * T; ++b) cov_sub(a, b) = jm.cov_xx(a, b);
        }
        mean[i] = filterlab::dot(solve_lu(cov_sub, row), x_flat);
    }
    return mean;
}

/// Joint log-density log N(x_1..x_T; 0, Cov(xx)) via LU determinant.
inline double joint_log_likelihood(const LgssmParams& p, const Matrix& z0_cov,
                                   const std::vector<Vec>& x_seq) {
    const JointMoments jm = joint_moments(p, z0_cov, x_seq.size());
    const Vec x_flat = flatten(x_seq);
    const double n = static_cast<double>(x_flat.size());
    const double quad = filterlab::dot(x_flat, solve_lu(jm.cov_xx, x_flat));
    const double logdet = std::log(det_lu(jm.cov_xx));
    constexpr double kLog2Pi = 1.8378770664093454836;
    return -0.5 * (n * kLog2Pi + logdet + quad);
}

}  // namespace test_util
