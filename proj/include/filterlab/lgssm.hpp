#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterlab/matrix.hpp"
#include "filterlab/rng.hpp"
#include "filterlab/sampling.hpp"

namespace filterlab {

/// Linear Gaussian state-space model
///   z_t = A z_{t-1} + w_t,  w_t ~ N(0, Q)
///   x_t = C z_t + v_t,      v_t ~ N(0, R)
struct LgssmParams {
    Matrix A;  // d x d state transition
    Matrix C;  // m x d observation map
    Matrix Q;  // d x d process noise covariance
    Matrix R;  // m x m observation noise covariance

    std::size_t state_dim() const { return A.rows(); }
    std::size_t obs_dim() const { return C.rows(); }

    void validate() const {
        const std::size_t d = A.rows();
        const std::size_t m = C.rows();
        if (!A.square() || !Q.square() || !R.square() || C.cols() != d ||
            Q.rows() != d || R.rows() != m) {
            throw std::invalid_argument("LgssmParams: inconsistent dimensions");
        }
        if (!is_symmetric(Q, 1e-9) || !is_symmetric(R, 1e-9)) {
            throw std::invalid_argument("LgssmParams: Q and R must be symmetric");
        }
    }
};

inline LgssmParams scalar_lgssm(double a, double c, double q, double r) {
    return LgssmParams{Matrix{{a}}, Matrix{{c}}, Matrix{{q}}, Matrix{{r}}};
}

/// Kalman posterior after t observations: mean z_hat = E[z_t | x_1..x_t]
/// and covariance P.
struct FilterState {
    Vec z_hat;
    Matrix P;
    std::size_t t = 0;
};

struct Trajectory {
    std::vector<Vec> z_seq;
    std::vector<Vec> x_seq;
};

struct GainSchedule {
    std::vector<Matrix> gains;  // K_1 .. K_T
    Matrix steady;              // fixed point, or K_T if not converged
    bool converged = false;
    std::size_t steady_step = 0;  // first t with ||K_{t+1} - K_t||inf < tol
};

struct KalmanStepResult {
    FilterState state;
    Vec predicted_obs;      // C A z_hat, computed before seeing x
    Matrix innovation_cov;  // C P_pred C^T + R
    Matrix gain;
};

namespace detail {

inline double psd_condition_number(const Matrix& s) {
    const std::size_t m = s.rows();
    double lo, hi;
    if (m == 1) {
        lo = hi = s(0, 0);
    } else if (m == 2) {
        const double tr = s(0, 0) + s(1, 1);
        const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
        const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
        hi = 0.5 * tr + disc;
        lo = 0.5 * tr - disc;
    } else {
        const Vec eig = symmetric_eigenvalues(s);
        lo = eig.front();
        hi = eig.back();
    }
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace detail

/// Marginal stationary covariance of the state, the fixed point of
/// P = A P A^T + Q. Used as the default filter prior P0, matching the
/// stationary simulation regime.
inline Matrix stationary_state_covariance(const LgssmParams& p, std::size_t max_iter = 1000,
                                          double tol = 1e-12) {
    Matrix pcov = p.Q;
    const Matrix at = transpose(p.A);
    for (std::size_t i = 0; i < max_iter; ++i) {
        Matrix next = p.A * pcov * at + p.Q;
        next = symmetrize(next);
        const double diff = max_abs_diff(next, pcov);
        pcov = std::move(next);
        if (diff < tol) break;
    }
    return pcov;
}

inline Trajectory simulate(const LgssmParams& p, std::size_t T, const Matrix& z0_cov, Rng& rng) {
    if (T < 1) throw std::invalid_argument("simulate: T must be >= 1");
    p.validate();
    const std::size_t d = p.state_dim();
    if (z0_cov.rows() != d || z0_cov.cols() != d) {
        throw std::invalid_argument("simulate: z0_cov dimension mismatch");
    }
    Trajectory traj;
    traj.z_seq.reserve(T);
    traj.x_seq.reserve(T);
    Vec z = sample_gaussian_vec(Vec(d, 0.0), z0_cov, rng);
    const Vec zero_d(d, 0.0);
    const Vec zero_m(p.obs_dim(), 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        z = vec_add(p.A * z, sample_gaussian_vec(zero_d, p.Q, rng));
        Vec x = vec_add(p.C * z, sample_gaussian_vec(zero_m, p.R, rng));
        traj.z_seq.push_back(z);
        traj.x_seq.push_back(std::move(x));
    }
    return traj;
}

inline FilterState make_initial_state(const LgssmParams& p, const Matrix& p0) {
    return FilterState{Vec(p.state_dim(), 0.0), p0, 0};
}

inline FilterState make_initial_state(const LgssmParams& p) {
    return FilterState{Vec(p.state_dim(), 0.0), stationary_state_covariance(p), 0};
}

/// One predict + update in innovations form. The returned predicted_obs is
/// the one-step-ahead mean C A z_hat before the new observation is folded in.
inline KalmanStepResult kalman_step(const LgssmParams& p, const FilterState& state, const Vec& x) {
    const std::size_t d = p.state_dim();
    const std::size_t m = p.obs_dim();
    if (state.z_hat.size() != d || x.size() != m) {
        throw std::invalid_argument("kalman_step: dimension mismatch");
    }

    const Vec z_pred = p.A * state.z_hat;
    const Matrix at = transpose(p.A);
    const Matrix p_pred = symmetrize(p.A * state.P * at + p.Q);

    const Matrix cp = p.C * p_pred;                          // m x d
    const Matrix s = symmetrize(cp * transpose(p.C) + p.R);  // innovation covariance

    const double cond = detail::psd_condition_number(s);
    if (!(cond < 1e12)) {
        throw std::runtime_error("kalman_step: singular innovation covariance, condition number " +
                                 std::to_string(cond));
    }

    const Matrix s_chol = cholesky(s);
    const Matrix gain = transpose(chol_solve_mat(s_chol, cp));  // d x m

    const Vec predicted_obs = p.C * z_pred;
    const Vec innovation = vec_sub(x, predicted_obs);

    Vec z_new = z_pred;
    axpy(1.0, gain * innovation, z_new);

    Matrix p_new = p_pred - gain * cp;
    p_new = symmetrize(p_new);

    return KalmanStepResult{FilterState{std::move(z_new), std::move(p_new), state.t + 1},
                            predicted_obs, s, gain};
}

inline Vec predict_next_obs(const LgssmParams& p, const FilterState& state) {
    return p.C * (p.A * state.z_hat);
}

/// Observability check: the Gramian of [C; CA; ...; CA^(d-1)] must have
/// full rank under the singular-value threshold 1e-8 * sigma_max.
inline bool observability_ok(const LgssmParams& p) {
    const std::size_t d = p.state_dim();
    Matrix block = p.C;
    Matrix gram(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        gram += transpose(block) * block;
        block = block * p.A;
    }
    const Vec eig = symmetric_eigenvalues(gram);
    const double sigma_max = std::sqrt(std::max(eig.back(), 0.0));
    const double sigma_min = std::sqrt(std::max(eig.front(), 0.0));
    return sigma_min > 1e-8 * sigma_max && sigma_max > 0.0;
}

/// Riccati gain sequence K_1..K_T from prior covariance P0, plus the
/// detected fixed point. Not converging within T is flagged, not fatal.
inline GainSchedule gain_schedule(const LgssmParams& p, const Matrix& p0, std::size_t T,
                                  double tol) {
    p.validate();
    if (!observability_ok(p)) {
        throw std::runtime_error("gain_schedule: system fails the observability Gramian check");
    }
    GainSchedule sched;
    sched.gains.reserve(T);
    Matrix pcov = p0;
    const Matrix at = transpose(p.A);
    const Matrix ct = transpose(p.C);
    Matrix prev_gain;
    for (std::size_t t = 1; t <= T; ++t) {
        const Matrix p_pred = symmetrize(p.A * pcov * at + p.Q);
        const Matrix cp = p.C * p_pred;
        const Matrix s = symmetrize(cp * ct + p.R);
        const Matrix gain = transpose(chol_solve_mat(cholesky(s), cp));
        pcov = symmetrize(p_pred - gain * cp);
        if (t > 1 && !sched.converged && max_abs_diff(gain, prev_gain) < tol) {
            sched.converged = true;
            sched.steady = gain;
            sched.steady_step = t;
        }
        prev_gain = gain;
        sched.gains.push_back(gain);
    }
    if (!sched.converged) {
        sched.steady = sched.gains.back();
        sched.steady_step = T;
    }
    return sched;
}

/// Sequence log-likelihood by the prediction-error decomposition:
/// sum_t log N(x_t - C z_pred_t; 0, S_t).
inline double log_likelihood(const LgssmParams& p, const std::vector<Vec>& x_seq,
                             const Matrix& p0) {
    if (x_seq.empty()) throw std::invalid_argument("log_likelihood: empty sequence");
    constexpr double kLog2Pi = 1.8378770664093454836;
    FilterState state = make_initial_state(p, p0);
    const double m = static_cast<double>(p.obs_dim());
    double ll = 0.0;
    for (const Vec& x : x_seq) {
        KalmanStepResult r = kalman_step(p, state, x);
        const Vec innovation = vec_sub(x, r.predicted_obs);
        const Matrix s_chol = cholesky(r.innovation_cov);
        const Vec whitened = chol_solve(s_chol, innovation);
        ll += -0.5 * (m * kLog2Pi + chol_log_det(s_chol) + dot(innovation, whitened));
        state = std::move(r.state);
    }
    return ll;
}

inline double log_likelihood(const LgssmParams& p, const std::vector<Vec>& x_seq) {
    return log_likelihood(p, x_seq, stationary_state_covariance(p));
}

/// Two-state LG-SSM equivalent to a scalar AR(1) signal observed under
/// AR(1) noise: state xi_t = [z_t; v_t], observation x_t = z_t + v_t.
/// R gets a 1e-10 jitter because the augmented observation is exactly
/// noise-free.
inline LgssmParams augment_ar1(double a, double q, double rho) {
    if (std::abs(rho) >= 1.0) throw std::invalid_argument("augment_ar1: |rho| must be < 1");
    if (std::abs(a) >= 1.0) throw std::invalid_argument("augment_ar1: |a| must be < 1");
    if (q <= 0.0) throw std::invalid_argument("augment_ar1: q must be positive");
    LgssmParams p;
    p.A = Matrix{{a, 0.0}, {0.0, rho}};
    p.Q = Matrix{{q, 0.0}, {0.0, 1.0 - rho * rho}};
    p.C = Matrix{{1.0, 1.0}};
    p.R = Matrix{{1e-10}};
    return p;
}

}  // namespace filterlab
