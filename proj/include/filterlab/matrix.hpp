#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace filterlab {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Dimensions at this scale are tiny
/// (state dims, hidden dims), so everything is plain loops over
/// contiguous storage.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        e_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) {
                throw std::invalid_argument("Matrix: ragged initializer list");
            }
            e_.insert(e_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vec& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// 1 x n row vector view of v's contents.
    static Matrix row_vector(const Vec& v) {
        Matrix m(1, v.size());
        m.e_ = v;
        return m;
    }

    static Matrix col_vector(const Vec& v) {
        Matrix m(v.size(), 1);
        m.e_ = v;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return e_.size(); }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    Vec& entries() { return e_; }
    const Vec& entries() const { return e_; }
    double* data() { return e_.data(); }
    const double* data() const { return e_.data(); }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o, "+=");
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o, "-=");
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }

    Matrix& operator*=(double s) {
        for (double& x : e_) x *= s;
        return *this;
    }

private:
    void check_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument(std::string("Matrix ") + op + ": shape mismatch " +
                                        shape_str() + " vs " + o.shape_str());
        }
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec e_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= s; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("Matrix *: inner dimension mismatch");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

inline Vec operator*(const Matrix& a, const Vec& x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("Matrix * Vec: dimension mismatch");
    }
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

inline Matrix symmetrize(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("symmetrize: non-square matrix");
    Matrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
    return s;
}

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.entries()) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

inline bool is_symmetric(const Matrix& a, double tol = 1e-10) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void axpy(double alpha, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec vec_add(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec vec_sub(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_sub: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec vec_scale(Vec a, double s) {
    for (double& x : a) x *= s;
    return a;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

/// y += A^T x, accumulating without forming the transpose.
inline void add_At_x(const Matrix& a, const Vec& x, Vec& y) {
    if (a.rows() != x.size() || a.cols() != y.size()) {
        throw std::invalid_argument("add_At_x: dimension mismatch");
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
    }
}

/// A += alpha * x y^T (rank-one accumulation).
inline void add_outer(Matrix& a, double alpha, const Vec& x, const Vec& y) {
    if (a.rows() != x.size() || a.cols() != y.size()) {
        throw std::invalid_argument("add_outer: dimension mismatch");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ax = alpha * x[i];
        for (std::size_t j = 0; j < y.size(); ++j) a(i, j) += ax * y[j];
    }
}

// ---------------------------------------------------------------------------
// Factorizations and eigenvalues
// ---------------------------------------------------------------------------

/// Lower-triangular Cholesky factor of a symmetric PSD matrix. Exact zero
/// pivots are allowed (semidefinite input); a pivot below -1e-10 is an error
/// that names the offending index.
inline Matrix cholesky(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("cholesky: non-square matrix");
    if (!is_symmetric(m, 1e-10)) throw std::invalid_argument("cholesky: matrix not symmetric within 1e-10");
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -1e-10) {
            throw std::runtime_error("cholesky: negative pivot " + std::to_string(d) +
                                     " at index " + std::to_string(j));
        }
        if (d <= 0.0) {
            // Semidefinite direction: zero pivot, zero column.
            l(j, j) = 0.0;
            continue;
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

/// Solve L L^T x = b given the Cholesky factor L. Requires strictly positive
/// pivots.
inline Vec chol_solve(const Matrix& l, const Vec& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("chol_solve: dimension mismatch");
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (l(i, i) == 0.0) throw std::runtime_error("chol_solve: singular factor (zero pivot)");
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

/// Solve L L^T X = B column-wise.
inline Matrix chol_solve_mat(const Matrix& l, const Matrix& b) {
    if (b.rows() != l.rows()) throw std::invalid_argument("chol_solve_mat: dimension mismatch");
    Matrix x(b.rows(), b.cols());
    Vec col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vec sol = chol_solve(l, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

inline double chol_log_det(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) {
        if (l(i, i) <= 0.0) throw std::runtime_error("chol_log_det: singular factor");
        s += std::log(l(i, i));
    }
    return 2.0 * s;
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
inline Vec symmetric_eigenvalues(const Matrix& m, double tol = 1e-12) {
    if (!m.square()) throw std::invalid_argument("symmetric_eigenvalues: non-square matrix");
    Matrix a = symmetrize(m);
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < tol * tol) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vec eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

namespace detail {

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
inline double power_iteration_sym(const Matrix& s, double tol, int max_iter) {
    const std::size_t n = s.rows();
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i);
    double nv = norm2(v);
    for (double& x : v) x /= nv;
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec w = s * v;
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        for (double& x : w) x /= nw;
        const double next = dot(w, s * w);
        const bool done = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
        lambda = next;
        v = std::move(w);
        if (done && it > 2) break;
    }
    return lambda;
}

}  // namespace detail

/// Spectral radius (largest eigenvalue magnitude) of a square matrix.
/// Uses the norm of repeated squarings, rho(A) = lim ||A^(2^i)||^(2^-i),
/// which handles complex eigenvalue pairs that plain power iteration on A
/// cannot. Throws with the last residual if the estimate fails to settle.
inline double spectral_radius(const Matrix& m, double tol = 1e-8) {
    if (!m.square()) throw std::invalid_argument("spectral_radius: non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 0.0;

    Matrix b = m;
    double log_scale = 0.0;
    double prev = -1.0;
    double residual = 0.0;
    const int max_squarings = 48;
    for (int i = 0; i < max_squarings; ++i) {
        // sigma_max(b) via power iteration on b^T b.
        const Matrix bt_b = transpose(b) * b;
        const double lam = std::max(detail::power_iteration_sym(bt_b, 1e-14, 2000), 0.0);
        if (lam == 0.0) return 0.0;
        const double log_sigma = 0.5 * std::log(lam);
        const double est = std::exp((log_sigma + log_scale) / static_cast<double>(1ULL << i));
        residual = std::abs(est - prev);
        if (i > 0 && residual <= tol * std::max(1.0, est)) return est;
        prev = est;
        // Normalize before squaring so entries stay in range.
        const double scale = max_abs(b);
        if (scale == 0.0) return 0.0;
        b *= 1.0 / scale;
        log_scale = 2.0 * (log_scale + std::log(scale));
        b = b * b;
    }
    throw std::runtime_error("spectral_radius: no convergence after " +
                             std::to_string(max_squarings) +
                             " squarings, residual " + std::to_string(residual));
}

}  // namespace filterlab
