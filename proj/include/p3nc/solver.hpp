#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "sparse.hpp"

namespace p3nc {

struct SolverConfig {
    double outer_tol = 1e-10;  // relative Schur residual, M^{-1} norm
    double inner_tol = 1e-12;  // relative A-residual, Euclidean norm
    int max_outer = 1000;
    int max_inner = 100000;
    enum class Precond { none, jacobi, ic0 };
    Precond precond = Precond::ic0;
    int threads = 1;

    void validate() const {
        if (!(outer_tol > 0.0 && outer_tol < 1.0) || !(inner_tol > 0.0 && inner_tol < 1.0))
            throw std::invalid_argument("SolverConfig: tolerances must lie in (0,1)");
        if (inner_tol > outer_tol / 10.0)
            throw std::invalid_argument("SolverConfig: inner_tol must be <= outer_tol / 10");
    }
};

struct Solution {
    std::vector<double> velocity;
    std::vector<double> pressure;
    int uzawa_iterations = 0;
    std::vector<double> residual_history;  // relative Schur residuals
    long inner_iterations_total = 0;
};

namespace detail {

inline double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

/// Incomplete Cholesky with zero fill on the lower-triangular pattern of
/// a SPD CSR matrix. Falls back to a diagonally shifted factorization if
/// a pivot breaks down.
class IncompleteCholesky {
public:
    explicit IncompleteCholesky(const CsrMatrix& A) {
        double shift = 0.0;
        while (!try_factor(A, shift)) {
            shift = shift == 0.0 ? 1e-3 : shift * 10.0;
            if (shift > 1e2)
                throw std::runtime_error("IncompleteCholesky: breakdown persists under shift");
        }
    }

    void apply(const std::vector<double>& r, std::vector<double>& z) const {
        const int n = static_cast<int>(row_ptr_.size()) - 1;
        // forward solve L y = r
        for (int i = 0; i < n; ++i) {
            double s = r[i];
            for (int p = row_ptr_[i]; p < row_ptr_[i + 1] - 1; ++p) s -= val_[p] * z[col_[p]];
            z[i] = s / val_[row_ptr_[i + 1] - 1];
        }
        // backward solve L^T z = y
        for (int i = n - 1; i >= 0; --i) {
            z[i] /= val_[row_ptr_[i + 1] - 1];
            const double zi = z[i];
            for (int p = row_ptr_[i]; p < row_ptr_[i + 1] - 1; ++p) z[col_[p]] -= val_[p] * zi;
        }
    }

private:
    bool try_factor(const CsrMatrix& A, double shift) {
        const int n = A.rows();
        row_ptr_.assign(n + 1, 0);
        col_.clear();
        val_.clear();
        // Lower-triangular pattern, diagonal last in each row.
        for (int i = 0; i < n; ++i) {
            row_ptr_[i] = static_cast<int>(col_.size());
            for (int p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p)
                if (A.col_idx()[p] < i) col_.push_back(A.col_idx()[p]);
            col_.push_back(i);
        }
        row_ptr_[n] = static_cast<int>(col_.size());
        val_.assign(col_.size(), 0.0);

        for (int i = 0; i < n; ++i) {
            const int begin = row_ptr_[i];
            const int diag = row_ptr_[i + 1] - 1;
            for (int p = begin; p < diag; ++p) {
                const int j = col_[p];
                double s = A.coeff(i, j);
                // dot of rows i and j of L over columns < j
                int pi = begin, pj = row_ptr_[j];
                const int ei = p, ej = row_ptr_[j + 1] - 1;
                while (pi < ei && pj < ej) {
                    if (col_[pi] == col_[pj]) s -= val_[pi++] * val_[pj++];
                    else if (col_[pi] < col_[pj]) ++pi;
                    else ++pj;
                }
                val_[p] = s / val_[ej];
            }
            double s = A.coeff(i, i) * (1.0 + shift);
            for (int p = begin; p < diag; ++p) s -= val_[p] * val_[p];
            if (!(s > 0.0)) return false;
            val_[diag] = std::sqrt(s);
        }
        return true;
    }

    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
};

}  // namespace detail

/// Preconditioned conjugate gradients for the constrained stiffness
/// matrix. The preconditioner is built once and reused across solves.
class StiffnessSolver {
public:
    StiffnessSolver(const CsrMatrix& A, const SolverConfig& config) : A_(A), config_(config) {
        if (config.precond == SolverConfig::Precond::jacobi) {
            inv_diag_ = A.diagonal();
            for (double& d : inv_diag_) {
                if (d <= 0.0) throw std::runtime_error("StiffnessSolver: non-positive diagonal");
                d = 1.0 / d;
            }
        } else if (config.precond == SolverConfig::Precond::ic0) {
            ic_ = std::make_unique<detail::IncompleteCholesky>(A);
        }
    }

    /// Solves A x = b to the configured relative residual; returns the
    /// iteration count via the stats member.
    std::vector<double> solve(const std::vector<double>& b) const {
        const int n = A_.rows();
        std::vector<double> x(n, 0.0);
        std::vector<double> r = b;
        const double bnorm = std::sqrt(detail::dot_vec(b, b));
        if (bnorm == 0.0) return x;
        std::vector<double> z(n, 0.0), q(n, 0.0);
        precondition(r, z);
        std::vector<double> d = z;
        double rz = detail::dot_vec(r, z);
        for (int it = 0; it < config_.max_inner; ++it) {
            A_.apply(d.data(), q.data(), config_.threads);
            const double dq = detail::dot_vec(d, q);
            if (dq <= 0.0)
                throw std::runtime_error("StiffnessSolver: negative curvature, matrix not SPD");
            const double alpha = rz / dq;
            detail::axpy(alpha, d, x);
            detail::axpy(-alpha, q, r);
            ++iterations_total;
            if (std::sqrt(detail::dot_vec(r, r)) <= config_.inner_tol * bnorm) return x;
            precondition(r, z);
            const double rz_new = detail::dot_vec(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
        }
        throw std::runtime_error("StiffnessSolver: no convergence within max_inner iterations");
    }

    mutable long iterations_total = 0;

private:
    void precondition(const std::vector<double>& r, std::vector<double>& z) const {
        if (ic_) ic_->apply(r, z);
        else if (!inv_diag_.empty())
            for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] * inv_diag_[i];
        else z = r;
    }

    const CsrMatrix& A_;
    SolverConfig config_;
    std::vector<double> inv_diag_;
    std::unique_ptr<detail::IncompleteCholesky> ic_;
};

/// Exact inverse of the block-diagonal pressure mass (dense Cholesky per
/// block).
class PressureMassInverse {
public:
    PressureMassInverse(const CsrMatrix& M, int block_size) : bs_(block_size) {
        const int n = M.rows();
        if (n % bs_ != 0) throw std::invalid_argument("PressureMassInverse: bad block size");
        factors_.assign(static_cast<std::size_t>(n / bs_) * bs_ * bs_, 0.0);
        std::vector<double> block(bs_ * bs_);
        for (int b = 0; b < n / bs_; ++b) {
            for (int i = 0; i < bs_; ++i)
                for (int j = 0; j < bs_; ++j) block[i * bs_ + j] = M.coeff(b * bs_ + i, b * bs_ + j);
            // dense Cholesky, lower
            for (int i = 0; i < bs_; ++i) {
                for (int j = 0; j < i; ++j) {
                    double s = block[i * bs_ + j];
                    for (int k = 0; k < j; ++k) s -= block[i * bs_ + k] * block[j * bs_ + k];
                    block[i * bs_ + j] = s / block[j * bs_ + j];
                }
                double s = block[i * bs_ + i];
                for (int k = 0; k < i; ++k) s -= block[i * bs_ + k] * block[i * bs_ + k];
                if (!(s > 0.0))
                    throw std::runtime_error("PressureMassInverse: mass block not SPD");
                block[i * bs_ + i] = std::sqrt(s);
            }
            std::copy(block.begin(), block.end(), factors_.begin() + static_cast<std::size_t>(b) * bs_ * bs_);
        }
    }

    std::vector<double> apply(const std::vector<double>& r) const {
        std::vector<double> z(r.size());
        const int nblocks = static_cast<int>(r.size()) / bs_;
        for (int b = 0; b < nblocks; ++b) {
            const double* L = factors_.data() + static_cast<std::size_t>(b) * bs_ * bs_;
            double* zb = z.data() + static_cast<std::size_t>(b) * bs_;
            const double* rb = r.data() + static_cast<std::size_t>(b) * bs_;
            for (int i = 0; i < bs_; ++i) {
                double s = rb[i];
                for (int k = 0; k < i; ++k) s -= L[i * bs_ + k] * zb[k];
                zb[i] = s / L[i * bs_ + i];
            }
            for (int i = bs_ - 1; i >= 0; --i) {
                double s = zb[i];
                for (int k = i + 1; k < bs_; ++k) s -= L[k * bs_ + i] * zb[k];
                zb[i] = s / L[i * bs_ + i];
            }
        }
        return z;
    }

private:
    int bs_;
    std::vector<double> factors_;
};

namespace detail {

/// Removes the mean from a pressure coefficient vector. The constant
/// function is the leading modal dof on every element.
inline void project_mean_zero(const SaddleSystem& sys, std::vector<double>& p) {
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) mean += sys.pressure_mean_weights[i] * p[i];
    mean /= sys.domain_volume;
    for (int i = 0; i < static_cast<int>(p.size()); i += ModalP2::kDim) p[i] -= mean;
}

/// Removes the constant-coefficient-vector component from a Schur
/// residual (the kernel direction of B A^{-1} B^T).
inline void deflate_residual(std::vector<double>& r) {
    double s = 0.0;
    int count = 0;
    for (int i = 0; i < static_cast<int>(r.size()); i += ModalP2::kDim) {
        s += r[i];
        ++count;
    }
    s /= count;
    for (int i = 0; i < static_cast<int>(r.size()); i += ModalP2::kDim) r[i] -= s;
}

}  // namespace detail

/// Uzawa solve of the constrained saddle system: preconditioned conjugate
/// gradients on the pressure Schur complement S = B A^{-1} B^T with the
/// pressure mass as preconditioner. Every Schur application performs one
/// inner CG solve with A. The reported uzawa_iterations is the number of
/// outer CG steps.
inline Solution solve_stokes(const SaddleSystem& sys, const SolverConfig& config = {}) {
    config.validate();
    const StiffnessSolver inner(sys.A, config);
    const PressureMassInverse mass_inv(sys.M, ModalP2::kDim);

    Solution sol;
    const int np = sys.n_pressure();
    sol.pressure.assign(np, 0.0);

    // g = -B A^{-1} f
    const std::vector<double> u0 = inner.solve(sys.load);
    std::vector<double> r = sys.B.apply(u0, config.threads);
    for (double& v : r) v = -v;
    detail::deflate_residual(r);

    std::vector<double> z = mass_inv.apply(r);
    detail::project_mean_zero(sys, z);
    double rz = detail::dot_vec(r, z);
    const double rz0 = rz;
    if (rz0 > 0.0) {
        std::vector<double> d = z;
        for (int it = 1; it <= config.max_outer; ++it) {
            const std::vector<double> Sd = sys.B.apply(inner.solve(sys.B.apply_transpose(d)),
                                                       config.threads);
            const double dSd = detail::dot_vec(d, Sd);
            if (dSd <= 0.0)
                throw std::runtime_error("solve_stokes: Schur complement not positive definite");
            const double alpha = rz / dSd;
            detail::axpy(alpha, d, sol.pressure);
            detail::axpy(-alpha, Sd, r);
            detail::deflate_residual(r);
            z = mass_inv.apply(r);
            detail::project_mean_zero(sys, z);
            const double rz_new = detail::dot_vec(r, z);
            sol.uzawa_iterations = it;
            sol.residual_history.push_back(std::sqrt(std::max(rz_new, 0.0) / rz0));
            if (sol.residual_history.back() <= config.outer_tol) break;
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < np; ++i) d[i] = z[i] + beta * d[i];
        }
        if (sol.residual_history.empty() || sol.residual_history.back() > config.outer_tol)
            throw std::runtime_error("solve_stokes: Uzawa iteration did not converge");
    }
    detail::project_mean_zero(sys, sol.pressure);

    // u = A^{-1} (f + B^T p)
    std::vector<double> rhs = sys.B.apply_transpose(sol.pressure);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += sys.load[i];
    sol.velocity = inner.solve(rhs);
    sol.inner_iterations_total = inner.iterations_total;
    return sol;
}

namespace detail {

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection
/// with Sturm sequence counts.
inline double tridiag_smallest_eigenvalue(const std::vector<double>& alpha,
                                          const std::vector<double>& beta) {
    const int n = static_cast<int>(alpha.size());
    double lo = alpha[0], hi = alpha[0];
    for (int i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                           (i + 1 < n ? std::abs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - off);
        hi = std::max(hi, alpha[i] + off);
    }
    auto count_below = [&](double x) {
        int count = 0;
        double d = 1.0;
        for (int i = 0; i < n; ++i) {
            d = alpha[i] - x - (i > 0 ? beta[i - 1] * beta[i - 1] / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++count;
        }
        return count;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Discrete inf-sup constant: beta_h = sqrt(lambda_min) of the pencil
/// S q = lambda M q restricted to mean-zero pressures, where
/// S = B A^{-1} B^T. Computed by a Lanczos iteration in the M inner
/// product with full reorthogonalization; the constant-pressure kernel
/// direction is deflated by the mean-zero projection. Every operator
/// application performs one inner CG solve with A.
inline double infsup_constant(const SaddleSystem& sys, const SolverConfig& config = {},
                              int max_steps = 250, double eig_tol = 1e-9,
                              unsigned seed = 20240901) {
    config.validate();
    const StiffnessSolver inner(sys.A, config);
    const PressureMassInverse mass_inv(sys.M, ModalP2::kDim);
    const int np = sys.n_pressure();
    if (np < ModalP2::kDim + 1)
        throw std::invalid_argument("infsup_constant: pressure space too small");

    auto m_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        return detail::dot_vec(a, sys.M.apply(b));
    };

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(np);
    for (double& x : v) x = gauss(rng);
    detail::project_mean_zero(sys, v);
    {
        const double nv = std::sqrt(m_dot(v, v));
        for (double& x : v) x /= nv;
    }

    std::vector<std::vector<double>> basis = {v};
    std::vector<double> alpha, beta;
    double lambda_prev = -1.0;
    double lambda = -1.0;
    for (int j = 0; j < max_steps; ++j) {
        // w = M^{-1} B A^{-1} B^T v_j, projected to mean zero
        std::vector<double> w =
            mass_inv.apply(sys.B.apply(inner.solve(sys.B.apply_transpose(basis[j])),
                                       config.threads));
        detail::project_mean_zero(sys, w);
        const double a = m_dot(w, basis[j]);
        alpha.push_back(a);
        // full reorthogonalization (two passes) in the M inner product
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) {
                const double c = m_dot(w, u);
                detail::axpy(-c, u, w);
            }
        lambda = detail::tridiag_smallest_eigenvalue(alpha, beta);
        const bool stable = j >= 8 && std::abs(lambda - lambda_prev) <=
                                          eig_tol * std::max(std::abs(lambda), 1e-30);
        lambda_prev = lambda;
        const double b = std::sqrt(std::max(m_dot(w, w), 0.0));
        if (stable || b < 1e-13 || j + 1 >= max_steps ||
            static_cast<int>(basis.size()) >= np - 1)
            break;
        beta.push_back(b);
        for (double& x : w) x /= b;
        basis.push_back(std::move(w));
    }
    if (lambda < 0.0 && lambda > -1e-12) lambda = 0.0;
    if (lambda < 0.0)
        throw std::runtime_error("infsup_constant: negative Rayleigh quotient " +
                                 std::to_string(lambda));
    return std::sqrt(lambda);
}

}  // namespace p3nc
