#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "specpart/common.hpp"
#include "specpart/graph.hpp"

namespace specpart {

/// Eigenpairs of the graph Laplacian, trivial (0, ones) pair excluded.
template <class Scalar>
struct EigenResult {
    Vector<Scalar> values;     // ascending
    Matrix<Scalar> vectors;    // n x count, unit columns orthogonal to ones
    Vector<Scalar> residuals;  // |L x - lambda x|_2 per pair
};

using EigenResultd = EigenResult<double>;

template <class Scalar>
struct LanczosOptions {
    Scalar tol = Scalar(1e-10);
    Index max_iterations = 0;  // 0 means 20*count + 200
    std::uint64_t seed = 0x5eed1e57ULL;
};

/// Full dense eigendecomposition of the Laplacian, for use as a test oracle
/// and on small graphs. Assembles L directly from the edge list (independent
/// of laplacian_apply), drops the trivial pair, returns the first `count`.
template <class Scalar>
EigenResult<Scalar> dense_eigen_oracle(const Graph<Scalar>& g, Index count) {
    const Index n = g.n();
    if (n > 2000) throw std::invalid_argument("dense oracle is limited to n <= 2000");
    if (count < 1 || count > n - 1)
        throw std::invalid_argument("count must lie in [1, n-1]");
    Matrix<Scalar> lap = Matrix<Scalar>::Zero(n, n);
    for (const auto& e : g.edges()) {
        lap(e.u, e.u) += e.weight;
        lap(e.v, e.v) += e.weight;
        lap(e.u, e.v) -= e.weight;
        lap(e.v, e.u) -= e.weight;
    }
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(lap);
    if (eig.info() != Eigen::Success) throw numerical_error("dense eigendecomposition failed");
    EigenResult<Scalar> out;
    out.values = eig.eigenvalues().segment(1, count);
    out.vectors = eig.eigenvectors().middleCols(1, count);
    out.residuals.resize(count);
    for (Index i = 0; i < count; ++i)
        out.residuals[i] = (lap * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
    return out;
}

namespace detail {

/// Thick-restart Lanczos on the Laplacian restricted to the complement of
/// the known kernel vector 1/sqrt(n). Every new basis vector is fully
/// re-orthogonalized against the ones vector, the locked (converged)
/// eigenvectors, and the whole active basis, which keeps ghost pairs out.
///
/// Converged pairs are locked from the bottom of the spectrum upward. Once
/// `count` pairs are locked, a verification sweep restarts the iteration
/// from a fresh random vector so that extra copies of degenerate eigenvalues
/// invisible to a single Krylov sequence are still found: the sweep ends
/// when the complement's smallest Ritz pair is seen to lie above the
/// accepted window.
template <class Scalar>
class LanczosSolver {
public:
    LanczosSolver(const Graph<Scalar>& g, Index count, const LanczosOptions<Scalar>& opt)
        : graph_(g), n_(g.n()), count_(count), tol_(opt.tol), rng_(opt.seed) {
        max_iterations_ = opt.max_iterations > 0 ? opt.max_iterations : 20 * count + 200;
        basis_cap_ = std::min<Index>(n_ - 1, std::max<Index>(48, 3 * count + 24));
        if (n_ <= 600) basis_cap_ = n_ - 1;  // small graphs: allow full exhaustion
        keep_ = std::max<Index>(1, std::min<Index>(count + 12, basis_cap_ - 2));
        breakdown_tol_ = Scalar(1e-12) * std::max(Scalar(1), 2 * g.degrees().maxCoeff());
        basis_.resize(n_, basis_cap_);
        projected_ = Matrix<Scalar>::Zero(basis_cap_, basis_cap_);
        locked_.resize(n_, count + 8);
    }

    EigenResult<Scalar> run() {
        if (!draw_fresh_vector()) return finalize();
        while (iterations_ < max_iterations_) {
            const bool have_continuation = expand();
            Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> ritz(
                projected_.topLeftCorner(basis_size_, basis_size_));
            const bool locked_any = lock_converged(ritz, !have_continuation);
            if (done_) return finalize();
            if (!have_continuation && !fresh_pending_) {
                // invariant subspace and lock_converged did not already draw
                if (!draw_fresh_vector()) return finalize();
            }
            fresh_pending_ = false;
            if (!locked_any && verifying_ && exploration_armed_ && window_cleared())
                return finalize();
            if (basis_size_ == basis_cap_) restart(ritz);
        }
        return fail_unconverged();
    }

private:
    // Removes the components of v along ones, the locked vectors, and the
    // active basis. Two passes, plus a third if heavy cancellation occurred.
    void project_out(Vector<Scalar>& v) const {
        for (int pass = 0; pass < 3; ++pass) {
            const Scalar before = v.norm();
            v.array() -= v.mean();
            if (locked_count_ > 0) {
                const auto locked = locked_.leftCols(locked_count_);
                v.noalias() -= locked * (locked.transpose() * v);
            }
            if (basis_size_ > 0) {
                const auto basis = basis_.leftCols(basis_size_);
                v.noalias() -= basis * (basis.transpose() * v);
            }
            if (pass >= 1 && v.norm() > Scalar(0.5) * before) break;
        }
    }

    // Points next_ at a random direction in the unexplored complement;
    // false when the complement is (numerically) empty.
    bool draw_fresh_vector() {
        for (int attempt = 0; attempt < 4; ++attempt) {
            Vector<Scalar> v = random_gaussian_vector<Scalar>(n_, rng_);
            const Scalar original = v.norm();
            project_out(v);
            if (v.norm() > Scalar(1e-8) * original) {
                next_ = v / v.norm();
                return true;
            }
        }
        return false;
    }

    // One Lanczos step: append next_, record its projected column, and
    // orthogonalize the residual to get the continuation vector. Returns
    // false on breakdown (no continuation direction).
    bool expand() {
        if (arm_on_next_expand_) {
            exploration_armed_ = true;
            arm_on_next_expand_ = false;
        }
        basis_.col(basis_size_) = next_;
        ++basis_size_;
        ++iterations_;
        const auto basis = basis_.leftCols(basis_size_);
        const Vector<Scalar> image = laplacian_apply(graph_, next_);
        const Vector<Scalar> coeffs = basis.transpose() * image;
        projected_.col(basis_size_ - 1).head(basis_size_) = coeffs;
        projected_.row(basis_size_ - 1).head(basis_size_) = coeffs.transpose();
        Vector<Scalar> residual = image - basis * coeffs;
        project_out(residual);
        const Scalar beta = residual.norm();
        if (beta > breakdown_tol_) {
            next_ = residual / beta;
            last_beta_ = beta;
            return true;
        }
        last_beta_ = Scalar(0);
        return false;
    }

    bool pair_converged(Scalar theta, const Vector<Scalar>& y, Scalar* out_residual) const {
        const Scalar res = (laplacian_apply(graph_, y) - theta * y).norm();
        if (out_residual) *out_residual = res;
        return res <= tol_ * std::max(Scalar(1), std::abs(theta));
    }

    // Locks the ascending prefix of converged Ritz pairs, then compresses
    // the basis to the remaining Ritz vectors.
    bool lock_converged(const Eigen::SelfAdjointEigenSolver<Matrix<Scalar>>& ritz,
                        bool subspace_exact) {
        const Index m = basis_size_;
        const auto& theta = ritz.eigenvalues();
        const auto& s = ritz.eigenvectors();

        Index lock_count = 0;
        for (Index i = 0; i < m; ++i) {
            const Scalar estimate =
                subspace_exact ? Scalar(0) : last_beta_ * std::abs(s(m - 1, i));
            if (estimate > tol_ * std::max(Scalar(1), std::abs(theta[i]))) break;
            Vector<Scalar> y = basis_.leftCols(m) * s.col(i);
            y /= y.norm();
            if (!pair_converged(theta[i], y, nullptr)) break;
            accept_lock(theta[i], y);
            ++lock_count;
            if (done_) return true;
        }
        if (lock_count == 0) return false;

        const Index rest = m - lock_count;
        if (rest > 0) {
            const Matrix<Scalar> compressed = basis_.leftCols(m) * s.rightCols(rest);
            basis_.leftCols(rest) = compressed;
        }
        basis_size_ = rest;
        projected_.setZero();
        projected_.diagonal().head(rest) = theta.tail(rest);
        return true;
    }

    void accept_lock(Scalar value, const Vector<Scalar>& vec) {
        if (locked_count_ == locked_.cols()) locked_.conservativeResize(n_, locked_.cols() + 8);
        locked_.col(locked_count_) = vec;
        ++locked_count_;
        locked_values_.push_back(value);

        if (locked_count_ < count_) return;
        if (!verifying_ || value < window_threshold()) {
            // Entering verification, or a missed copy inside the window was
            // just incorporated: explore again from a fresh direction.
            verifying_ = true;
            stable_checks_ = 0;
            if (draw_fresh_vector())
                fresh_pending_ = true;
            else
                done_ = true;  // complement empty, nothing left to miss
        } else {
            done_ = true;  // converged above the window: nothing below remains
        }
    }

    // Lower edge of the accepted window, with slack for tol-level ties.
    Scalar window_threshold() const {
        std::vector<Scalar> sorted(locked_values_);
        std::nth_element(sorted.begin(), sorted.begin() + (count_ - 1), sorted.end());
        const Scalar top = sorted[count_ - 1];
        return top - Scalar(10) * tol_ * std::max(Scalar(1), std::abs(top));
    }

    // Verification shortcut: when the active smallest Ritz value minus its
    // residual stays above the accepted window for several consecutive
    // steps, no missed copy below the window is plausible.
    bool window_cleared() {
        if (basis_size_ == 0) return false;
        Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> ritz(
            projected_.topLeftCorner(basis_size_, basis_size_));
        Vector<Scalar> y = basis_.leftCols(basis_size_) * ritz.eigenvectors().col(0);
        const Scalar norm = y.norm();
        if (norm <= Scalar(0)) return false;
        y /= norm;
        const Scalar theta = ritz.eigenvalues()[0];
        Scalar res = Scalar(0);
        pair_converged(theta, y, &res);
        if (theta - res > window_threshold())
            ++stable_checks_;
        else
            stable_checks_ = 0;
        if (stable_checks_ >= 8) {
            done_ = true;
            return true;
        }
        return false;
    }

    // Thick restart: compress to the keep_ smallest Ritz pairs; next_ still
    // holds the normalized residual and continues the recurrence.
    void restart(const Eigen::SelfAdjointEigenSolver<Matrix<Scalar>>& ritz) {
        const Index m = basis_size_;
        const Index kept = std::min(keep_, m - 1);
        const Matrix<Scalar> compressed = basis_.leftCols(m) * ritz.eigenvectors().leftCols(kept);
        basis_.leftCols(kept) = compressed;
        basis_size_ = kept;
        projected_.setZero();
        projected_.diagonal().head(kept) = ritz.eigenvalues().head(kept);
    }

    EigenResult<Scalar> finalize() {
        if (locked_count_ < count_) return fail_unconverged();
        std::vector<Index> order(locked_count_);
        std::iota(order.begin(), order.end(), Index(0));
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
            return locked_values_[a] < locked_values_[b];
        });
        EigenResult<Scalar> out;
        out.values.resize(count_);
        out.vectors.resize(n_, count_);
        out.residuals.resize(count_);
        for (Index i = 0; i < count_; ++i) {
            out.values[i] = locked_values_[order[i]];
            out.vectors.col(i) = locked_.col(order[i]);
            out.residuals[i] = (laplacian_apply(graph_, out.vectors.col(i)) -
                                out.values[i] * out.vectors.col(i))
                                   .norm();
        }
        return out;
    }

    EigenResult<Scalar> fail_unconverged() const {
        std::vector<double> residuals;
        if (basis_size_ > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> ritz(
                projected_.topLeftCorner(basis_size_, basis_size_));
            for (Index i = 0; i < std::min(basis_size_, count_); ++i) {
                Vector<Scalar> y = basis_.leftCols(basis_size_) * ritz.eigenvectors().col(i);
                y /= y.norm();
                Scalar res = Scalar(0);
                pair_converged(ritz.eigenvalues()[i], y, &res);
                residuals.push_back(static_cast<double>(res));
            }
        }
        throw convergence_error("Lanczos did not converge within " +
                                    std::to_string(max_iterations_) + " iterations",
                                std::move(residuals));
    }

    const Graph<Scalar>& graph_;
    Index n_;
    Index count_;
    Scalar tol_;
    std::mt19937_64 rng_;

    Index max_iterations_ = 0;
    Index basis_cap_ = 0;
    Index keep_ = 0;
    Scalar breakdown_tol_ = Scalar(0);

    Matrix<Scalar> basis_;      // active Lanczos/Ritz basis, n x basis_cap_
    Matrix<Scalar> projected_;  // basis' L basis
    Index basis_size_ = 0;
    Vector<Scalar> next_;       // next expansion vector (unit)
    Scalar last_beta_ = Scalar(0);

    Matrix<Scalar> locked_;
    std::vector<Scalar> locked_values_;
    Index locked_count_ = 0;

    Index iterations_ = 0;
    bool verifying_ = false;
    bool fresh_pending_ = false;
    bool done_ = false;
    int stable_checks_ = 0;
};

}  // namespace detail

/// The `count` smallest Laplacian eigenpairs above the trivial zero pair,
/// computed matrix-free. Deterministic for a fixed options seed.
template <class Scalar>
EigenResult<Scalar> smallest_nontrivial_eigenpairs(const Graph<Scalar>& g, Index count,
                                                   const LanczosOptions<Scalar>& opt = {}) {
    if (count < 1 || count > g.n() - 1)
        throw std::invalid_argument("count must lie in [1, n-1]");
    if (!connected(g)) throw std::invalid_argument("graph is not connected");
    return detail::LanczosSolver<Scalar>(g, count, opt).run();
}

template <class Scalar>
EigenResult<Scalar> smallest_nontrivial_eigenpairs(const Graph<Scalar>& g, Index count,
                                                   Scalar tol) {
    LanczosOptions<Scalar> opt;
    opt.tol = tol;
    return smallest_nontrivial_eigenpairs(g, count, opt);
}

}  // namespace specpart
