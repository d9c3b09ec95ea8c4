#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "specpart/common.hpp"

namespace specpart {

/// Requested number of groups and their target sizes.
struct PartitionSpec {
    int k = 0;
    std::vector<Index> target_sizes;

    Index total() const {
        return std::accumulate(target_sizes.begin(), target_sizes.end(), Index(0));
    }
};

/// Spec with k groups of as-equal-as-possible sizes summing to n.
inline PartitionSpec equal_sizes(Index n, int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (n < k) throw std::invalid_argument("k exceeds vertex count");
    PartitionSpec spec;
    spec.k = k;
    spec.target_sizes.assign(k, n / k);
    for (Index r = 0; r < n % k; ++r) ++spec.target_sizes[r];
    return spec;
}

inline void validate_spec(const PartitionSpec& spec, Index n) {
    if (spec.k < 2) throw std::invalid_argument("k must be at least 2");
    if (static_cast<int>(spec.target_sizes.size()) != spec.k)
        throw std::invalid_argument("target size list does not match k");
    for (Index s : spec.target_sizes)
        if (s < 1) throw std::invalid_argument("every group size must be at least 1");
    if (spec.total() != n)
        throw std::invalid_argument("target sizes sum to " + std::to_string(spec.total()) +
                                    " but the graph has " + std::to_string(n) + " vertices");
}

/// Vertices of a regular (k-1)-simplex centered on the origin, one row per
/// group vector, satisfying w_r . w_s = delta_rs - 1/k.
template <class Scalar>
Matrix<Scalar> regular_simplex(int k) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    Matrix<Scalar> w = Matrix<Scalar>::Zero(k, k - 1);
    if (k == 2) {
        const Scalar half = std::sqrt(Scalar(1) / Scalar(2));
        w(0, 0) = half;
        w(1, 0) = -half;
        return w;
    }
    // First vertex on axis 0, the rest a (k-1)-simplex in the remaining
    // coordinates at constant offset -1/sqrt(k(k-1)).
    const Scalar kk = Scalar(k);
    w(0, 0) = std::sqrt((kk - 1) / kk);
    const Scalar offset = -Scalar(1) / std::sqrt(kk * (kk - 1));
    Matrix<Scalar> sub = regular_simplex<Scalar>(k - 1);
    for (Index r = 1; r < k; ++r) {
        w(r, 0) = offset;
        w.row(r).tail(k - 2) = sub.row(r - 1);
    }
    return w;
}

/// Simplex group vectors together with the size-dependent affine transform
/// that makes the n-by-(k-1) label matrix S obey S^T 1 = 0 and S^T S = I.
template <class Scalar>
struct GroupVectors {
    Matrix<Scalar> raw;          // k x (k-1), rows are the regular simplex vectors
    Vector<Scalar> shift;        // the translation t
    Matrix<Scalar> rotation;     // the orthogonal Q
    Vector<Scalar> scale;        // diagonal entries of D
    Matrix<Scalar> transformed;  // k x (k-1), row r = D Q (w_r - t)

    int k() const { return static_cast<int>(raw.rows()); }
};

/// Builds the transform from the target sizes: t is the size-weighted simplex
/// centroid, and (Q, D) come from the eigendecomposition of the centered
/// second-moment matrix M = sum_r n_r (w_r - t)(w_r - t)^T = U Delta U^T,
/// with Q = U^T and D = Delta^{-1/2}.
template <class Scalar>
GroupVectors<Scalar> size_transform(const PartitionSpec& spec, const Matrix<Scalar>& raw) {
    if (static_cast<int>(raw.rows()) != spec.k || raw.cols() != spec.k - 1)
        throw std::invalid_argument("simplex vectors do not match the spec's k");
    for (Index s : spec.target_sizes)
        if (s < 1) throw std::invalid_argument("every group size must be at least 1");

    const int k = spec.k;
    const Scalar n = static_cast<Scalar>(spec.total());

    Vector<Scalar> weights(k);
    for (int r = 0; r < k; ++r) weights[r] = static_cast<Scalar>(spec.target_sizes[r]);

    GroupVectors<Scalar> gv;
    gv.raw = raw;
    gv.shift = raw.transpose() * weights / n;

    Matrix<Scalar> centered = raw.rowwise() - gv.shift.transpose();
    Matrix<Scalar> moment = centered.transpose() * weights.asDiagonal() * centered;

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(moment);
    if (eig.info() != Eigen::Success)
        throw numerical_error("eigendecomposition of the simplex moment matrix failed");
    if ((eig.eigenvalues().array() < Scalar(1e-10) * n).any())
        throw std::invalid_argument("degenerate size spec: simplex moment matrix is near-singular");

    gv.rotation = eig.eigenvectors().transpose();
    gv.scale = eig.eigenvalues().array().rsqrt();
    gv.transformed = centered * gv.rotation.transpose() * gv.scale.asDiagonal();
    return gv;
}

template <class Scalar>
GroupVectors<Scalar> size_transform(const PartitionSpec& spec) {
    return size_transform(spec, regular_simplex<Scalar>(spec.k));
}

/// Column order pairing ascending Laplacian eigenvalues with the simplex
/// axes: the largest eigenvalue goes to the axis with the largest D entry,
/// and so on, which minimizes sum_i lambda_i / D_ii^2. Returns `order` with
/// order[axis] = index into the ascending eigenvalue list.
template <class Scalar>
std::vector<Index> pair_eigenvalues(const Vector<Scalar>& values, const Vector<Scalar>& scale) {
    if (values.size() != scale.size())
        throw std::invalid_argument("eigenvalue and scale lists differ in length");
    for (Index i = 0; i < scale.size(); ++i)
        if (!(scale[i] > Scalar(0))) throw std::invalid_argument("scale entries must be positive");
    const Index m = scale.size();
    std::vector<Index> axes(m);
    std::iota(axes.begin(), axes.end(), Index(0));
    std::stable_sort(axes.begin(), axes.end(),
                     [&](Index a, Index b) { return scale[a] < scale[b]; });
    std::vector<Index> order(m);
    for (Index rank = 0; rank < m; ++rank) order[axes[rank]] = rank;
    return order;
}

/// Label matrix S for an assignment: row i is the transformed group vector
/// of vertex i's group.
template <class Scalar>
Matrix<Scalar> encode_assignment(const GroupVectors<Scalar>& gv,
                                 const std::vector<int>& assignment) {
    Matrix<Scalar> s(static_cast<Index>(assignment.size()), gv.transformed.cols());
    for (Index i = 0; i < s.rows(); ++i) {
        const int r = assignment[i];
        if (r < 0 || r >= gv.k()) throw std::invalid_argument("group index out of range");
        s.row(i) = gv.transformed.row(r);
    }
    return s;
}

}  // namespace specpart
