#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace specpart {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Failure of an iterative numerical procedure (as opposed to bad input).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigensolver ran out of iterations. Carries the residual norms of the
/// pairs it was still working on.
class convergence_error : public numerical_error {
public:
    convergence_error(const std::string& what, std::vector<double> residuals)
        : numerical_error(what), residuals(std::move(residuals)) {}

    std::vector<double> residuals;
};

/// splitmix64 finalizer; decorrelates consecutive or structured inputs.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-seed for stream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

template <class Scalar>
Vector<Scalar> random_gaussian_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<Scalar> gauss(Scalar(0), Scalar(1));
    Vector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

/// Haar-distributed random orthogonal matrix: QR of a Gaussian matrix with
/// the R diagonal signs folded into Q.
template <class Scalar>
Matrix<Scalar> random_orthogonal(Index dim, std::mt19937_64& rng) {
    std::normal_distribution<Scalar> gauss(Scalar(0), Scalar(1));
    Matrix<Scalar> a(dim, dim);
    for (Index j = 0; j < dim; ++j)
        for (Index i = 0; i < dim; ++i) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
    Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(dim, dim);
    Matrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j)
        if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
    return q;
}

}  // namespace specpart
