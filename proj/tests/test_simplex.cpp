#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "specpart/simplex.hpp"
#include "test_support.hpp"

using namespace specpart;

TEST_CASE("regular simplex Gram matrix is delta_rs - 1/k") {
    for (int k = 2; k <= 10; ++k) {
        const Eigen::MatrixXd w = regular_simplex<double>(k);
        REQUIRE(w.rows() == k);
        REQUIRE(w.cols() == k - 1);
        const Eigen::MatrixXd gram = w * w.transpose();
        const Eigen::MatrixXd expected =
            Eigen::MatrixXd::Identity(k, k).array() - 1.0 / k;
        CHECK((gram - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(w.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
        // Gram row sums vanish
        CHECK(gram.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(regular_simplex<double>(1), std::invalid_argument);
}

TEST_CASE("regular simplex small cases match closed forms") {
    const Eigen::MatrixXd w2 = regular_simplex<double>(2);
    CHECK(w2(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(w2(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));

    const Eigen::MatrixXd w3 = regular_simplex<double>(3);
    CHECK(w3(0, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(w3(0, 1) == doctest::Approx(0.0));
    CHECK(w3(1, 0) == doctest::Approx(-std::sqrt(1.0 / 6.0)));
    CHECK(w3(1, 1) == doctest::Approx(std::sqrt(0.5)));
    CHECK(w3(2, 0) == doctest::Approx(-std::sqrt(1.0 / 6.0)));
    CHECK(w3(2, 1) == doctest::Approx(-std::sqrt(0.5)));
}

namespace {

// The two identities S^T 1 = 0 and S^T S = I, checked on the group-vector
// side with size weights.
void check_group_vector_identities(const GroupVectors<double>& gv,
                                   const PartitionSpec& spec) {
    const int k = spec.k;
    Eigen::VectorXd weighted_sum = Eigen::VectorXd::Zero(k - 1);
    Eigen::MatrixXd weighted_outer = Eigen::MatrixXd::Zero(k - 1, k - 1);
    for (int r = 0; r < k; ++r) {
        const double nr = static_cast<double>(spec.target_sizes[r]);
        weighted_sum += nr * gv.transformed.row(r).transpose();
        weighted_outer +=
            nr * gv.transformed.row(r).transpose() * gv.transformed.row(r);
    }
    CHECK(weighted_sum.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((weighted_outer - Eigen::MatrixXd::Identity(k - 1, k - 1))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

}  // namespace

TEST_CASE("size transform enforces the normalization identities") {
    std::mt19937_64 rng(41);
    for (int k = 2; k <= 8; ++k) {
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_int_distribution<Index> nd(k, 400);
            const PartitionSpec spec = testsup::random_spec(nd(rng), k, rng);
            const auto gv = size_transform<double>(spec);
            check_group_vector_identities(gv, spec);
        }
    }
}

TEST_CASE("equal sizes give zero shift and sqrt(k/n) scaling") {
    const Index n = 120;
    for (int k : {2, 3, 4, 6}) {
        const PartitionSpec spec = equal_sizes(n, k);
        const auto gv = size_transform<double>(spec);
        CHECK(gv.shift.cwiseAbs().maxCoeff() < 1e-12);
        const double expected = std::sqrt(static_cast<double>(k) / n);
        for (Index i = 0; i < k - 1; ++i)
            CHECK(gv.scale[i] == doctest::Approx(expected));
    }
}

TEST_CASE("k=2 shift matches the closed form (n1-n2)/(n sqrt 2)") {
    PartitionSpec spec;
    spec.k = 2;
    spec.target_sizes = {70, 30};
    const auto gv = size_transform<double>(spec);
    const double expected = (70.0 - 30.0) / (100.0 * std::sqrt(2.0));
    CHECK(gv.shift[0] == doctest::Approx(expected));
}

TEST_CASE("encoded assignment matrix obeys S^T 1 = 0 and S^T S = I") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> kd(2, 7);
        const int k = kd(rng);
        std::uniform_int_distribution<Index> nd(k, 300);
        const PartitionSpec spec = testsup::random_spec(nd(rng), k, rng);
        const auto gv = size_transform<double>(spec);
        const auto assignment = testsup::assignment_with_sizes(spec.target_sizes, rng);
        const Eigen::MatrixXd s = encode_assignment(gv, assignment);
        CHECK((s.transpose() * Eigen::VectorXd::Ones(s.rows())).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((s.transpose() * s - Eigen::MatrixXd::Identity(k - 1, k - 1))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("pair_eigenvalues matches largest with largest") {
    Eigen::VectorXd values(2), scale(2);
    values << 1.0, 2.0;
    scale << 0.5, 0.9;
    const auto order = pair_eigenvalues(values, scale);
    // axis 0 carries D=0.5 and must get lambda=1; axis 1 carries D=0.9 -> lambda=2
    CHECK(order[0] == 0);
    CHECK(order[1] == 1);

    Eigen::VectorXd flipped(2);
    flipped << 0.9, 0.5;
    const auto order2 = pair_eigenvalues(values, flipped);
    CHECK(order2[0] == 1);
    CHECK(order2[1] == 0);

    Eigen::VectorXd bad(3);
    CHECK_THROWS_AS(pair_eigenvalues(values, bad), std::invalid_argument);
}

TEST_CASE("pair_eigenvalues minimizes the relaxed cost over all pairings") {
    auto cost = [](const Eigen::VectorXd& values, const Eigen::VectorXd& scale,
                   const std::vector<Index>& order) {
        double total = 0.0;
        for (std::size_t axis = 0; axis < order.size(); ++axis)
            total += values[order[axis]] / (scale[axis] * scale[axis]);
        return 0.5 * total;
    };

    SUBCASE("documented 3-entry example") {
        Eigen::VectorXd values(3), scale(3);
        values << 1.0, 2.0, 3.0;
        scale << 3.0, 1.0, 2.0;
        const auto order = pair_eigenvalues(values, scale);
        const double chosen = cost(values, scale, order);
        std::vector<Index> perm = {0, 1, 2};
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, cost(values, scale, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(chosen == doctest::Approx(best));
        // largest lambda (index 2) sits on the largest-D axis (axis 0)
        CHECK(order[0] == 2);
    }

    SUBCASE("random instances, exhaustive check") {
        std::mt19937_64 rng(57);
        std::uniform_real_distribution<double> val(0.0, 5.0);
        for (int m = 1; m <= 6; ++m) {
            for (int trial = 0; trial < 20; ++trial) {
                Eigen::VectorXd values(m), scale(m);
                for (int i = 0; i < m; ++i) values[i] = val(rng);
                for (int i = 0; i < m; ++i) scale[i] = 0.1 + val(rng);
                std::sort(values.data(), values.data() + m);
                const auto order = pair_eigenvalues(values, scale);
                const double chosen = cost(values, scale, order);
                std::vector<Index> perm(m);
                std::iota(perm.begin(), perm.end(), Index(0));
                double best = std::numeric_limits<double>::infinity();
                do {
                    best = std::min(best, cost(values, scale, perm));
                } while (std::next_permutation(perm.begin(), perm.end()));
                CHECK(chosen == doctest::Approx(best).epsilon(1e-12));
            }
        }
    }

    SUBCASE("equal scale entries: any pairing has the same cost") {
        Eigen::VectorXd values(3), scale(3);
        values << 1.0, 2.0, 5.0;
        scale << 0.4, 0.4, 0.4;
        const auto order = pair_eigenvalues(values, scale);
        std::vector<Index> sorted(order);
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<Index>{0, 1, 2});  // a permutation
        // stable tie break: ascending order preserved
        CHECK(order == std::vector<Index>{0, 1, 2});
    }
}

TEST_CASE("spec validation") {
    PartitionSpec spec;
    spec.k = 2;
    spec.target_sizes = {2, 3};
    CHECK_NOTHROW(validate_spec(spec, 5));
    CHECK_THROWS_AS(validate_spec(spec, 6), std::invalid_argument);
    spec.target_sizes = {5, 0};
    CHECK_THROWS_AS(validate_spec(spec, 5), std::invalid_argument);
    spec.k = 1;
    spec.target_sizes = {5};
    CHECK_THROWS_AS(validate_spec(spec, 5), std::invalid_argument);
    CHECK_THROWS_AS(equal_sizes(3, 4), std::invalid_argument);
    const PartitionSpec eq = equal_sizes(10, 3);
    CHECK(eq.target_sizes == std::vector<Index>{4, 3, 3});
}
