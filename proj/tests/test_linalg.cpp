#include <gtest/gtest.h>

#include <random>

#include "piezobeam/errors.hpp"
#include "piezobeam/linalg.hpp"

using namespace piezobeam;

namespace {

Eigen::SparseMatrix<double> tridiagonal(Eigen::Index n, double diag, double off) {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index i = 0; i < n; ++i) {
        t.emplace_back(i, i, diag);
        if (i + 1 < n) {
            t.emplace_back(i, i + 1, off);
            t.emplace_back(i + 1, i, off);
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

}  // namespace

TEST(SolveSpd, IdentityReturnsRhs) {
    Eigen::SparseMatrix<double> id(4, 4);
    id.setIdentity();
    const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
    EXPECT_EQ(solve_spd(id, rhs), rhs);
}

TEST(SolveSpd, TwoByTwo) {
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    const Eigen::VectorXd x = solve_spd(a, Eigen::Vector2d(3, 3));
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(SolveSpd, IndefiniteInputIsRejected) {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 2, 1;
    try {
        solve_spd(a, Eigen::Vector2d(1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    }
    try {
        solve_spd(tridiagonal(3000, 1.0, 2.0), Eigen::VectorXd::Ones(3000));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    }
}

TEST(SymmetricFactor, DenseAndSparsePathsHaveSmallResidual) {
    for (Eigen::Index n : {50, 2500}) {
        const auto a = tridiagonal(n, 4.0, -1.0);
        const SymmetricFactor f(a);
        EXPECT_EQ(f.is_dense(), n < SymmetricFactor::dense_limit);
        std::mt19937_64 rng(1);
        std::normal_distribution<double> d;
        Eigen::VectorXd rhs(n);
        for (auto& r : rhs) r = d(rng);
        const Eigen::VectorXd x = f.solve(rhs);
        EXPECT_LE((a * x - rhs).norm(), 1e-10 * rhs.norm());
    }
}

TEST(SymmetricFactor, FingerprintTracksMatrixEntries) {
    const auto a = tridiagonal(10, 4.0, -1.0);
    auto b = a;
    b.coeffRef(3, 3) = 4.0 + 1e-15;
    EXPECT_EQ(SymmetricFactor(a).fingerprint(), SymmetricFactor(a).fingerprint());
    EXPECT_NE(SymmetricFactor(a).fingerprint(), SymmetricFactor(b).fingerprint());
}
