#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>

namespace piezobeam {

/// Cholesky factor of a symmetric positive definite matrix, reused across
/// solves. Dense below `dense_limit` dofs, sparse (simplicial) above.
/// Immutable after construction, so it can be shared between threads.
class SymmetricFactor {
public:
    static constexpr Eigen::Index dense_limit = 2000;

    /// Throws NotPositiveDefinite.
    explicit SymmetricFactor(const Eigen::SparseMatrix<double>& a);
    explicit SymmetricFactor(const Eigen::MatrixXd& a);

    Eigen::Index size() const { return size_; }
    bool is_dense() const { return dense_ != nullptr; }
    /// Hash of the matrix entries the factor was built from.
    std::uint64_t fingerprint() const { return fingerprint_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

private:
    Eigen::Index size_ = 0;
    std::uint64_t fingerprint_ = 0;
    std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>> dense_;
    std::shared_ptr<const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> sparse_;
};

/// Solves A x = rhs for symmetric positive definite A. Throws NotPositiveDefinite.
Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs);
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs);

/// FNV-1a over the bytes of the matrix entries (column-major, dense view).
std::uint64_t matrix_fingerprint(const Eigen::SparseMatrix<double>& a);

}  // namespace piezobeam
