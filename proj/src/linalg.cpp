#include "piezobeam/linalg.hpp"

#include <cmath>
#include <cstring>

#include "piezobeam/errors.hpp"

namespace piezobeam {

namespace {

constexpr std::uint64_t fnv_offset = 1469598103934665603ULL;
constexpr std::uint64_t fnv_prime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= fnv_prime;
    }
}

void require_square(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols) throw Error(ErrorCode::FieldShapeMismatch, "matrix to factor is not square");
}

// LLT does not detect every indefinite input (it only checks the pivot sign
// of the computed factor), so non-finite or non-positive pivots are rejected
// explicitly.
void check_dense(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
        const auto d = llt.matrixLLT().diagonal();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (!(d[i] > 0.0) || !std::isfinite(d[i])) ok = false;
        }
    }
    if (!ok) throw Error(ErrorCode::NotPositiveDefinite, "matrix is not positive definite");
}

}  // namespace

std::uint64_t matrix_fingerprint(const Eigen::SparseMatrix<double>& a) {
    std::uint64_t h = fnv_offset;
    const Eigen::Index dims[2] = {a.rows(), a.cols()};
    fnv_mix(h, dims, sizeof dims);
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
            const Eigen::Index idx[2] = {it.row(), it.col()};
            const double v = it.value();
            fnv_mix(h, idx, sizeof idx);
            fnv_mix(h, &v, sizeof v);
        }
    }
    return h;
}

SymmetricFactor::SymmetricFactor(const Eigen::SparseMatrix<double>& a) : size_(a.rows()) {
    require_square(a.rows(), a.cols());
    fingerprint_ = matrix_fingerprint(a);
    if (size_ < dense_limit) {
        auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(Eigen::MatrixXd(a));
        check_dense(*llt);
        dense_ = std::move(llt);
        return;
    }
    auto llt = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(a);
    if (llt->info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "sparse matrix is not positive definite");
    }
    sparse_ = std::move(llt);
}

SymmetricFactor::SymmetricFactor(const Eigen::MatrixXd& a) : size_(a.rows()) {
    require_square(a.rows(), a.cols());
    fingerprint_ = matrix_fingerprint(a.sparseView(0.0, 0.0));
    auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(a);
    check_dense(*llt);
    dense_ = std::move(llt);
}

Eigen::VectorXd SymmetricFactor::solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != size_) throw Error(ErrorCode::FieldShapeMismatch, "right-hand side has the wrong size");
    if (dense_) return dense_->solve(rhs);
    return sparse_->solve(rhs);
}

Eigen::MatrixXd SymmetricFactor::solve(const Eigen::MatrixXd& rhs) const {
    if (rhs.rows() != size_) throw Error(ErrorCode::FieldShapeMismatch, "right-hand side has the wrong size");
    if (dense_) return dense_->solve(rhs);
    return sparse_->solve(rhs);
}

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs) {
    return SymmetricFactor(a).solve(rhs);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    return SymmetricFactor(a).solve(rhs);
}

}  // namespace piezobeam
