#include "piezobeam/eigen_modes.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "piezobeam/errors.hpp"
#include "piezobeam/linalg.hpp"

namespace piezobeam {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Deterministic start vectors: smooth and oscillatory columns so that
// every low mode has a component in the initial block.
Eigen::MatrixXd start_block(Eigen::Index n, Eigen::Index p) {
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = static_cast<double>(i + 1) / static_cast<double>(n + 1);
            x(i, j) = std::cos(M_PI * static_cast<double>(j) * s) + 0.1 * std::sin(7.3 * static_cast<double>(i + 1) * (j + 1));
        }
    }
    return x;
}

// Modified Gram-Schmidt in the M inner product, applied twice. Columns that
// lose all their mass are replaced by fresh directions.
void m_orthonormalize(const SpMat& M, Eigen::MatrixXd& x) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            double norm0 = std::sqrt(x.col(j).dot(M * x.col(j)));
            if (norm0 > 0.0) x.col(j) /= norm0;
            Eigen::VectorXd mx = M * x.col(j);
            for (Eigen::Index i = 0; i < j; ++i) x.col(j) -= x.col(i) * x.col(i).dot(mx);
            double norm = std::sqrt(x.col(j).dot(M * x.col(j)));
            if (!(norm > 1e-8)) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(x.rows());
                e[(j * 7919) % x.rows()] = 1.0;
                x.col(j) = e;
                mx = M * x.col(j);
                for (Eigen::Index i = 0; i < j; ++i) x.col(j) -= x.col(i) * x.col(i).dot(mx);
                norm = std::sqrt(x.col(j).dot(M * x.col(j)));
            }
            x.col(j) /= norm;
        }
    }
}

}  // namespace

double estimate_lambda_max(const SpMat& M, const SpMat& K, int iterations) {
    const SymmetricFactor mf(M);
    Eigen::VectorXd x(M.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.01 * static_cast<double>(i % 13));
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        x /= std::sqrt(x.dot(M * x));
        const Eigen::VectorXd kx = K * x;
        lambda = x.dot(kx);
        x = mf.solve(kx);
    }
    return std::abs(lambda);
}

ModeSet eigenmodes(const SpMat& M, const SpMat& K, int n_modes, const EigenOptions& options) {
    const Eigen::Index n = M.rows();
    if (K.rows() != n || M.cols() != n || K.cols() != n) {
        throw Error(ErrorCode::FieldShapeMismatch, "M and K must be square and of equal size");
    }
    if (n_modes < 1 || n_modes > n) {
        throw Error(ErrorCode::FieldShapeMismatch, "n_modes must lie in [1, system size]");
    }
    const double lambda_max = estimate_lambda_max(M, K);
    const double sigma = options.shift.value_or(-1e-10 * lambda_max);
    const SpMat shifted = K - sigma * M;

    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> apply_inverse;
    if (sigma <= 0.0) {
        auto factor = std::make_shared<SymmetricFactor>(shifted);
        apply_inverse = [factor](const Eigen::MatrixXd& r) { return factor->solve(r); };
    } else {
        auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
        lu->compute(shifted);
        if (lu->info() != Eigen::Success) {
            throw Error(ErrorCode::ConvergenceFailure, "shift coincides with an eigenvalue");
        }
        apply_inverse = [lu](const Eigen::MatrixXd& r) { return Eigen::MatrixXd(lu->solve(r)); };
    }

    const Eigen::Index k = n_modes;
    const Eigen::Index p = std::min<Eigen::Index>(n, 2 * k + 8);
    Eigen::MatrixXd x = start_block(n, p);
    m_orthonormalize(M, x);

    ModeSet out;
    Eigen::VectorXd lambda;
    Eigen::VectorXd previous;
    int stagnant = 0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        x = apply_inverse(M * x);
        m_orthonormalize(M, x);

        // Rayleigh-Ritz; x is M-orthonormal so the projected problem is standard.
        Eigen::MatrixXd kr = x.transpose() * (K * x);
        kr = 0.5 * (kr + kr.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kr);
        if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Rayleigh-Ritz failed");
        x = (x * es.eigenvectors()).eval();
        lambda = es.eigenvalues();

        bool converged = true;
        for (Eigen::Index j = 0; j < k && converged; ++j) {
            const Eigen::VectorXd kphi = K * x.col(j);
            const Eigen::VectorXd mphi = M * x.col(j);
            const double denom = kphi.norm() + std::abs(lambda[j]) * mphi.norm();
            const double res = (kphi - lambda[j] * mphi).norm();
            // Zero modes have no scale of their own; their residual is
            // round-off of K, about eps * lambda_max.
            const double scale = std::max(denom, 1e-6 * lambda_max * mphi.norm());
            if (res > options.tolerance * scale) converged = false;
        }
        // Residuals of well-separated low modes bottom out at round-off
        // (about eps * lambda_max / lambda); settled Ritz values end the loop.
        if (previous.size() == lambda.size()) {
            const double change = ((lambda - previous).head(k).cwiseAbs().array() /
                                   (lambda.head(k).cwiseAbs().array() + 1e-8 * lambda_max)).maxCoeff();
            stagnant = change < 1e-14 ? stagnant + 1 : 0;
        }
        previous = lambda;
        if (converged || p == n || stagnant >= 3) {
            out.iterations = it;
            break;
        }
        if (it == options.max_iterations) {
            throw Error(ErrorCode::ConvergenceFailure, "subspace iteration did not converge");
        }
    }

    out.eigenvalue = lambda.head(k);
    out.shapes = x.leftCols(k);
    out.omega.resize(k);
    // Zero modes are judged against the largest Ritz value of the block, not
    // the top of the spectrum: fine Hermite meshes put the first elastic
    // bending eigenvalue below 1e-8 of lambda_max.
    const double ritz_max = lambda.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < k; ++j) {
        const bool zero = std::abs(lambda[j]) < options.zero_tolerance * ritz_max;
        if (zero) ++out.zero_mode_count;
        out.omega[j] = zero ? 0.0 : std::sqrt(std::max(lambda[j], 0.0));
        // Deterministic sign: the largest-magnitude entry is positive.
        Eigen::Index imax = 0;
        out.shapes.col(j).cwiseAbs().maxCoeff(&imax);
        if (out.shapes(imax, j) < 0.0) out.shapes.col(j) *= -1.0;
    }
    return out;
}

}  // namespace piezobeam
