#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>

namespace piezobeam {

struct ModeSet {
    Eigen::VectorXd omega;       ///< angular frequencies [rad/s], ascending; 0 for zero modes
    Eigen::VectorXd eigenvalue;  ///< omega^2 as computed (may be slightly negative for zero modes)
    Eigen::MatrixXd shapes;      ///< M-orthonormal columns
    int zero_mode_count = 0;
    int iterations = 0;

    Eigen::Index size() const { return omega.size(); }
};

struct EigenOptions {
    /// Shift of the shift-invert operator; default is a tiny negative
    /// multiple of the largest eigenvalue so that K - sigma M is SPD even
    /// with rigid modes.
    std::optional<double> shift;
    /// Modes with |lambda| < zero_tolerance * (largest Ritz value of the
    /// iteration block) are zero modes.
    double zero_tolerance = 1e-8;
    /// Relative residual |K phi - lambda M phi| / (|K phi| + |lambda M phi|).
    double tolerance = 1e-9;
    int max_iterations = 500;
};

/// Lowest `n_modes` generalized eigenpairs of K phi = lambda M phi by
/// shift-invert subspace iteration with Rayleigh-Ritz. M must be SPD and K
/// symmetric positive semidefinite. Throws ConvergenceFailure.
ModeSet eigenmodes(const Eigen::SparseMatrix<double>& M, const Eigen::SparseMatrix<double>& K, int n_modes,
                   const EigenOptions& options = {});

/// Largest generalized eigenvalue, estimated by power iteration on M^-1 K.
double estimate_lambda_max(const Eigen::SparseMatrix<double>& M, const Eigen::SparseMatrix<double>& K,
                           int iterations = 60);

}  // namespace piezobeam
