#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace piezobeam::oracles {

/// Bisection on a sign change of f in [lo, hi] down to |hi - lo| <= tol.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::invalid_argument("bisect: no sign change");
    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// k-th positive root of cos(x) cosh(x) = 1 (free-free beam), written as
/// cos(x) - 1/cosh(x) = 0 to stay well scaled. The k-th root lies in
/// ((k + 1/2) pi - 1/2, (k + 1/2) pi + 1/2).
inline double free_free_beam_root(int k) {
    const double c = (k + 0.5) * std::numbers::pi;
    return bisect([](double x) { return std::cos(x) - 1.0 / std::cosh(x); }, c - 0.5, c + 0.5);
}

/// Eigenvalues of the symmetric 2x2 problem diag(1/a, 1/b) [[p, r], [r, s]],
/// via the closed-form characteristic polynomial, descending.
inline std::pair<double, double> eig2(double a, double b, double p, double r, double s) {
    const double tr = p / a + s / b;
    const double det = (p * s - r * r) / (a * b);
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

}  // namespace piezobeam::oracles
