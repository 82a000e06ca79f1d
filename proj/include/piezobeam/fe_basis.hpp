#pragma once

#include <array>
#include <span>

namespace piezobeam {

enum class BasisKind { P1, P2, Hermite };

constexpr int local_dof_count(BasisKind kind) {
    switch (kind) {
        case BasisKind::P1: return 2;
        case BasisKind::P2: return 3;
        case BasisKind::Hermite: return 4;
    }
    return 0;
}

constexpr int polynomial_degree(BasisKind kind) {
    switch (kind) {
        case BasisKind::P1: return 1;
        case BasisKind::P2: return 2;
        case BasisKind::Hermite: return 3;
    }
    return 0;
}

/// Local shape functions on an element of length `le`, parametrised by
/// xi in [0, 1]. Returns the `order`-th derivative with respect to xi
/// (multiply by le^-order for the physical derivative). Hermite rotation
/// functions carry their factor le, so nodal dofs are (w, w').
///
/// P1 local order: (left, right). P2: (left, mid, right).
/// Hermite: (w_left, w'_left, w_right, w'_right).
std::array<double, 4> shape_reference(BasisKind kind, double xi, double le, int order);

struct QuadratureRule {
    std::span<const double> points;   ///< on [0, 1]
    std::span<const double> weights;  ///< sum to 1
};

/// Gauss-Legendre rule with n points (1 <= n <= 5) mapped to [0, 1].
QuadratureRule gauss_rule(int n);

/// Fewest Gauss points integrating a polynomial of the given degree exactly.
constexpr int gauss_points_for_degree(int degree) { return degree <= 1 ? 1 : (degree + 2) / 2; }

/// le^p for small integer p.
double length_power(double le, int p);

}  // namespace piezobeam
