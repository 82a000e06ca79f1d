#include "piezobeam/fe_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace piezobeam {

std::array<double, 4> shape_reference(BasisKind kind, double xi, double le, int order) {
    std::array<double, 4> n{0.0, 0.0, 0.0, 0.0};
    switch (kind) {
        case BasisKind::P1:
            if (order == 0) {
                n[0] = 1.0 - xi;
                n[1] = xi;
            } else if (order == 1) {
                n[0] = -1.0;
                n[1] = 1.0;
            }
            break;
        case BasisKind::P2:
            if (order == 0) {
                n[0] = (1.0 - xi) * (1.0 - 2.0 * xi);
                n[1] = 4.0 * xi * (1.0 - xi);
                n[2] = xi * (2.0 * xi - 1.0);
            } else if (order == 1) {
                n[0] = 4.0 * xi - 3.0;
                n[1] = 4.0 - 8.0 * xi;
                n[2] = 4.0 * xi - 1.0;
            } else if (order == 2) {
                n[0] = 4.0;
                n[1] = -8.0;
                n[2] = 4.0;
            }
            break;
        case BasisKind::Hermite: {
            const double x2 = xi * xi;
            const double x3 = x2 * xi;
            if (order == 0) {
                n[0] = 1.0 - 3.0 * x2 + 2.0 * x3;
                n[1] = le * (xi - 2.0 * x2 + x3);
                n[2] = 3.0 * x2 - 2.0 * x3;
                n[3] = le * (x3 - x2);
            } else if (order == 1) {
                n[0] = -6.0 * xi + 6.0 * x2;
                n[1] = le * (1.0 - 4.0 * xi + 3.0 * x2);
                n[2] = 6.0 * xi - 6.0 * x2;
                n[3] = le * (3.0 * x2 - 2.0 * xi);
            } else if (order == 2) {
                n[0] = -6.0 + 12.0 * xi;
                n[1] = le * (-4.0 + 6.0 * xi);
                n[2] = 6.0 - 12.0 * xi;
                n[3] = le * (6.0 * xi - 2.0);
            } else if (order == 3) {
                n[0] = 12.0;
                n[1] = 6.0 * le;
                n[2] = -12.0;
                n[3] = 6.0 * le;
            }
            break;
        }
    }
    return n;
}

namespace {

// Gauss-Legendre nodes/weights on [0, 1].
constexpr double kP1[] = {0.5};
constexpr double kW1[] = {1.0};
constexpr double kP2[] = {0.21132486540518711775, 0.78867513459481288225};
constexpr double kW2[] = {0.5, 0.5};
constexpr double kP3[] = {0.11270166537925831148, 0.5, 0.88729833462074168852};
constexpr double kW3[] = {0.27777777777777777778, 0.44444444444444444444, 0.27777777777777777778};
constexpr double kP4[] = {0.06943184420297371239, 0.33000947820757186760, 0.66999052179242813240,
                          0.93056815579702628761};
constexpr double kW4[] = {0.17392742256872692869, 0.32607257743127307131, 0.32607257743127307131,
                          0.17392742256872692869};
constexpr double kP5[] = {0.04691007703066800360, 0.23076534494715845448, 0.5, 0.76923465505284154552,
                          0.95308992296933199640};
constexpr double kW5[] = {0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
                          0.23931433524968323402, 0.11846344252809454376};

}  // namespace

QuadratureRule gauss_rule(int n) {
    switch (n) {
        case 1: return {kP1, kW1};
        case 2: return {kP2, kW2};
        case 3: return {kP3, kW3};
        case 4: return {kP4, kW4};
        case 5: return {kP5, kW5};
        default: throw std::out_of_range("gauss_rule supports 1..5 points");
    }
}

double length_power(double le, int p) {
    switch (p) {
        case 0: return 1.0;
        case 1: return le;
        case -1: return 1.0 / le;
        default: return std::pow(le, p);
    }
}

}  // namespace piezobeam
