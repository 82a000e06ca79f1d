#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "piezobeam/dof_layout.hpp"
#include "piezobeam/mesh.hpp"
#include "piezobeam/model.hpp"

namespace piezobeam {

/// The `order`-th spatial derivative of one field.
struct FieldDerivative {
    Field field;
    int order;
};

enum class Support { Whole, Patch };
enum class Integration { Exact, OnePoint };

/// Energy density 1/2 y^T C y over a tuple y of field derivatives, with one
/// coefficient matrix on patch elements and one elsewhere. Single-beam
/// forms use `outside` everywhere.
struct QuadraticForm {
    std::string name;
    std::vector<FieldDerivative> rows;
    Eigen::MatrixXd inside;
    Eigen::MatrixXd outside;
    Support support = Support::Whole;
    Integration integration = Integration::Exact;
};

/// Work of one voltage signal: W = V_signal(t) * int c^T y dx.
struct LinearForm {
    std::string name;
    std::vector<FieldDerivative> rows;
    Eigen::VectorXd inside;
    Eigen::VectorXd outside;
    Support support = Support::Whole;
    std::size_t signal = 0;
};

struct EnergyOptions {
    /// One-point Gauss rule for the Timoshenko shear term (locking remedy).
    bool reduced_shear_integration = true;
    /// Test hook: flips the sign of the bottom patch's electromechanical
    /// coupling, breaking the top/bottom symmetry.
    bool flip_bottom_coupling = false;
};

/// All energies of one model, per unit width. `kinetic` holds the mechanical
/// kinetic energy (a form in the velocities), `magnetic` the magnetic energy.
struct EnergyModel {
    Variant variant;
    Regime regime;
    std::vector<QuadraticForm> stored;
    std::vector<QuadraticForm> kinetic;
    std::vector<QuadraticForm> magnetic;
    std::vector<LinearForm> work;
    std::vector<VoltageSignal> voltages;
};

EnergyModel build_energy_model(const ValidatedModelSpec& spec, const EnergyOptions& options = {});

struct EnergyBreakdown {
    double kinetic_mech = 0.0;
    double stored = 0.0;
    double magnetic = 0.0;
    double total() const { return kinetic_mech + stored + magnetic; }
};

/// Quadrature rule actually used for a form on the given layout.
int quadrature_points(const QuadraticForm& form, const DofLayout& layout);

/// int 1/2 y^T C y dx for the field coefficients `x` (full, unconstrained layout).
double evaluate_form(const QuadraticForm& form, const Mesh& mesh, const DofLayout& layout,
                     const Eigen::VectorXd& x);
/// int c^T y dx.
double evaluate_form(const LinearForm& form, const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& x);

double stored_energy(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                     const Eigen::VectorXd& fields);

/// Mechanical kinetic plus magnetic energy of the velocity fields.
double kinetic_energy(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                      const Eigen::VectorXd& velocities);

EnergyBreakdown energy_breakdown(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                                 const Eigen::VectorXd& fields, const Eigen::VectorXd& velocities);

/// Power delivered by the voltages: dW/dt along the trajectory,
/// e.g. -V(t) [qdot(L) - qdot(0)] for a single beam.
double work_rate(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                 const Eigen::VectorXd& velocities, double t);

struct PointwiseFields {
    double S11 = 0.0, S13 = 0.0;
    double T11 = 0.0, T13 = 0.0;
    double E3 = 0.0, E1 = 0.0;
    double D3 = 0.0, D1 = 0.0;
    double B2 = 0.0;
    double U1 = 0.0, U3 = 0.0;
};

/// Displacements, strains, stresses and electromagnetic fields at (x, z).
/// Patch variants: |z| <= h0 is the elastic core, h0 < |z| <= h0 + h1 a patch
/// (only over [a, b]). In the electrostatic regime D3 is the statically
/// condensed value, which depends on V(t). Throws OutOfDomain.
PointwiseFields recover_pointwise(const ValidatedModelSpec& spec, const Mesh& mesh, const DofLayout& layout,
                                  const Eigen::VectorXd& fields, const Eigen::VectorXd& velocities, double x,
                                  double z, double t = 0.0);

}  // namespace piezobeam
