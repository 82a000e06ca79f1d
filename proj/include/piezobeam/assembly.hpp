#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "piezobeam/dof_layout.hpp"
#include "piezobeam/energy_forms.hpp"
#include "piezobeam/mesh.hpp"
#include "piezobeam/model.hpp"

namespace piezobeam {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// M xddot + K x = B V(t), the Hessians of kinetic(+magnetic) and stored
/// energy and the gradient of the voltage work. System dofs are the free
/// dofs of `layout`, in layout order.
struct SemiDiscreteSystem {
    ValidatedModelSpec spec;
    EnergyModel energy;
    Mesh mesh;
    DofLayout layout;
    SparseMatrix M;
    SparseMatrix K;
    Eigen::MatrixXd B;
    std::vector<Eigen::Index> free_dofs;  ///< system dof -> layout dof
    std::vector<Field> dof_field;          ///< field of each system dof

    Eigen::Index size() const { return M.rows(); }
    std::size_t signal_count() const { return static_cast<std::size_t>(B.cols()); }
    Regime regime() const { return spec.regime(); }

    /// System vector -> full layout vector (zeros at eliminated dofs).
    Eigen::VectorXd expand(const Eigen::VectorXd& x) const;
    /// Full layout vector -> system vector.
    Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;

    std::vector<Eigen::Index> dofs_of(Field f) const;
    std::vector<Eigen::Index> mechanical_dofs() const;
    std::vector<Eigen::Index> charge_dofs() const;
    std::vector<Eigen::Index> bending_dofs() const;

    /// Voltage values at time t, one per input column.
    Eigen::VectorXd voltages_at(double t) const;
};

struct AssemblyOptions {
    EnergyOptions energy;
};

/// Assembles the unconstrained system from the energy forms. Throws
/// MeshSpecMismatch if the mesh does not match the geometry.
SemiDiscreteSystem assemble(const ValidatedModelSpec& spec, const Mesh& mesh, const AssemblyOptions& options = {});

/// Eliminates the essential dofs of `bc` (rows and columns deleted).
SemiDiscreteSystem apply_mechanical_bc(const SemiDiscreteSystem& system, MechanicalBc bc);

/// Static elimination of the charge dofs via the Schur complement
/// K_mm - K_mq K_qq^-1 K_qm (one charge dof per field is grounded first).
/// The magnetic mass is dropped. Throws SingularElectricBlock.
SemiDiscreteSystem reduce_electrostatic(const SemiDiscreteSystem& system);

/// Sub-system on the listed fields (rows and columns of other fields dropped).
SemiDiscreteSystem restrict_to_fields(const SemiDiscreteSystem& system, const std::vector<Field>& fields);

/// build_mesh + assemble + apply_mechanical_bc(spec.bc).
SemiDiscreteSystem build_system(const ValidatedModelSpec& spec, int n_elements, const AssemblyOptions& options = {});

/// Solves K x = B V for constant voltages, grounding one dof per charge
/// field. Needs a mechanically constrained system.
Eigen::VectorXd static_solution(const SemiDiscreteSystem& system, const Eigen::VectorXd& voltages);

/// Principal submatrix on the listed indices.
SparseMatrix select(const SparseMatrix& a, const std::vector<Eigen::Index>& rows,
                    const std::vector<Eigen::Index>& cols);

}  // namespace piezobeam
