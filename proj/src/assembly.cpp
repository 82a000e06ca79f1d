#include "piezobeam/assembly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <array>

#include "piezobeam/linalg.hpp"

namespace piezobeam {

namespace {

using Triplet = Eigen::Triplet<double>;

const Eigen::MatrixXd* coefficients_on(const QuadraticForm& form, const Mesh& mesh, int e) {
    const bool inside = mesh.element_in_patch(e);
    if (form.support == Support::Patch) return inside ? &form.inside : nullptr;
    return inside ? &form.inside : &form.outside;
}

const Eigen::VectorXd* coefficients_on(const LinearForm& form, const Mesh& mesh, int e) {
    const bool inside = mesh.element_in_patch(e);
    if (form.support == Support::Patch) return inside ? &form.inside : nullptr;
    return inside ? &form.inside : &form.outside;
}

// Element matrix of one quadratic form over the union of the local dofs of
// its rows. Only the upper triangle is integrated; the lower one is mirrored
// so element blocks are exactly symmetric.
void add_element(const QuadraticForm& form, const Eigen::MatrixXd& c, const Mesh& mesh, const DofLayout& layout,
                 int e, const QuadratureRule& rule, std::vector<Triplet>& out) {
    const double le = mesh.element_length(e);
    std::vector<Eigen::Index> local;
    struct RowDofs {
        ElementDofs dofs;
        std::array<int, 4> slot{};
        BasisKind basis;
        int order;
    };
    std::vector<RowDofs> rows;
    for (const auto& r : form.rows) {
        RowDofs rd{layout.element_dofs(r.field, e), {}, layout.block(r.field).basis, r.order};
        for (int i = 0; i < rd.dofs.size; ++i) {
            const Eigen::Index g = rd.dofs.index[static_cast<std::size_t>(i)];
            auto it = std::find(local.begin(), local.end(), g);
            if (it == local.end()) {
                local.push_back(g);
                it = local.end() - 1;
            }
            rd.slot[static_cast<std::size_t>(i)] = static_cast<int>(it - local.begin());
        }
        rows.push_back(rd);
    }
    const Eigen::Index n = static_cast<Eigen::Index>(local.size());
    if (n == 0) return;

    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd bq(nr, n);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        bq.setZero();
        for (Eigen::Index a = 0; a < nr; ++a) {
            const RowDofs& rd = rows[static_cast<std::size_t>(a)];
            const auto phi = shape_reference(rd.basis, rule.points[q], le, rd.order);
            const double scale = length_power(le, -rd.order);
            for (int i = 0; i < rd.dofs.size; ++i) {
                bq(a, rd.slot[static_cast<std::size_t>(i)]) += phi[static_cast<std::size_t>(i)] * scale;
            }
        }
        const Eigen::MatrixXd cb = c * bq;
        const double w = rule.weights[q] * le;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                ke(i, j) += w * bq.col(i).dot(cb.col(j));
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            if (ke(i, j) == 0.0) continue;
            out.emplace_back(local[static_cast<std::size_t>(i)], local[static_cast<std::size_t>(j)], ke(i, j));
            if (i != j) {
                out.emplace_back(local[static_cast<std::size_t>(j)], local[static_cast<std::size_t>(i)], ke(i, j));
            }
        }
    }
}

SparseMatrix assemble_forms(const std::vector<QuadraticForm>& forms, const Mesh& mesh, const DofLayout& layout) {
    std::vector<Triplet> triplets;
    for (const auto& form : forms) {
        const QuadratureRule rule = gauss_rule(quadrature_points(form, layout));
        for (int e = 0; e < mesh.element_count(); ++e) {
            const Eigen::MatrixXd* c = coefficients_on(form, mesh, e);
            if (c != nullptr) add_element(form, *c, mesh, layout, e, rule, triplets);
        }
    }
    SparseMatrix a(layout.size(), layout.size());
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
}

Eigen::MatrixXd assemble_loads(const std::vector<LinearForm>& forms, std::size_t signals, const Mesh& mesh,
                               const DofLayout& layout) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(layout.size(), static_cast<Eigen::Index>(signals));
    for (const auto& form : forms) {
        int degree = 0;
        for (const auto& r : form.rows) {
            degree = std::max(degree, polynomial_degree(layout.block(r.field).basis) - r.order);
        }
        const QuadratureRule rule = gauss_rule(gauss_points_for_degree(degree));
        const Eigen::Index col = static_cast<Eigen::Index>(form.signal);
        for (int e = 0; e < mesh.element_count(); ++e) {
            const Eigen::VectorXd* c = coefficients_on(form, mesh, e);
            if (c == nullptr) continue;
            const double le = mesh.element_length(e);
            for (std::size_t a = 0; a < form.rows.size(); ++a) {
                const FieldDerivative& r = form.rows[a];
                const double ca = (*c)[static_cast<Eigen::Index>(a)];
                if (ca == 0.0) continue;
                const ElementDofs d = layout.element_dofs(r.field, e);
                const BasisKind basis = layout.block(r.field).basis;
                // le^(1 - order) keeps the first-derivative case free of rounding.
                const double scale = length_power(le, 1 - r.order);
                for (std::size_t q = 0; q < rule.points.size(); ++q) {
                    const auto phi = shape_reference(basis, rule.points[q], le, r.order);
                    for (int i = 0; i < d.size; ++i) {
                        b(d.index[static_cast<std::size_t>(i)], col) +=
                            rule.weights[q] * scale * ca * phi[static_cast<std::size_t>(i)];
                    }
                }
            }
        }
    }
    return b;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
    return out;
}

// Sub-system on the given system dofs; the spec/layout are kept.
SemiDiscreteSystem subsystem(const SemiDiscreteSystem& s, const std::vector<Eigen::Index>& keep) {
    SemiDiscreteSystem out = s;
    out.M = select(s.M, keep, keep);
    out.K = select(s.K, keep, keep);
    out.B = select_rows(s.B, keep);
    out.free_dofs.clear();
    out.dof_field.clear();
    for (Eigen::Index i : keep) {
        out.free_dofs.push_back(s.free_dofs[static_cast<std::size_t>(i)]);
        out.dof_field.push_back(s.dof_field[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace

SparseMatrix select(const SparseMatrix& a, const std::vector<Eigen::Index>& rows,
                    const std::vector<Eigen::Index>& cols) {
    std::vector<Eigen::Index> row_map(static_cast<std::size_t>(a.rows()), -1);
    std::vector<Eigen::Index> col_map(static_cast<std::size_t>(a.cols()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) row_map[static_cast<std::size_t>(rows[i])] = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < cols.size(); ++j) col_map[static_cast<std::size_t>(cols[j])] = static_cast<Eigen::Index>(j);
    std::vector<Triplet> t;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            const Eigen::Index r = row_map[static_cast<std::size_t>(it.row())];
            const Eigen::Index c = col_map[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(t.begin(), t.end());
    out.makeCompressed();
    return out;
}

Eigen::VectorXd SemiDiscreteSystem::expand(const Eigen::VectorXd& x) const {
    if (x.size() != size()) throw Error(ErrorCode::FieldShapeMismatch, "system vector has the wrong size");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(layout.size());
    for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = x[static_cast<Eigen::Index>(i)];
    return full;
}

Eigen::VectorXd SemiDiscreteSystem::restrict(const Eigen::VectorXd& full) const {
    if (full.size() != layout.size()) throw Error(ErrorCode::FieldShapeMismatch, "layout vector has the wrong size");
    Eigen::VectorXd x(size());
    for (std::size_t i = 0; i < free_dofs.size(); ++i) x[static_cast<Eigen::Index>(i)] = full[free_dofs[i]];
    return x;
}

std::vector<Eigen::Index> SemiDiscreteSystem::dofs_of(Field f) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < dof_field.size(); ++i) {
        if (dof_field[i] == f) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<Eigen::Index> SemiDiscreteSystem::mechanical_dofs() const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < dof_field.size(); ++i) {
        if (!is_charge(dof_field[i])) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<Eigen::Index> SemiDiscreteSystem::charge_dofs() const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < dof_field.size(); ++i) {
        if (is_charge(dof_field[i])) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<Eigen::Index> SemiDiscreteSystem::bending_dofs() const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < dof_field.size(); ++i) {
        if (is_bending(dof_field[i])) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

Eigen::VectorXd SemiDiscreteSystem::voltages_at(double t) const {
    Eigen::VectorXd v(B.cols());
    for (Eigen::Index k = 0; k < B.cols(); ++k) v[k] = energy.voltages.at(static_cast<std::size_t>(k))(t);
    return v;
}

SemiDiscreteSystem assemble(const ValidatedModelSpec& spec, const Mesh& mesh, const AssemblyOptions& options) {
    DofLayout layout = make_layout(spec, mesh);
    EnergyModel energy = build_energy_model(spec, options.energy);

    std::vector<QuadraticForm> mass_forms = energy.kinetic;
    mass_forms.insert(mass_forms.end(), energy.magnetic.begin(), energy.magnetic.end());
    SparseMatrix m = assemble_forms(mass_forms, mesh, layout);
    SparseMatrix k = assemble_forms(energy.stored, mesh, layout);
    Eigen::MatrixXd b = assemble_loads(energy.work, spec.signal_count(), mesh, layout);

    std::vector<Eigen::Index> free(static_cast<std::size_t>(layout.size()));
    for (std::size_t i = 0; i < free.size(); ++i) free[i] = static_cast<Eigen::Index>(i);
    std::vector<Field> fields = layout.dof_fields();
    return SemiDiscreteSystem{spec, std::move(energy), mesh, std::move(layout), std::move(m), std::move(k),
                              std::move(b), std::move(free), std::move(fields)};
}

SemiDiscreteSystem apply_mechanical_bc(const SemiDiscreteSystem& system, MechanicalBc bc) {
    const std::vector<Eigen::Index> clamped = system.layout.clamped_dofs(bc);
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < system.free_dofs.size(); ++i) {
        if (!std::binary_search(clamped.begin(), clamped.end(), system.free_dofs[i])) {
            keep.push_back(static_cast<Eigen::Index>(i));
        }
    }
    return subsystem(system, keep);
}

SemiDiscreteSystem restrict_to_fields(const SemiDiscreteSystem& system, const std::vector<Field>& fields) {
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < system.dof_field.size(); ++i) {
        if (std::find(fields.begin(), fields.end(), system.dof_field[i]) != fields.end()) {
            keep.push_back(static_cast<Eigen::Index>(i));
        }
    }
    return subsystem(system, keep);
}

namespace {

// Charge dofs minus the first dof of each charge field (the grounded one).
std::vector<Eigen::Index> grounded_charge_dofs(const SemiDiscreteSystem& s) {
    std::vector<Eigen::Index> out;
    std::vector<Field> seen;
    for (std::size_t i = 0; i < s.dof_field.size(); ++i) {
        const Field f = s.dof_field[i];
        if (!is_charge(f)) continue;
        if (std::find(seen.begin(), seen.end(), f) == seen.end()) {
            seen.push_back(f);
            continue;
        }
        out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

}  // namespace

SemiDiscreteSystem reduce_electrostatic(const SemiDiscreteSystem& system) {
    if (system.regime() != Regime::FullMagnetic) {
        throw Error(ErrorCode::IllegalRegime, "reduce_electrostatic needs a full-magnetic system");
    }
    const std::vector<Eigen::Index> mech = system.mechanical_dofs();
    const std::vector<Eigen::Index> charge = grounded_charge_dofs(system);

    const Eigen::MatrixXd kmm = Eigen::MatrixXd(select(system.K, mech, mech));
    const Eigen::MatrixXd kqm = Eigen::MatrixXd(select(system.K, charge, mech));
    const Eigen::MatrixXd kqq = Eigen::MatrixXd(select(system.K, charge, charge));
    const Eigen::MatrixXd bq = select_rows(system.B, charge);
    const Eigen::MatrixXd bm = select_rows(system.B, mech);

    Eigen::LLT<Eigen::MatrixXd> llt(kqq);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularElectricBlock, "charge stiffness block is not positive definite");
    }
    // With K_qq = L L^T: Schur = K_mm - Y^T Y, Y = L^-1 K_qm.
    const Eigen::MatrixXd y = llt.matrixL().solve(kqm);
    const Eigen::MatrixXd z = llt.matrixL().solve(bq);
    Eigen::MatrixXd kred = kmm - y.transpose() * y;
    kred = 0.5 * (kred + kred.transpose()).eval();
    const Eigen::MatrixXd bred = bm - y.transpose() * z;

    const ValidatedModelSpec reduced_spec = system.spec.with_regime(Regime::ElectrostaticReduced);
    DofLayout layout = make_layout(reduced_spec, system.mesh);
    std::vector<Eigen::Index> free;
    std::vector<Field> fields;
    for (Eigen::Index i : mech) {
        free.push_back(system.free_dofs[static_cast<std::size_t>(i)]);
        fields.push_back(system.dof_field[static_cast<std::size_t>(i)]);
    }
    SparseMatrix kred_sparse = kred.sparseView(0.0, 0.0);
    kred_sparse.makeCompressed();
    return SemiDiscreteSystem{reduced_spec, build_energy_model(reduced_spec), system.mesh, std::move(layout),
                              select(system.M, mech, mech), std::move(kred_sparse), bred,
                              std::move(free), std::move(fields)};
}

SemiDiscreteSystem build_system(const ValidatedModelSpec& spec, int n_elements, const AssemblyOptions& options) {
    const Mesh mesh = build_mesh(spec, n_elements);
    return apply_mechanical_bc(assemble(spec, mesh, options), spec.spec().bc);
}

Eigen::VectorXd static_solution(const SemiDiscreteSystem& system, const Eigen::VectorXd& voltages) {
    std::vector<Eigen::Index> keep = system.mechanical_dofs();
    const std::vector<Eigen::Index> charge = grounded_charge_dofs(system);
    keep.insert(keep.end(), charge.begin(), charge.end());
    std::sort(keep.begin(), keep.end());
    const SparseMatrix k = select(system.K, keep, keep);
    const Eigen::VectorXd rhs = select_rows(system.B, keep) * voltages;
    const SymmetricFactor factor(k);
    Eigen::VectorXd xs = factor.solve(rhs);
    // Iterative refinement with the residual accumulated in long double:
    // static solutions of stiff patch systems are otherwise only accurate
    // to cond(K) * eps.
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<long double> acc(static_cast<std::size_t>(rhs.size()));
        for (Eigen::Index i = 0; i < rhs.size(); ++i) acc[static_cast<std::size_t>(i)] = rhs[i];
        for (Eigen::Index j = 0; j < k.outerSize(); ++j) {
            for (SparseMatrix::InnerIterator it(k, j); it; ++it) {
                acc[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * xs[j];
            }
        }
        Eigen::VectorXd r(rhs.size());
        for (Eigen::Index i = 0; i < rhs.size(); ++i) r[i] = static_cast<double>(acc[static_cast<std::size_t>(i)]);
        const Eigen::VectorXd dx = factor.solve(r);
        xs += dx;
        if (dx.cwiseAbs().maxCoeff() <= 1e-17 * xs.cwiseAbs().maxCoeff()) break;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(system.size());
    for (std::size_t i = 0; i < keep.size(); ++i) x[keep[i]] = xs[static_cast<Eigen::Index>(i)];
    return x;
}

}  // namespace piezobeam
