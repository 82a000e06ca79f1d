#include "piezobeam/energy_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace piezobeam {

namespace {

Eigen::MatrixXd diag(std::initializer_list<double> values) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) d[i++] = v;
    return d.asDiagonal();
}

Eigen::MatrixXd scalar(double value) { return Eigen::MatrixXd::Constant(1, 1, value); }

QuadraticForm uniform(std::string name, std::vector<FieldDerivative> rows, Eigen::MatrixXd c,
                      Integration integration = Integration::Exact) {
    return {std::move(name), std::move(rows), c, c, Support::Whole, integration};
}

QuadraticForm patch_only(std::string name, std::vector<FieldDerivative> rows, Eigen::MatrixXd c) {
    const Eigen::Index n = c.rows();
    return {std::move(name), std::move(rows), std::move(c), Eigen::MatrixXd::Zero(n, n), Support::Patch,
            Integration::Exact};
}

// (h/2)[alpha1 s^2 - 2 gamma3 beta3 s q' + beta3 q'^2] with s = v' + offset * r,
// where r is the bending strain (w'' or psi'). Rows: (v', r, q').
Eigen::MatrixXd patch_stretch_charge(double h1, const DerivedCoefficients& p, double offset, double coupling) {
    Eigen::Matrix3d c;
    const double a = p.alpha1;
    c << a, a * offset, -coupling,
         a * offset, a * offset * offset, -coupling * offset,
         -coupling, -coupling * offset, p.beta3;
    return h1 * c;
}

// Mass density of one patch's centreline stretch: rows (vdot, rdot).
Eigen::MatrixXd patch_stretch_mass(double h1, double rho, double offset) {
    Eigen::Matrix2d c;
    c << 1.0, offset, offset, offset * offset;
    return h1 * rho * c;
}

Integration shear_integration(const EnergyOptions& options) {
    return options.reduced_shear_integration ? Integration::OnePoint : Integration::Exact;
}

void build_single(const ValidatedModelSpec& spec, const EnergyOptions& options, EnergyModel& m) {
    const DerivedCoefficients& d = spec.beam();
    const double h = spec.geometry().thickness;
    const bool eb = spec.variant() == Variant::SingleEB;
    const bool full = spec.regime() == Regime::FullMagnetic;
    const FieldDerivative bending_strain = eb ? FieldDerivative{Field::W, 2} : FieldDerivative{Field::Psi, 1};

    if (full) {
        Eigen::Matrix2d c;
        c << d.alpha1, -d.coupling(), -d.coupling(), d.beta3;
        m.stored.push_back(uniform("stretching", {{Field::V, 1}, {Field::Q, 1}}, h * c));
    } else {
        m.stored.push_back(uniform("stretching", {{Field::V, 1}}, scalar(h * d.alpha11)));
    }
    m.stored.push_back(uniform("bending", {bending_strain}, scalar(h * d.alpha1 * h * h / 12.0)));
    if (!eb) {
        m.stored.push_back(uniform("shear", {{Field::W, 1}, {Field::Psi, 0}},
                                   h * d.alpha3 * Eigen::MatrixXd::Ones(2, 2), shear_integration(options)));
    }

    const double rh = d.rho * h;
    if (eb) {
        m.kinetic.push_back(uniform("kinetic", {{Field::V, 0}, {Field::W, 0}, {Field::W, 1}},
                                    diag({rh, rh, rh * h * h / 12.0})));
    } else {
        m.kinetic.push_back(uniform("kinetic", {{Field::V, 0}, {Field::W, 0}, {Field::Psi, 0}},
                                    diag({rh, rh, rh * h * h / 12.0})));
    }

    if (full) {
        m.magnetic.push_back(uniform("magnetic", {{Field::Q, 0}}, scalar(d.mu * h)));
        m.work.push_back({"work", {{Field::Q, 1}}, Eigen::VectorXd::Constant(1, -1.0),
                          Eigen::VectorXd::Constant(1, -1.0), Support::Whole, 0});
    } else {
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, -d.gamma3);
        m.work.push_back({"work", {{Field::V, 1}}, c, c, Support::Whole, 0});
    }
}

void build_patch_full(const ValidatedModelSpec& spec, const EnergyOptions& options, EnergyModel& m) {
    const DerivedCoefficients& core = spec.beam();
    const DerivedCoefficients& p = spec.patch();
    const double h0 = spec.geometry().core_half_thickness;
    const double h1 = spec.geometry().patch_thickness;
    const bool eb = spec.variant() == Variant::PatchEB;
    const FieldDerivative bend = eb ? FieldDerivative{Field::W, 2} : FieldDerivative{Field::Psi, 1};
    const FieldDerivative rot_rate = eb ? FieldDerivative{Field::W, 1} : FieldDerivative{Field::Psi, 0};

    // Elastic core of thickness 2 h0.
    m.stored.push_back(uniform("core", {{Field::V, 1}, bend},
                               diag({2.0 * h0 * core.alpha1, 2.0 * h0 * core.alpha1 * h0 * h0 / 3.0})));
    if (!eb) {
        m.stored.push_back(uniform("core shear", {{Field::W, 1}, {Field::Psi, 0}},
                                   2.0 * h0 * core.alpha3 * Eigen::MatrixXd::Ones(2, 2), shear_integration(options)));
    }
    const double bottom_coupling = options.flip_bottom_coupling ? -p.coupling() : p.coupling();
    m.stored.push_back(patch_only("top patch", {{Field::V, 1}, bend, {Field::QTop, 1}},
                                  patch_stretch_charge(h1, p, h0, p.coupling())));
    m.stored.push_back(patch_only("bottom patch", {{Field::V, 1}, bend, {Field::QBottom, 1}},
                                  patch_stretch_charge(h1, p, -h0, bottom_coupling)));

    const double rc = core.rho * h0;
    m.kinetic.push_back(uniform("core kinetic", {{Field::V, 0}, {Field::W, 0}, rot_rate},
                                diag({2.0 * rc, 2.0 * rc, 2.0 * rc * h0 * h0 / 3.0})));
    m.kinetic.push_back(patch_only("top patch kinetic", {{Field::V, 0}, rot_rate}, patch_stretch_mass(h1, p.rho, h0)));
    m.kinetic.push_back(
        patch_only("bottom patch kinetic", {{Field::V, 0}, rot_rate}, patch_stretch_mass(h1, p.rho, -h0)));

    m.magnetic.push_back(patch_only("top magnetic", {{Field::QTop, 0}}, scalar(p.mu * h1)));
    m.magnetic.push_back(patch_only("bottom magnetic", {{Field::QBottom, 0}}, scalar(p.mu * h1)));

    const Eigen::VectorXd minus_one = Eigen::VectorXd::Constant(1, -1.0);
    m.work.push_back({"top work", {{Field::QTop, 1}}, minus_one, Eigen::VectorXd::Zero(1), Support::Patch, 0});
    m.work.push_back({"bottom work", {{Field::QBottom, 1}}, minus_one, Eigen::VectorXd::Zero(1), Support::Patch, 1});
}

void build_patch_reduced(const ValidatedModelSpec& spec, const EnergyOptions& options, EnergyModel& m) {
    const DerivedCoefficients& core = spec.beam();
    const DerivedCoefficients& p = spec.patch();
    const CoefficientFields cf = spec.coefficient_fields();
    const BeamGeometry& g = spec.geometry();
    const double h0 = g.core_half_thickness;
    const bool eb = spec.variant() == Variant::PatchEB;
    const FieldDerivative bend = eb ? FieldDerivative{Field::W, 2} : FieldDerivative{Field::Psi, 1};
    const FieldDerivative rot_rate = eb ? FieldDerivative{Field::W, 1} : FieldDerivative{Field::Psi, 0};

    // Sample points strictly inside and outside the patch interval.
    const double xin = 0.5 * (g.patch_begin + g.patch_end);
    const double xout = 0.5 * g.patch_begin;

    // The equations of motion carry 1/2 of each energy density's Hessian,
    // hence the factors 2.
    m.stored.push_back({"reduced stiffness", {{Field::V, 1}, bend},
                        diag({2.0 * cf.alpha_reduced(xin), 2.0 * cf.bending_reduced(xin)}),
                        diag({2.0 * cf.alpha_reduced(xout), 2.0 * cf.bending_reduced(xout)}), Support::Whole,
                        Integration::Exact});
    if (!eb) {
        m.stored.push_back(uniform("core shear", {{Field::W, 1}, {Field::Psi, 0}},
                                   2.0 * h0 * core.alpha3 * Eigen::MatrixXd::Ones(2, 2), shear_integration(options)));
    }

    m.kinetic.push_back({"reduced kinetic", {{Field::V, 0}, {Field::W, 0}, rot_rate},
                         diag({2.0 * cf.rho(xin), 2.0 * core.rho * h0, 2.0 * cf.rho_tilde(xin)}),
                         diag({2.0 * cf.rho(xout), 2.0 * core.rho * h0, 2.0 * cf.rho_tilde(xout)}), Support::Whole,
                         Integration::Exact});

    const double g3 = p.gamma3;
    const double g3_bottom = options.flip_bottom_coupling ? -g3 : g3;
    Eigen::VectorXd top(2), bottom(2);
    top << -g3, -g3 * h0;
    bottom << -g3_bottom, g3_bottom * h0;
    m.work.push_back({"top work", {{Field::V, 1}, bend}, top, Eigen::VectorXd::Zero(2), Support::Patch, 0});
    m.work.push_back({"bottom work", {{Field::V, 1}, bend}, bottom, Eigen::VectorXd::Zero(2), Support::Patch, 1});
}

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

int reduced_degree(const std::vector<FieldDerivative>& rows, const DofLayout& layout) {
    int deg = 0;
    for (const auto& r : rows) {
        deg = std::max(deg, polynomial_degree(layout.block(r.field).basis) - r.order);
    }
    return std::max(deg, 0);
}

// y_a at reference point xi on element e.
double row_value(const FieldDerivative& row, const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& x,
                 int e, double xi) {
    const FieldBlock& b = layout.block(row.field);
    if (!b.supports(e)) return 0.0;
    const double le = mesh.element_length(e);
    const auto n = shape_reference(b.basis, xi, le, row.order);
    const ElementDofs d = layout.element_dofs(row.field, e);
    double value = 0.0;
    for (int i = 0; i < d.size; ++i) {
        value += n[static_cast<std::size_t>(i)] * x[d.index[static_cast<std::size_t>(i)]];
    }
    return value * length_power(le, -row.order);
}

void check_shape(const DofLayout& layout, const Eigen::VectorXd& x) {
    if (x.size() != layout.size()) {
        std::ostringstream os;
        os << "field vector has " << x.size() << " entries, layout has " << layout.size();
        throw Error(ErrorCode::FieldShapeMismatch, os.str());
    }
}

}  // namespace

EnergyModel build_energy_model(const ValidatedModelSpec& spec, const EnergyOptions& options) {
    EnergyModel m{spec.variant(), spec.regime(), {}, {}, {}, {}, spec.spec().voltages};
    if (!is_patch(spec.variant())) {
        build_single(spec, options, m);
    } else if (spec.regime() == Regime::FullMagnetic) {
        build_patch_full(spec, options, m);
    } else {
        build_patch_reduced(spec, options, m);
    }
    return m;
}

int quadrature_points(const QuadraticForm& form, const DofLayout& layout) {
    if (form.integration == Integration::OnePoint) return 1;
    return gauss_points_for_degree(2 * reduced_degree(form.rows, layout));
}

double evaluate_form(const QuadraticForm& form, const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& x) {
    check_shape(layout, x);
    const QuadratureRule rule = gauss_rule(quadrature_points(form, layout));
    const Eigen::Index n = static_cast<Eigen::Index>(form.rows.size());
    Eigen::VectorXd y(n);
    double total = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Eigen::MatrixXd* c = coefficients_on(form, mesh, e);
        if (c == nullptr) continue;
        const double le = mesh.element_length(e);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            for (Eigen::Index a = 0; a < n; ++a) {
                y[a] = row_value(form.rows[static_cast<std::size_t>(a)], mesh, layout, x, e, rule.points[q]);
            }
            total += rule.weights[q] * le * 0.5 * y.dot(*c * y);
        }
    }
    return total;
}

double evaluate_form(const LinearForm& form, const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& x) {
    check_shape(layout, x);
    const QuadratureRule rule = gauss_rule(gauss_points_for_degree(reduced_degree(form.rows, layout)));
    double total = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Eigen::VectorXd* c = coefficients_on(form, mesh, e);
        if (c == nullptr) continue;
        const double le = mesh.element_length(e);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            for (std::size_t a = 0; a < form.rows.size(); ++a) {
                total += rule.weights[q] * le * (*c)[static_cast<Eigen::Index>(a)] *
                         row_value(form.rows[a], mesh, layout, x, e, rule.points[q]);
            }
        }
    }
    return total;
}

double stored_energy(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                     const Eigen::VectorXd& fields) {
    double total = 0.0;
    for (const auto& f : model.stored) total += evaluate_form(f, mesh, layout, fields);
    return total;
}

EnergyBreakdown energy_breakdown(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                                 const Eigen::VectorXd& fields, const Eigen::VectorXd& velocities) {
    EnergyBreakdown out;
    out.stored = stored_energy(model, mesh, layout, fields);
    for (const auto& f : model.kinetic) out.kinetic_mech += evaluate_form(f, mesh, layout, velocities);
    for (const auto& f : model.magnetic) out.magnetic += evaluate_form(f, mesh, layout, velocities);
    return out;
}

double kinetic_energy(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                      const Eigen::VectorXd& velocities) {
    double total = 0.0;
    for (const auto& f : model.kinetic) total += evaluate_form(f, mesh, layout, velocities);
    for (const auto& f : model.magnetic) total += evaluate_form(f, mesh, layout, velocities);
    return total;
}

double work_rate(const EnergyModel& model, const Mesh& mesh, const DofLayout& layout,
                 const Eigen::VectorXd& velocities, double t) {
    double power = 0.0;
    for (const auto& f : model.work) {
        const double v = model.voltages.at(f.signal)(t);
        if (v == 0.0) continue;
        power += v * evaluate_form(f, mesh, layout, velocities);
    }
    return power;
}

PointwiseFields recover_pointwise(const ValidatedModelSpec& spec, const Mesh& mesh, const DofLayout& layout,
                                  const Eigen::VectorXd& fields, const Eigen::VectorXd& velocities, double x,
                                  double z, double t) {
    check_shape(layout, fields);
    check_shape(layout, velocities);
    const Variant variant = spec.variant();
    const bool eb = is_euler_bernoulli(variant);
    const bool full = spec.regime() == Regime::FullMagnetic;
    const BeamGeometry& g = spec.geometry();
    auto field = [&](Field f, int order) { return evaluate_field(mesh, layout, fields, f, x, order); };
    auto rate = [&](Field f) { return evaluate_field(mesh, layout, velocities, f, x, 0); };
    auto out_of_domain = [&](const char* what) {
        std::ostringstream os;
        os << "(x, z) = (" << x << ", " << z << ") " << what;
        return Error(ErrorCode::OutOfDomain, os.str());
    };
    if (!(x >= 0.0 && x <= g.length)) throw out_of_domain("outside [0, L]");

    PointwiseFields p;
    const double v = field(Field::V, 0);
    const double dv = field(Field::V, 1);
    const double w = field(Field::W, 0);
    const double dw = field(Field::W, 1);
    p.U3 = w;

    // Beam (or core) kinematics from the displacement table.
    auto beam_kinematics = [&](double zz) {
        if (eb) {
            p.U1 = v - zz * dw;
            p.S11 = dv - zz * field(Field::W, 2);
            p.S13 = 0.0;
        } else {
            const double psi = field(Field::Psi, 0);
            p.U1 = v + zz * psi;
            p.S11 = dv + zz * field(Field::Psi, 1);
            p.S13 = 0.5 * (dw + psi);
        }
    };
    auto constitutive = [&](const DerivedCoefficients& d) {
        p.T11 = d.alpha1 * p.S11 - d.coupling() * p.D3;
        p.T13 = (eb ? 0.0 : d.alpha3 * p.S13) - d.gamma1 * d.beta1 * p.D1;
        p.E1 = (eb ? 0.0 : -d.gamma1 * d.beta1 * p.S13) + d.beta1 * p.D1;
        p.E3 = -d.coupling() * p.S11 + d.beta3 * p.D3;
    };

    if (!is_patch(variant)) {
        if (std::abs(z) > 0.5 * g.thickness) throw out_of_domain("outside the cross-section");
        const DerivedCoefficients& d = spec.beam();
        beam_kinematics(z);
        if (full) {
            p.D3 = field(Field::Q, 1);
            p.B2 = -d.mu * rate(Field::Q);
        } else {
            // Statically condensed charge: beta3 q' - gamma3 beta3 v' = -V / h.
            p.D3 = d.gamma3 * dv - spec.spec().voltages[0](t) / (g.thickness * d.beta3);
        }
        constitutive(d);
        return p;
    }

    const double h0 = g.core_half_thickness;
    if (std::abs(z) <= h0) {
        beam_kinematics(z);
        constitutive(spec.beam());
        return p;
    }
    const bool in_patch = x >= g.patch_begin && x <= g.patch_end;
    if (std::abs(z) > h0 + g.patch_thickness || !in_patch) throw out_of_domain("outside the beam-patch body");

    // Patches only stretch: their centreline displacement is v +- h0 * rotation.
    const double sign = z > 0.0 ? 1.0 : -1.0;
    const Field q = z > 0.0 ? Field::QTop : Field::QBottom;
    const DerivedCoefficients& d = spec.patch();
    const double rotation = eb ? dw : field(Field::Psi, 0);
    const double bending = eb ? field(Field::W, 2) : field(Field::Psi, 1);
    p.U1 = v + sign * h0 * rotation;
    p.S11 = dv + sign * h0 * bending;
    p.S13 = 0.0;
    if (full) {
        p.D3 = field(q, 1);
        p.B2 = -d.mu * rate(q);
    } else {
        const double voltage = spec.spec().voltages[z > 0.0 ? 0 : 1](t);
        p.D3 = d.gamma3 * p.S11 - voltage / (g.patch_thickness * d.beta3);
    }
    p.T11 = d.alpha1 * p.S11 - d.coupling() * p.D3;
    p.T13 = -d.gamma1 * d.beta1 * p.D1;
    p.E1 = d.beta1 * p.D1;
    p.E3 = -d.coupling() * p.S11 + d.beta3 * p.D3;
    return p;
}

}  // namespace piezobeam
