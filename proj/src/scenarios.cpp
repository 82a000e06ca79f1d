#include "piezobeam/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "piezobeam/eigen_modes.hpp"
#include "piezobeam/errors.hpp"

namespace piezobeam {

namespace {

double max_abs(const Eigen::VectorXd& x, const std::vector<Eigen::Index>& dofs) {
    double m = 0.0;
    for (Eigen::Index i : dofs) m = std::max(m, std::abs(x[i]));
    return m;
}

std::vector<Eigen::Index> complement(const SemiDiscreteSystem& s, const std::vector<Eigen::Index>& dofs) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (std::find(dofs.begin(), dofs.end(), i) == dofs.end()) out.push_back(i);
    }
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

ValidatedModelSpec with_bc(const ValidatedModelSpec& spec, MechanicalBc bc) {
    ModelSpec s = spec.spec();
    s.bc = bc;
    return validate_spec(s);
}

// Free-free E-B beam: k-th positive root of cos(x) cosh(x) = 1.
double free_free_root(int k) {
    auto f = [](double x) { return std::cos(x) - 1.0 / std::cosh(x); };
    const double c = (k + 0.5) * std::numbers::pi;
    double lo = c - 0.5, hi = c + 0.5;
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
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

double first_elastic_frequency(const SemiDiscreteSystem& s) {
    const int n = static_cast<int>(std::min<Eigen::Index>(s.size(), 6));
    const ModeSet modes = eigenmodes(s.M, s.K, n);
    if (modes.zero_mode_count >= n) throw Error(ErrorCode::ConvergenceFailure, "no elastic mode among the lowest modes");
    return modes.omega[modes.zero_mode_count];
}

}  // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Trivial: return "TRIVIAL";
        case Provenance::Derived: return "DERIVED";
        case Provenance::Paper: return "PAPER";
    }
    return "?";
}

std::string_view to_string(VoltageSymmetry s) {
    return s == VoltageSymmetry::Symmetric ? "symmetric" : "antisymmetric";
}

std::string_view to_string(ConvergenceReference r) {
    switch (r) {
        case ConvergenceReference::AnalyticRod: return "analytic-rod";
        case ConvergenceReference::AnalyticBending: return "analytic-bending";
        case ConvergenceReference::FinestMesh: return "finest-mesh";
    }
    return "?";
}

bool ScenarioReport::passed() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.passed(); });
}

const Metric& ScenarioReport::metric(const std::string& name) const {
    for (const auto& m : metrics) {
        if (m.name == name) return m;
    }
    throw Error(ErrorCode::OutOfDomain, "report " + id + " has no metric " + name);
}

ScenarioReport check_single_beam_decoupling(const ValidatedModelSpec& spec, const RunSettings& settings) {
    if (is_patch(spec.variant())) {
        throw Error(ErrorCode::IllegalRegime, "decoupling check needs a single-beam variant");
    }
    const SemiDiscreteSystem s = build_system(spec, settings.elements, settings.assembly);
    const std::vector<Eigen::Index> bending = s.bending_dofs();
    const std::vector<Eigen::Index> others = complement(s, bending);

    double b_rows = 0.0;
    for (Eigen::Index i : bending) b_rows = std::max(b_rows, s.B.row(i).cwiseAbs().maxCoeff());
    double k_coupling = 0.0, m_coupling = 0.0;
    const Eigen::MatrixXd k = Eigen::MatrixXd(select(s.K, bending, others));
    const Eigen::MatrixXd m = Eigen::MatrixXd(select(s.M, bending, others));
    if (k.size() > 0) k_coupling = k.cwiseAbs().maxCoeff();
    if (m.size() > 0) m_coupling = m.cwiseAbs().maxCoeff();

    double bending_max = 0.0, stretching_max = 0.0;
    integrate(
        s, State::zero(s.size()), settings.dt, settings.t_end, 1,
        [&](const TrajectoryPoint& p) {
            bending_max = std::max(bending_max, max_abs(p.x, bending));
            stretching_max = std::max(stretching_max, max_abs(p.x, others));
        },
        settings.integrator);

    ScenarioReport r;
    r.id = "single-beam-decoupling";
    r.metrics.push_back({"input_map_bending_rows_max_abs", "1", b_rows, 0.0, Metric::Bound::AtMost, Provenance::Paper});
    r.metrics.push_back({"stiffness_bending_coupling_max_abs", "N/m^2", k_coupling, 0.0, Metric::Bound::AtMost,
                         Provenance::Paper});
    r.metrics.push_back({"mass_bending_coupling_max_abs", "kg/m^2", m_coupling, 0.0, Metric::Bound::AtMost,
                         Provenance::Paper});
    r.metrics.push_back({"max_bending_dof_abs", "m", bending_max, 0.0, Metric::Bound::AtMost, Provenance::Paper});
    r.notes.emplace_back("variant", std::string(to_string(spec.variant())));
    r.notes.emplace_back("max_stretching_dof_abs", format_double(stretching_max));
    return r;
}

ScenarioReport check_patch_voltage_selectivity(const ValidatedModelSpec& spec, VoltageSymmetry symmetry,
                                               const RunSettings& settings) {
    if (!is_patch(spec.variant())) {
        throw Error(ErrorCode::IllegalRegime, "voltage selectivity needs a patch variant");
    }
    const VoltageSignal top = spec.spec().voltages.at(0);
    const bool sym = symmetry == VoltageSymmetry::Symmetric;
    const ValidatedModelSpec driven = spec.with_voltages({top, sym ? top : top.negated()});
    const SemiDiscreteSystem s = build_system(driven, settings.elements, settings.assembly);
    const std::vector<Eigen::Index> bending = s.bending_dofs();
    const std::vector<Eigen::Index> stretching = s.dofs_of(Field::V);
    const std::vector<Eigen::Index>& excited = sym ? stretching : bending;
    const std::vector<Eigen::Index>& silent = sym ? bending : stretching;

    // Effective mechanical load of the combined voltage pair, with the
    // charges statically eliminated (each input column reduced separately).
    const SemiDiscreteSystem mech = s.regime() == Regime::FullMagnetic ? reduce_electrostatic(s) : s;
    const Eigen::VectorXd load = mech.B.col(0) + (sym ? 1.0 : -1.0) * mech.B.col(1);
    const std::vector<Eigen::Index> silent_mech =
        sym ? mech.bending_dofs() : mech.dofs_of(Field::V);
    const double algebraic = max_abs(load, silent_mech);

    const std::vector<Eigen::Index> qt = s.dofs_of(Field::QTop);
    const std::vector<Eigen::Index> qb = s.dofs_of(Field::QBottom);
    double excited_max = 0.0, silent_max = 0.0, q_max = 0.0, mirror = 0.0;
    integrate(
        s, State::zero(s.size()), settings.dt, settings.t_end, 1,
        [&](const TrajectoryPoint& p) {
            excited_max = std::max(excited_max, max_abs(p.x, excited));
            silent_max = std::max(silent_max, max_abs(p.x, silent));
            for (std::size_t i = 0; i < qt.size(); ++i) {
                q_max = std::max(q_max, std::abs(p.x[qt[i]]));
                const double d = sym ? p.x[qt[i]] - p.x[qb[i]] : p.x[qt[i]] + p.x[qb[i]];
                mirror = std::max(mirror, std::abs(d));
            }
        },
        settings.integrator);

    ScenarioReport r;
    r.id = std::string("patch-voltage-selectivity-") + std::string(to_string(symmetry));
    const Provenance prov = excited_max == 0.0 && silent_max == 0.0 ? Provenance::Trivial : Provenance::Paper;
    r.metrics.push_back({sym ? "effective_load_bending_rows_max_abs" : "effective_load_stretching_rows_max_abs", "N/(V m)",
                         algebraic, 0.0, Metric::Bound::AtMost, prov});
    const double leak = excited_max > 0.0 ? silent_max / excited_max : silent_max;
    r.metrics.push_back({sym ? "bending_over_stretching" : "stretching_over_bending", "1", leak, 1e-12,
                         Metric::Bound::AtMost, prov});
    if (!qt.empty()) {
        r.metrics.push_back({sym ? "charge_mirror_defect" : "charge_antimirror_defect", "1",
                             q_max > 0.0 ? mirror / q_max : mirror, 1e-12, Metric::Bound::AtMost, prov});
    }
    r.notes.emplace_back("variant", std::string(to_string(spec.variant())));
    r.notes.emplace_back("regime", std::string(to_string(spec.regime())));
    r.notes.emplace_back("max_excited_dof_abs", format_double(excited_max));
    return r;
}

LimitStudy run_electrostatic_limit(const ValidatedModelSpec& spec, const std::vector<double>& mu,
                                   const RunSettings& settings, int threads) {
    if (mu.empty()) throw Error(ErrorCode::NonPositiveParameter, "mu list is empty");
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "mu values must be positive");
        if (i > 0 && !(mu[i] < mu[i - 1])) {
            throw Error(ErrorCode::NonPositiveParameter, "mu values must be strictly decreasing");
        }
    }
    const ValidatedModelSpec reduced_spec = spec.with_regime(Regime::ElectrostaticReduced);
    const SemiDiscreteSystem reduced = build_system(reduced_spec, settings.elements, settings.assembly);
    std::vector<Eigen::VectorXd> reference;
    integrate(
        reduced, State::zero(reduced.size()), settings.dt, settings.t_end, 1,
        [&](const TrajectoryPoint& p) { reference.push_back(p.x); }, settings.integrator);
    double reference_norm2 = 0.0;
    for (const auto& x : reference) reference_norm2 += x.squaredNorm();

    LimitStudy study;
    study.mu = mu;
    study.distance.assign(mu.size(), 0.0);
    auto run_one = [&](std::size_t i) {
        ModelSpec ms = spec.spec();
        ms.regime = Regime::FullMagnetic;
        if (is_patch(ms.variant)) {
            ms.patch_material->mu = mu[i];
        } else {
            ms.beam_material.mu = mu[i];
        }
        const SemiDiscreteSystem full = build_system(validate_spec(ms), settings.elements, settings.assembly);
        const std::vector<Eigen::Index> mech = full.mechanical_dofs();
        if (static_cast<Eigen::Index>(mech.size()) != reduced.size()) {
            throw Error(ErrorCode::FieldShapeMismatch, "mechanical dofs of the two regimes differ");
        }
        double diff2 = 0.0;
        std::size_t n = 0;
        integrate(
            full, State::zero(full.size()), settings.dt, settings.t_end, 1,
            [&](const TrajectoryPoint& p) {
                const Eigen::VectorXd& ref = reference.at(n++);
                for (std::size_t k = 0; k < mech.size(); ++k) {
                    const double d = p.x[mech[k]] - ref[static_cast<Eigen::Index>(k)];
                    diff2 += d * d;
                }
            },
            settings.integrator);
        study.distance[i] = reference_norm2 > 0.0 ? std::sqrt(diff2 / reference_norm2) : std::sqrt(diff2);
    };

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, mu.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < mu.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < mu.size(); i += workers) run_one(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    for (std::size_t i = 1; i < mu.size(); ++i) {
        if (!(study.distance[i] < study.distance[i - 1])) study.monotone = false;
    }
    return study;
}

ScenarioReport check_static_equivalence(const ValidatedModelSpec& spec, const std::vector<double>& voltages,
                                        const RunSettings& settings) {
    const MechanicalBc bc = spec.spec().bc == MechanicalBc::FreeFree ? MechanicalBc::ClampedFree : spec.spec().bc;
    const ValidatedModelSpec constrained = with_bc(spec, bc);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(voltages.data(), static_cast<Eigen::Index>(voltages.size()));
    if (v.size() != static_cast<Eigen::Index>(spec.signal_count())) {
        throw Error(ErrorCode::FieldShapeMismatch, "one voltage per signal expected");
    }
    const SemiDiscreteSystem full =
        build_system(constrained.with_regime(Regime::FullMagnetic), settings.elements, settings.assembly);
    const SemiDiscreteSystem reduced =
        build_system(constrained.with_regime(Regime::ElectrostaticReduced), settings.elements, settings.assembly);
    const Eigen::VectorXd xf = static_solution(full, v);
    const Eigen::VectorXd xr = static_solution(reduced, v);
    const std::vector<Eigen::Index> mech = full.mechanical_dofs();
    double diff = 0.0;
    for (std::size_t k = 0; k < mech.size(); ++k) {
        diff = std::max(diff, std::abs(xf[mech[k]] - xr[static_cast<Eigen::Index>(k)]));
    }
    const double scale = xr.cwiseAbs().maxCoeff();

    ScenarioReport r;
    r.id = "static-equivalence";
    r.metrics.push_back({"static_relative_gap", "1", scale > 0.0 ? diff / scale : diff, 1e-12, Metric::Bound::AtMost,
                         scale > 0.0 ? Provenance::Derived : Provenance::Trivial});
    r.notes.emplace_back("bc", std::string(to_string(bc)));
    r.notes.emplace_back("max_reduced_dof_abs", format_double(scale));
    return r;
}

ConvergenceStudy run_convergence(const ValidatedModelSpec& spec, const std::vector<int>& element_counts,
                                 ConvergenceReference reference) {
    if (element_counts.size() < 3) {
        throw Error(ErrorCode::InsufficientMeshes, "a convergence study needs at least 3 meshes");
    }
    for (std::size_t i = 1; i < element_counts.size(); ++i) {
        if (element_counts[i] <= element_counts[i - 1]) {
            throw Error(ErrorCode::InsufficientMeshes, "element counts must be strictly ascending");
        }
    }
    if (reference != ConvergenceReference::FinestMesh && is_patch(spec.variant())) {
        throw Error(ErrorCode::IllegalRegime, "analytic references need a homogeneous single beam");
    }
    if (reference == ConvergenceReference::AnalyticBending && spec.variant() != Variant::SingleEB) {
        throw Error(ErrorCode::IllegalRegime, "the analytic bending reference is for E-B beams");
    }

    ConvergenceStudy study;
    study.elements = element_counts;
    const double L = spec.geometry().length;
    const DerivedCoefficients& d = spec.beam();
    const double h = spec.geometry().thickness;
    switch (reference) {
        case ConvergenceReference::AnalyticRod:
            study.reference = std::numbers::pi / L * std::sqrt(d.alpha1 / d.rho);
            break;
        case ConvergenceReference::AnalyticBending: {
            const double bl = free_free_root(1);
            study.reference = bl * bl * std::sqrt(d.alpha1 * h * h / 12.0 / d.rho) / (L * L);
            break;
        }
        case ConvergenceReference::FinestMesh: break;
    }

    const ValidatedModelSpec free = with_bc(spec, MechanicalBc::FreeFree);
    for (int n : element_counts) {
        double omega = 0.0;
        if (reference == ConvergenceReference::FinestMesh) {
            omega = first_elastic_frequency(build_system(spec, n));
        } else {
            const Field f = reference == ConvergenceReference::AnalyticRod ? Field::V : Field::W;
            omega = first_elastic_frequency(restrict_to_fields(build_system(free, n), {f}));
        }
        study.omega.push_back(omega);
    }
    std::size_t measured = study.omega.size();
    if (reference == ConvergenceReference::FinestMesh) {
        study.reference = study.omega.back();
        --measured;
    }
    for (std::size_t i = 0; i < measured; ++i) {
        study.error.push_back(std::abs(study.omega[i] - study.reference) / study.reference);
    }
    for (std::size_t i = 0; i + 1 < study.error.size(); ++i) {
        const double ratio = static_cast<double>(element_counts[i + 1]) / element_counts[i];
        study.order.push_back(std::log(study.error[i] / study.error[i + 1]) / std::log(ratio));
    }
    return study;
}

ScenarioReport run_convergence_study(const ValidatedModelSpec& spec, const std::vector<int>& element_counts,
                                     ConvergenceReference reference) {
    const ConvergenceStudy study = run_convergence(spec, element_counts, reference);
    ScenarioReport r;
    r.id = std::string("convergence-") + std::string(to_string(reference));
    const double min_order = study.order.empty() ? 0.0 : *std::min_element(study.order.begin(), study.order.end());
    r.metrics.push_back({"min_observed_order", "1", min_order, 1.8, Metric::Bound::AtLeast, Provenance::Derived});
    r.notes.emplace_back("reference_omega", format_double(study.reference));
    for (std::size_t i = 0; i < study.error.size(); ++i) {
        r.notes.emplace_back("relative_error_n" + std::to_string(study.elements[i]), format_double(study.error[i]));
    }
    return r;
}

std::pair<double, double> stretching_wave_speeds(const MaterialParams& material) {
    if (!(material.mu > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "wave speeds need mu > 0");
    const DerivedCoefficients d = derive_coefficients(material);
    const double tr = d.alpha1 / d.rho + d.beta3 / d.mu;
    const double det = d.alpha11 * d.beta3 / (d.rho * d.mu);
    const double fast = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
    // det / fast avoids cancellation in (tr - disc) / 2.
    return {std::sqrt(fast), std::sqrt(det / fast)};
}

TimeOfFlight measure_time_of_flight(const ValidatedModelSpec& spec, const PulseSettings& pulse) {
    if (spec.variant() != Variant::SingleEB) {
        throw Error(ErrorCode::IllegalRegime, "time of flight is measured on a single E-B beam");
    }
    ModelSpec ms = spec.spec();
    ms.regime = Regime::FullMagnetic;
    ms.bc = MechanicalBc::FreeFree;
    ms.voltages = {VoltageSignal::zero()};
    const ValidatedModelSpec free = validate_spec(ms);
    const SemiDiscreteSystem s = build_system(free, pulse.elements);
    const DerivedCoefficients& d = free.beam();
    const auto [c_fast, c_slow] = stretching_wave_speeds(ms.beam_material);
    (void)c_slow;

    // Fast eigenvector of diag(1/rho, 1/mu) [[alpha1, -g], [-g, beta3]].
    const double lambda = c_fast * c_fast;
    const double g = d.coupling();
    Eigen::Vector2d r(g / d.rho, d.alpha1 / d.rho - lambda);
    if (r.norm() < 1e-12 * lambda) {
        r = (d.alpha1 / d.rho >= d.beta3 / d.mu) ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
    }
    r /= r.norm();
    const Field probe_field = std::abs(r[0]) >= 0.1 ? Field::V : Field::Q;
    const double amplitude = std::abs(probe_field == Field::V ? r[0] : r[1]);

    const double L = free.geometry().length;
    const double x0 = pulse.center * L, sigma = pulse.width * L;
    auto f = [&](double x) { return std::exp(-0.5 * (x - x0) * (x - x0) / (sigma * sigma)); };
    auto df = [&](double x) { return -(x - x0) / (sigma * sigma) * f(x); };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.layout.size()), v = x;
    interpolate_field(s.mesh, s.layout, x, Field::V, [&](double y) { return r[0] * f(y); });
    interpolate_field(s.mesh, s.layout, x, Field::Q, [&](double y) { return r[1] * f(y); });
    interpolate_field(s.mesh, s.layout, v, Field::V, [&](double y) { return -c_fast * r[0] * df(y); });
    interpolate_field(s.mesh, s.layout, v, Field::Q, [&](double y) { return -c_fast * r[1] * df(y); });

    const int n = s.mesh.element_count();
    const int node1 = static_cast<int>(std::lround(pulse.probe1 * n));
    const int node2 = static_cast<int>(std::lround(pulse.probe2 * n));
    const Eigen::Index dof1 = s.layout.node_dof(probe_field, node1);
    const Eigen::Index dof2 = s.layout.node_dof(probe_field, node2);
    const double threshold = pulse.threshold * amplitude;

    TimeOfFlight out;
    out.expected = c_fast;
    const double dt = pulse.cfl * s.mesh.min_element_length() / c_fast;
    const double t_max = 2.0 * (s.mesh.node(node2) - x0) / c_fast + 10.0 * dt;
    TimeStepper stepper(s);
    State st{0.0, s.restrict(x), s.restrict(v), {}};
    double t1 = -1.0, t2 = -1.0;
    double prev1 = std::abs(st.x[dof1]), prev2 = std::abs(st.x[dof2]);
    if (prev1 >= threshold || prev2 >= threshold) {
        throw Error(ErrorCode::OutOfDomain, "probes lie inside the initial pulse");
    }
    while (t2 < 0.0) {
        if (st.t > t_max) throw Error(ErrorCode::ConvergenceFailure, "pulse did not reach the probes");
        const double t_prev = st.t;
        stepper.step(st, dt);
        const double a1 = std::abs(st.x[dof1]), a2 = std::abs(st.x[dof2]);
        if (t1 < 0.0 && a1 >= threshold) t1 = t_prev + dt * (threshold - prev1) / (a1 - prev1);
        if (t2 < 0.0 && a2 >= threshold) t2 = t_prev + dt * (threshold - prev2) / (a2 - prev2);
        prev1 = a1;
        prev2 = a2;
    }
    out.first_arrival = t1;
    out.second_arrival = t2;
    out.measured = (s.mesh.node(node2) - s.mesh.node(node1)) / (t2 - t1);
    return out;
}

}  // namespace piezobeam
