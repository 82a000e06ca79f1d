#include "piezobeam/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>

#include "piezobeam/csv.hpp"
#include "piezobeam/eigen_modes.hpp"
#include "piezobeam/svg.hpp"

namespace piezobeam {

namespace {

using nlohmann::json;

json provenance(const RunConfig& config, const SemiDiscreteSystem* system) {
    json p;
    p["config_hash"] = config_hash(config);
    p["code_version"] = code_version();
    p["variant"] = std::string(to_string(config.model.variant));
    p["regime"] = std::string(to_string(config.model.regime));
    p["bc"] = std::string(to_string(config.model.bc));
    p["elements"] = config.elements;
    if (system) {
        p["nodes"] = system->mesh.node_count();
        p["system_dofs"] = system->size();
    }
    return p;
}

std::vector<std::string> provenance_comments(const json& p) {
    std::vector<std::string> out;
    for (const auto& [key, value] : p.items()) {
        out.push_back(key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()));
    }
    return out;
}

void store_report(ResultBundle& bundle) { bundle.files["report.json"] = bundle.report.dump(2) + "\n"; }

/// Nodal values (value component only) of one field.
std::vector<std::pair<double, Eigen::Index>> nodal_dofs(const SemiDiscreteSystem& s, Field f) {
    const FieldBlock& b = s.layout.block(f);
    std::vector<std::pair<double, Eigen::Index>> out;
    for (int node = b.first_element; node <= b.last_element; ++node) {
        out.emplace_back(s.mesh.node(node), s.layout.node_dof(f, node));
    }
    return out;
}

json metric_json(const Metric& m) {
    return {{"name", m.name},
            {"unit", m.unit},
            {"value", m.value},
            {"tolerance", m.tolerance},
            {"bound", m.bound == Metric::Bound::AtMost ? "at-most" : "at-least"},
            {"provenance", std::string(to_string(m.provenance))},
            {"passed", m.passed()}};
}

json report_json(const ScenarioReport& r) {
    json notes = json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    json metrics = json::array();
    for (const auto& m : r.metrics) metrics.push_back(metric_json(m));
    return {{"id", r.id}, {"passed", r.passed()}, {"metrics", metrics}, {"notes", notes}};
}

enum class Group { Stretching, Bending, Charge };

Group group_of(Field f) {
    if (is_charge(f)) return Group::Charge;
    return f == Field::V ? Group::Stretching : Group::Bending;
}

}  // namespace

std::string code_version() { return PIEZOBEAM_VERSION; }

std::string config_hash(const RunConfig& config) {
    // Settings that cannot change any result are left out, so outputs stay
    // byte-identical across thread counts and output locations.
    RunConfig canonical = config;
    canonical.threads = 1;
    canonical.output_directory = RunConfig{}.output_directory;
    canonical.svg = false;
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize_config(canonical)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

ResultBundle cmd_simulate(const RunConfig& config) {
    const ValidatedModelSpec spec = config.validated();
    const RunSettings settings = config.run_settings();
    const SemiDiscreteSystem system = build_system(spec, settings.elements, settings.assembly);

    struct Probe {
        Field field;
        double position;
        Eigen::Index dof;
        std::vector<Eigen::Index> nodal;
    };
    std::vector<Probe> probes;
    for (Field f : system.layout.fields()) {
        const FieldBlock& b = system.layout.block(f);
        Probe p{f, system.mesh.node(b.last_element), system.layout.node_dof(f, b.last_element), {}};
        for (const auto& [x, dof] : nodal_dofs(system, f)) p.nodal.push_back(dof);
        probes.push_back(std::move(p));
    }

    CsvTable trajectory;
    trajectory.header.push_back("t");
    for (const Probe& p : probes) {
        trajectory.header.push_back(std::string(to_string(p.field)) + "_probe");
        trajectory.header.push_back(std::string(to_string(p.field)) + "_maxabs");
    }
    const std::vector<std::string> energy_columns{"E_kin", "E_stored", "E_mag", "E_total", "work_in",
                                                  "balance_residual"};
    CsvTable energy;
    energy.header.push_back("t");
    for (const auto& c : energy_columns) {
        trajectory.header.push_back(c);
        energy.header.push_back(c);
    }

    double e0 = 0.0, max_energy = 0.0, max_residual = 0.0;
    bool first = true;
    integrate(
        system, State::zero(system.size()), settings.dt, settings.t_end, config.stride,
        [&](const TrajectoryPoint& p) {
            const Eigen::VectorXd full = system.expand(p.x);
            std::vector<CsvCell> row{p.t};
            for (const Probe& pr : probes) {
                double m = 0.0;
                for (Eigen::Index d : pr.nodal) m = std::max(m, std::abs(full[d]));
                row.emplace_back(full[pr.dof]);
                row.emplace_back(m);
            }
            if (first) {
                e0 = p.energy.total();
                first = false;
            }
            const double residual = (p.energy.total() - e0) - p.work;
            max_energy = std::max(max_energy, std::abs(p.energy.total()));
            max_residual = std::max(max_residual, std::abs(residual));
            const std::vector<double> e{p.energy.kinetic_mech, p.energy.stored, p.energy.magnetic,
                                        p.energy.total(), p.work, residual};
            std::vector<CsvCell> erow{p.t};
            for (double v : e) {
                row.emplace_back(v);
                erow.emplace_back(v);
            }
            trajectory.rows.push_back(std::move(row));
            energy.rows.push_back(std::move(erow));
        },
        settings.integrator);

    ResultBundle bundle;
    bundle.command = "simulate";
    const json prov = provenance(config, &system);
    trajectory.comments = provenance_comments(prov);
    for (const Probe& p : probes) {
        trajectory.comments.push_back(std::string(to_string(p.field)) + "_probe at x = " +
                                      format_csv_number(p.position));
    }
    energy.comments = provenance_comments(prov);
    bundle.files["trajectory.csv"] = write_csv(trajectory);
    bundle.files["energy.csv"] = write_csv(energy);

    const double tolerance = 1e-8 * max_energy;
    bundle.report = {{"command", "simulate"},
                     {"provenance", prov},
                     {"dt", settings.dt},
                     {"t_end", settings.t_end},
                     {"steps", step_count(settings.dt, settings.t_end)},
                     {"rows", trajectory.rows.size()},
                     {"integrator", config.integrator == Integrator::Midpoint ? "midpoint" : "newmark"},
                     {"max_E_total", max_energy},
                     {"max_abs_balance_residual", max_residual},
                     {"balance_tolerance", tolerance},
                     {"balance_ok", max_residual <= tolerance}};

    if (config.svg) {
        const auto t = energy.column("t");
        bundle.files["energy.svg"] =
            render_svg({"Energy balance", "t [s]", "energy per width [J/m]"},
                       {{"E_total", t, energy.column("E_total")}, {"work_in", t, energy.column("work_in")}});
        std::vector<PlotSeries> series;
        for (const Probe& p : probes) {
            const std::string name = std::string(to_string(p.field)) + "_probe";
            series.push_back({name, t, trajectory.column(name)});
        }
        bundle.files["probes.svg"] = render_svg({"Probe values", "t [s]", "value"}, series);
    }
    store_report(bundle);
    return bundle;
}

ResultBundle cmd_modes(const RunConfig& config, int n_modes) {
    const ValidatedModelSpec spec = config.validated();
    const RunSettings settings = config.run_settings();
    const SemiDiscreteSystem system = build_system(spec, settings.elements, settings.assembly);
    const ModeSet modes = eigenmodes(system.M, system.K, n_modes);

    CsvTable table;
    table.header = {"mode", "omega_rad_s", "frequency_hz", "eigenvalue", "stretching_fraction",
                    "bending_fraction", "charge_fraction", "class"};
    json mode_list = json::array();
    double worst_partition = 0.0;
    for (Eigen::Index k = 0; k < modes.size(); ++k) {
        const Eigen::VectorXd phi = modes.shapes.col(k);
        const Eigen::VectorXd mphi = system.M * phi;
        const double total = phi.dot(mphi);
        double fraction[3] = {0.0, 0.0, 0.0};
        for (Eigen::Index i = 0; i < system.size(); ++i) {
            fraction[static_cast<int>(group_of(system.dof_field[static_cast<std::size_t>(i)]))] +=
                phi[i] * mphi[i] / total;
        }
        worst_partition = std::max(worst_partition, std::abs(fraction[0] + fraction[1] + fraction[2] - 1.0));
        const int dominant = static_cast<int>(std::max_element(fraction, fraction + 3) - fraction);
        static const char* names[] = {"stretching", "bending", "charge"};
        const double omega = modes.omega[k];
        table.rows.push_back({static_cast<double>(k + 1), omega, omega / (2.0 * std::numbers::pi),
                              modes.eigenvalue[k], fraction[0], fraction[1], fraction[2],
                              std::string(k < modes.zero_mode_count ? "rigid" : names[dominant])});
        mode_list.push_back({{"mode", k + 1},
                             {"omega_rad_s", omega},
                             {"class", k < modes.zero_mode_count ? "rigid" : names[dominant]}});
    }

    ResultBundle bundle;
    bundle.command = "modes";
    const json prov = provenance(config, &system);
    table.comments = provenance_comments(prov);
    bundle.files["modes.csv"] = write_csv(table);
    bundle.report = {{"command", "modes"},
                     {"provenance", prov},
                     {"requested", n_modes},
                     {"zero_modes", modes.zero_mode_count},
                     {"iterations", modes.iterations},
                     {"max_fraction_partition_defect", worst_partition},
                     {"modes", mode_list}};

    if (config.svg) {
        const Eigen::Index shown = std::min<Eigen::Index>(modes.size(), 6);
        for (Eigen::Index k = 0; k < shown; ++k) {
            const Eigen::VectorXd full = system.expand(modes.shapes.col(k));
            std::vector<PlotSeries> series;
            for (Field f : system.layout.fields()) {
                PlotSeries s{std::string(to_string(f)), {}, {}};
                for (const auto& [x, dof] : nodal_dofs(system, f)) {
                    s.x.push_back(x);
                    s.y.push_back(full[dof]);
                }
                series.push_back(std::move(s));
            }
            bundle.files["mode_" + std::to_string(k + 1) + ".svg"] = render_svg(
                {"Mode " + std::to_string(k + 1) + ", omega = " + format_csv_number(modes.omega[k]) + " rad/s",
                 "x [m]", "nodal value"},
                series);
        }
    }
    store_report(bundle);
    return bundle;
}

ResultBundle cmd_check(const RunConfig& config) {
    const ValidatedModelSpec spec = config.validated();
    const RunSettings settings = config.run_settings();
    std::vector<ScenarioReport> reports;
    if (is_patch(spec.variant())) {
        reports.push_back(check_patch_voltage_selectivity(spec, VoltageSymmetry::Symmetric, settings));
        reports.push_back(check_patch_voltage_selectivity(spec, VoltageSymmetry::Antisymmetric, settings));
    } else {
        reports.push_back(check_single_beam_decoupling(spec, settings));
    }
    const MaterialParams& carrier =
        is_patch(spec.variant()) ? *spec.spec().patch_material : spec.spec().beam_material;
    json skipped = json::array();
    if (carrier.mu > 0.0) {
        std::vector<double> volts(spec.signal_count(), 0.0);
        for (std::size_t i = 0; i < volts.size(); ++i) {
            const VoltageSignal& s = spec.spec().voltages[i];
            volts[i] = s.kind == VoltageSignal::Kind::Zero ? 0.0 : s.amplitude;
        }
        if (std::all_of(volts.begin(), volts.end(), [](double v) { return v == 0.0; })) {
            std::fill(volts.begin(), volts.end(), 1.0);
        }
        reports.push_back(check_static_equivalence(spec, volts, settings));
    } else {
        skipped.push_back("static-equivalence (mu = 0)");
    }

    ResultBundle bundle;
    bundle.command = "check";
    json list = json::array();
    bool passed = true;
    for (const auto& r : reports) {
        list.push_back(report_json(r));
        passed = passed && r.passed();
    }
    bundle.report = {{"command", "check"},
                     {"provenance", provenance(config, nullptr)},
                     {"passed", passed},
                     {"scenarios", list},
                     {"skipped", skipped}};
    bundle.exit_code = passed ? ExitSuccess : ExitScenarioFailure;
    store_report(bundle);
    return bundle;
}

ResultBundle cmd_limit(const RunConfig& config, const std::vector<double>& mu) {
    const ValidatedModelSpec spec = config.validated();
    const RunSettings settings = config.run_settings();
    const LimitStudy study = run_electrostatic_limit(spec, mu, settings, config.threads);

    CsvTable table;
    table.header = {"mu", "distance"};
    for (std::size_t i = 0; i < study.mu.size(); ++i) table.rows.push_back({study.mu[i], study.distance[i]});
    json rates = json::array();
    for (std::size_t i = 0; i + 1 < study.mu.size(); ++i) {
        const double d0 = study.distance[i], d1 = study.distance[i + 1];
        if (d0 > 0.0 && d1 > 0.0) {
            rates.push_back(std::log(d0 / d1) / std::log(study.mu[i] / study.mu[i + 1]));
        } else {
            rates.push_back(nullptr);
        }
    }

    ResultBundle bundle;
    bundle.command = "limit";
    const json prov = provenance(config, nullptr);
    table.comments = provenance_comments(prov);
    bundle.files["limit.csv"] = write_csv(table);
    bundle.report = {{"command", "limit"},
                     {"provenance", prov},
                     {"dt", settings.dt},
                     {"t_end", settings.t_end},
                     {"mu", study.mu},
                     {"distance", study.distance},
                     {"monotone", study.monotone},
                     {"observed_rates", rates}};
    if (config.svg) {
        PlotSpec plot{"Electrostatic limit", "mu [H/m]", "relative trajectory distance", true, true};
        bundle.files["limit.svg"] = render_svg(plot, {{"distance", study.mu, study.distance}});
    }
    store_report(bundle);
    return bundle;
}

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    for (const auto& [name, content] : bundle.files) {
        std::ofstream out(directory / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::OutOfDomain, "cannot write " + (directory / name).string());
        out << content;
    }
}

}  // namespace piezobeam
