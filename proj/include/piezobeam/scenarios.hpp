#pragma once

#include <string>
#include <utility>
#include <vector>

#include "piezobeam/assembly.hpp"
#include "piezobeam/model.hpp"
#include "piezobeam/time_integration.hpp"

namespace piezobeam {

/// Where an expected value comes from.
enum class Provenance { Trivial, Derived, Paper };
std::string_view to_string(Provenance p);

struct Metric {
    enum class Bound { AtMost, AtLeast };

    std::string name;
    std::string unit;
    double value = 0.0;
    double tolerance = 0.0;
    Bound bound = Bound::AtMost;
    Provenance provenance = Provenance::Derived;

    bool passed() const { return bound == Bound::AtMost ? value <= tolerance : value >= tolerance; }
};

struct ScenarioReport {
    std::string id;
    std::vector<Metric> metrics;
    /// Free-form notes (e.g. which reference was used).
    std::vector<std::pair<std::string, std::string>> notes;

    /// Fails iff at least one metric violates its tolerance.
    bool passed() const;
    const Metric& metric(const std::string& name) const;
};

struct RunSettings {
    int elements = 32;
    double dt = 1e-3;
    double t_end = 1.0;
    IntegratorSettings integrator;
    AssemblyOptions assembly;
};

/// Single-beam variants: bending (and rotation) dofs receive no forcing and
/// stay exactly zero from zero initial data. Checked on B and K directly and
/// on a simulated trajectory driven by the spec's voltage.
ScenarioReport check_single_beam_decoupling(const ValidatedModelSpec& spec, const RunSettings& settings);

enum class VoltageSymmetry { Symmetric, Antisymmetric };
std::string_view to_string(VoltageSymmetry s);

/// Patch variants driven by V^T = spec's top signal and V^B = +-V^T.
/// Symmetric voltages must excite only stretching, antisymmetric ones only
/// bending; the two charge trajectories mirror each other accordingly.
ScenarioReport check_patch_voltage_selectivity(const ValidatedModelSpec& spec, VoltageSymmetry symmetry,
                                               const RunSettings& settings);

struct LimitStudy {
    std::vector<double> mu;        ///< strictly decreasing
    std::vector<double> distance;  ///< relative L2-in-time distance of the mechanical dofs
    bool monotone = true;          ///< each distance smaller than the previous one
};

/// FullMagnetic(mu) against ElectrostaticReduced trajectories from zero
/// initial data. mu replaces the permeability of the charge-carrying
/// material (beam for single variants, patch otherwise). Sweeps run on up
/// to `threads` threads; results do not depend on the thread count.
LimitStudy run_electrostatic_limit(const ValidatedModelSpec& spec, const std::vector<double>& mu,
                                   const RunSettings& settings, int threads = 1);

/// Constant voltages (the spec's signals evaluated at t = 0 or amplitudes):
/// static FullMagnetic solution restricted to mechanical dofs against the
/// static ElectrostaticReduced solution. Uses ClampedFree if the spec is
/// free-free (the static problem needs a constrained system).
ScenarioReport check_static_equivalence(const ValidatedModelSpec& spec, const std::vector<double>& voltages,
                                        const RunSettings& settings);

enum class ConvergenceReference { AnalyticRod, AnalyticBending, FinestMesh };
std::string_view to_string(ConvergenceReference r);

struct ConvergenceStudy {
    std::vector<int> elements;
    std::vector<double> omega;   ///< fundamental elastic frequency per mesh
    std::vector<double> error;   ///< relative error against the reference
    std::vector<double> order;   ///< observed order between consecutive meshes
    double reference = 0.0;
};

/// Fundamental free-free frequency of the stretching (AnalyticRod, field v)
/// or E-B bending (AnalyticBending, field w) block, or of the full system
/// against the finest mesh. Needs at least 3 ascending element counts
/// (InsufficientMeshes).
ConvergenceStudy run_convergence(const ValidatedModelSpec& spec, const std::vector<int>& element_counts,
                                 ConvergenceReference reference);

/// Report wrapper: passes iff the smallest observed order is >= 1.8.
ScenarioReport run_convergence_study(const ValidatedModelSpec& spec, const std::vector<int>& element_counts,
                                     ConvergenceReference reference);

/// Characteristic speeds of the coupled stretching system, fast first:
/// square roots of the eigenvalues of diag(1/rho, 1/mu) [[alpha1, -g], [-g, beta3]],
/// g = gamma3 beta3. Requires mu > 0.
std::pair<double, double> stretching_wave_speeds(const MaterialParams& material);

struct TimeOfFlight {
    double expected = 0.0;   ///< c_fast
    double measured = 0.0;   ///< probe distance / arrival-time difference
    double first_arrival = 0.0;
    double second_arrival = 0.0;

    double relative_error() const { return std::abs(measured - expected) / expected; }
};

struct PulseSettings {
    int elements = 800;
    double center = 0.2;       ///< fraction of L
    double width = 0.02;       ///< Gaussian standard deviation, fraction of L
    double probe1 = 0.5;       ///< fraction of L
    double probe2 = 0.8;       ///< fraction of L
    double cfl = 0.5;          ///< dt = cfl * element length / c_fast
    double threshold = 0.01;   ///< fraction of the pulse amplitude
};

/// Launches a right-going Gaussian pulse shaped like the fast eigenvector
/// on a free-free single E-B beam (FullMagnetic, no voltage) and measures
/// the first threshold crossing of |v| at two probes.
TimeOfFlight measure_time_of_flight(const ValidatedModelSpec& spec, const PulseSettings& pulse = {});

}  // namespace piezobeam
