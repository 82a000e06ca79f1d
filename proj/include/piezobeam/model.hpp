#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

#include "piezobeam/errors.hpp"

namespace piezobeam {

/// Raw constants of one piezoelectric (or purely elastic) material.
/// All energies in this library are per unit beam width.
struct MaterialParams {
    double rho = 0.0;      ///< mass density [kg/m^3]
    double c11 = 0.0;      ///< elastic modulus [Pa]
    double c55 = 0.0;      ///< shear modulus [Pa]
    double gamma31 = 0.0;  ///< piezoelectric coefficient gamma_3 [C/m^2]
    double gamma15 = 0.0;  ///< piezoelectric coefficient gamma_1 [C/m^2]
    double eps1 = 0.0;     ///< permittivity eps_1 [F/m]
    double eps3 = 0.0;     ///< permittivity eps_3 [F/m]
    double mu = 0.0;       ///< magnetic permeability [H/m]

    bool operator==(const MaterialParams&) const = default;
};

/// Coefficients entering the beam energies. alpha1 and alpha3 are the
/// electrically stiffened moduli; alpha11/alpha33 are the bare ones.
struct DerivedCoefficients {
    double beta1 = 0.0;
    double beta3 = 0.0;
    double alpha11 = 0.0;
    double alpha33 = 0.0;
    double alpha1 = 0.0;
    double alpha3 = 0.0;
    double gamma1 = 0.0;
    double gamma3 = 0.0;
    double rho = 0.0;
    double mu = 0.0;

    /// gamma3 * beta3, the stretching/charge coupling coefficient.
    double coupling() const { return gamma3 * beta3; }

    /// [[alpha1, -gamma3 beta3], [-gamma3 beta3, beta3]]
    Eigen::Matrix2d stretching_matrix() const;
};

/// Throws Error(NonPositiveParameter) if rho, c11, c55, eps1 or eps3 is not
/// positive, or mu is negative. A zero mu is accepted here; whether it is
/// legal depends on the regime and is checked by validate_spec.
DerivedCoefficients derive_coefficients(const MaterialParams& m);

struct BeamGeometry {
    double length = 0.0;               ///< L [m]
    double thickness = 0.0;            ///< h, single beam [m]
    double core_half_thickness = 0.0;  ///< h0, patch configuration [m]
    double patch_thickness = 0.0;      ///< h1 [m]
    double patch_begin = 0.0;          ///< a [m]
    double patch_end = 0.0;            ///< b [m]

    bool operator==(const BeamGeometry&) const = default;
};

enum class Variant { SingleEB, SingleMT, PatchEB, PatchMT };
enum class Regime { FullMagnetic, ElectrostaticReduced };
enum class MechanicalBc { FreeFree, ClampedFree };

constexpr bool is_patch(Variant v) { return v == Variant::PatchEB || v == Variant::PatchMT; }
constexpr bool is_euler_bernoulli(Variant v) { return v == Variant::SingleEB || v == Variant::PatchEB; }

std::string_view to_string(Variant v);
std::string_view to_string(Regime r);
std::string_view to_string(MechanicalBc bc);

struct VoltageSignal {
    enum class Kind { Zero, Constant, Step, Sinusoid };

    Kind kind = Kind::Zero;
    double amplitude = 0.0;  ///< [V]
    double frequency = 0.0;  ///< [Hz], sinusoid only
    double step_time = 0.0;  ///< [s], step only

    static VoltageSignal zero() { return {}; }
    static VoltageSignal constant(double amplitude) { return {Kind::Constant, amplitude, 0.0, 0.0}; }
    static VoltageSignal step(double amplitude, double at) { return {Kind::Step, amplitude, 0.0, at}; }
    static VoltageSignal sinusoid(double amplitude, double frequency) {
        return {Kind::Sinusoid, amplitude, frequency, 0.0};
    }

    double operator()(double t) const;
    VoltageSignal negated() const;

    bool operator==(const VoltageSignal&) const = default;
};

std::string_view to_string(VoltageSignal::Kind k);

struct ModelSpec {
    Variant variant = Variant::SingleEB;
    Regime regime = Regime::FullMagnetic;
    MaterialParams beam_material;
    std::optional<MaterialParams> patch_material;
    BeamGeometry geometry;
    MechanicalBc bc = MechanicalBc::FreeFree;
    /// One signal for single-beam variants; (top, bottom) for patch variants.
    std::vector<VoltageSignal> voltages;

    bool operator==(const ModelSpec&) const = default;
};

/// Piecewise-constant coefficients of the beam-patch system, with jumps at the
/// patch edges a and b.
class CoefficientFields {
public:
    CoefficientFields(const DerivedCoefficients& beam, const DerivedCoefficients& patch,
                      const BeamGeometry& geometry);

    bool in_patch(double x) const;

    double rho(double x) const;          ///< h1 rho^p chi + h0 rho
    double alpha(double x) const;        ///< h1 alpha1^p chi + h0 alpha1
    double rho_tilde(double x) const;    ///< h1 h0^2 rho^p chi + rho h0^3 / 3
    double bending(double x) const;      ///< A(x) = h1 h0^2 alpha1^p chi + alpha1 h0^3 / 3

    /// Coefficients of the charge-eliminated model: the patch contributes its
    /// bare modulus alpha11^p instead of alpha1^p.
    double alpha_reduced(double x) const;    ///< h1 alpha11^p chi + h0 alpha1
    double bending_reduced(double x) const;  ///< h1 h0^2 alpha11^p chi + alpha1 h0^3 / 3

private:
    double chi(double x) const { return in_patch(x) ? 1.0 : 0.0; }

    DerivedCoefficients beam_;
    DerivedCoefficients patch_;
    BeamGeometry geometry_;
};

/// A ModelSpec that passed validate_spec. Immutable.
class ValidatedModelSpec {
public:
    const ModelSpec& spec() const { return spec_; }
    Variant variant() const { return spec_.variant; }
    Regime regime() const { return spec_.regime; }
    const BeamGeometry& geometry() const { return spec_.geometry; }
    const DerivedCoefficients& beam() const { return beam_; }
    /// Patch coefficients; equals beam() for single-beam variants.
    const DerivedCoefficients& patch() const { return patch_; }
    CoefficientFields coefficient_fields() const { return {beam_, patch_, spec_.geometry}; }
    std::size_t signal_count() const { return spec_.voltages.size(); }

    /// Same model with another regime (re-validated).
    ValidatedModelSpec with_regime(Regime regime) const;
    /// Same model with other voltage signals (re-validated).
    ValidatedModelSpec with_voltages(std::vector<VoltageSignal> voltages) const;

private:
    ValidatedModelSpec(ModelSpec spec, DerivedCoefficients beam, DerivedCoefficients patch)
        : spec_(std::move(spec)), beam_(beam), patch_(patch) {}

    friend ValidatedModelSpec validate_spec(const ModelSpec& spec);

    ModelSpec spec_;
    DerivedCoefficients beam_;
    DerivedCoefficients patch_;
};

/// Collects every violation and throws ValidationError if there is any.
ValidatedModelSpec validate_spec(const ModelSpec& spec);

}  // namespace piezobeam
