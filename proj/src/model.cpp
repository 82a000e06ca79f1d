#include "piezobeam/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace piezobeam {

Eigen::Matrix2d DerivedCoefficients::stretching_matrix() const {
    Eigen::Matrix2d c;
    c << alpha1, -coupling(), -coupling(), beta3;
    return c;
}

DerivedCoefficients derive_coefficients(const MaterialParams& m) {
    auto require_positive = [](double value, const char* name) {
        if (!(value > 0.0)) {
            std::ostringstream os;
            os << name << " must be positive, got " << value;
            throw Error(ErrorCode::NonPositiveParameter, os.str());
        }
    };
    require_positive(m.rho, "rho");
    require_positive(m.c11, "c11");
    require_positive(m.c55, "c55");
    require_positive(m.eps1, "eps1");
    require_positive(m.eps3, "eps3");
    if (!(m.mu >= 0.0)) {
        throw Error(ErrorCode::NonPositiveParameter, "mu must be non-negative");
    }

    DerivedCoefficients d;
    d.beta1 = 1.0 / m.eps1;
    d.beta3 = 1.0 / m.eps3;
    d.alpha11 = m.c11;
    d.alpha33 = m.c55;
    d.gamma1 = m.gamma15;
    d.gamma3 = m.gamma31;
    d.alpha1 = d.alpha11 + d.gamma3 * d.gamma3 * d.beta3;
    // Shear stiffening builds on the shear modulus c55.
    d.alpha3 = d.alpha33 + d.gamma1 * d.gamma1 * d.beta1;
    d.rho = m.rho;
    d.mu = m.mu;
    return d;
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::SingleEB: return "single-eb";
        case Variant::SingleMT: return "single-mt";
        case Variant::PatchEB: return "patch-eb";
        case Variant::PatchMT: return "patch-mt";
    }
    return "?";
}

std::string_view to_string(Regime r) {
    return r == Regime::FullMagnetic ? "full-magnetic" : "electrostatic";
}

std::string_view to_string(MechanicalBc bc) {
    return bc == MechanicalBc::FreeFree ? "free-free" : "clamped-free";
}

std::string_view to_string(VoltageSignal::Kind k) {
    switch (k) {
        case VoltageSignal::Kind::Zero: return "zero";
        case VoltageSignal::Kind::Constant: return "constant";
        case VoltageSignal::Kind::Step: return "step";
        case VoltageSignal::Kind::Sinusoid: return "sinusoid";
    }
    return "?";
}

double VoltageSignal::operator()(double t) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return amplitude;
        case Kind::Step: return t >= step_time ? amplitude : 0.0;
        case Kind::Sinusoid: return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
    }
    return 0.0;
}

VoltageSignal VoltageSignal::negated() const {
    VoltageSignal s = *this;
    s.amplitude = -s.amplitude;
    return s;
}

CoefficientFields::CoefficientFields(const DerivedCoefficients& beam, const DerivedCoefficients& patch,
                                     const BeamGeometry& geometry)
    : beam_(beam), patch_(patch), geometry_(geometry) {}

bool CoefficientFields::in_patch(double x) const {
    return x > geometry_.patch_begin && x < geometry_.patch_end;
}

double CoefficientFields::rho(double x) const {
    return geometry_.patch_thickness * patch_.rho * chi(x) + geometry_.core_half_thickness * beam_.rho;
}

double CoefficientFields::alpha(double x) const {
    return geometry_.patch_thickness * patch_.alpha1 * chi(x) + geometry_.core_half_thickness * beam_.alpha1;
}

double CoefficientFields::rho_tilde(double x) const {
    const double h0 = geometry_.core_half_thickness;
    return geometry_.patch_thickness * h0 * h0 * patch_.rho * chi(x) + beam_.rho * h0 * h0 * h0 / 3.0;
}

double CoefficientFields::bending(double x) const {
    const double h0 = geometry_.core_half_thickness;
    return geometry_.patch_thickness * h0 * h0 * patch_.alpha1 * chi(x) + beam_.alpha1 * h0 * h0 * h0 / 3.0;
}

double CoefficientFields::alpha_reduced(double x) const {
    return geometry_.patch_thickness * patch_.alpha11 * chi(x) + geometry_.core_half_thickness * beam_.alpha1;
}

double CoefficientFields::bending_reduced(double x) const {
    const double h0 = geometry_.core_half_thickness;
    return geometry_.patch_thickness * h0 * h0 * patch_.alpha11 * chi(x) + beam_.alpha1 * h0 * h0 * h0 / 3.0;
}

ValidatedModelSpec ValidatedModelSpec::with_regime(Regime regime) const {
    ModelSpec s = spec_;
    s.regime = regime;
    return validate_spec(s);
}

ValidatedModelSpec ValidatedModelSpec::with_voltages(std::vector<VoltageSignal> voltages) const {
    ModelSpec s = spec_;
    s.voltages = std::move(voltages);
    return validate_spec(s);
}

ValidatedModelSpec validate_spec(const ModelSpec& spec) {
    std::vector<Violation> violations;
    const bool patch = is_patch(spec.variant);
    const bool full = spec.regime == Regime::FullMagnetic;

    auto derive = [&](const MaterialParams& m, const char* which) -> DerivedCoefficients {
        try {
            return derive_coefficients(m);
        } catch (const Error& e) {
            violations.push_back({e.code(), std::string(which) + ": " + e.what()});
            return {};
        }
    };

    const DerivedCoefficients beam = derive(spec.beam_material, "beam material");
    DerivedCoefficients patch_coeffs = beam;
    if (patch) {
        if (!spec.patch_material) {
            violations.push_back({ErrorCode::MissingPatchMaterial, "patch variants need a patch material"});
        } else {
            patch_coeffs = derive(*spec.patch_material, "patch material");
        }
    }

    // The magnetic energy lives where the charge lives.
    if (full) {
        const double mu = patch ? (spec.patch_material ? spec.patch_material->mu : 1.0) : spec.beam_material.mu;
        if (!(mu > 0.0)) {
            violations.push_back({ErrorCode::NonPositiveParameter,
                                  "mu must be positive in the full-magnetic regime"});
        }
    }

    const BeamGeometry& g = spec.geometry;
    if (!(g.length > 0.0)) {
        violations.push_back({ErrorCode::InvalidGeometry, "L must be positive"});
    }
    if (patch) {
        if (!(g.core_half_thickness > 0.0)) {
            violations.push_back({ErrorCode::InvalidGeometry, "h0 must be positive"});
        }
        if (!(g.patch_thickness > 0.0)) {
            violations.push_back({ErrorCode::InvalidGeometry, "h1 must be positive"});
        }
        if (!(g.patch_begin > 0.0 && g.patch_begin < g.patch_end && g.patch_end < g.length)) {
            violations.push_back({ErrorCode::InvalidGeometry, "patch interval must satisfy 0 < a < b < L"});
        }
    } else if (!(g.thickness > 0.0)) {
        violations.push_back({ErrorCode::InvalidGeometry, "h must be positive"});
    }

    const std::size_t expected_signals = patch ? 2 : 1;
    if (spec.voltages.size() != expected_signals) {
        std::ostringstream os;
        os << to_string(spec.variant) << " takes " << expected_signals << " voltage signal(s), got "
           << spec.voltages.size();
        violations.push_back({ErrorCode::IllegalRegime, os.str()});
    }

    if (!violations.empty()) throw ValidationError(std::move(violations));
    return ValidatedModelSpec(spec, beam, patch_coeffs);
}

}  // namespace piezobeam
